#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oatb/scenario/bundle.hpp"
#include "oatb/scenario/report.hpp"
#include "oatb/scenario/scenario.hpp"

using namespace oatb;
using scenario::parse_scenario_text;
using scenario::ScenarioError;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "oatb_bundle_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

scenario::Scenario small_simulate() {
  return parse_scenario_text(R"([run]
mode = simulate
duration_s = 1
seed = 11
replications = 2
workers = 1

[architecture]
kind = point_to_point
onu_count = 2
users_per_onu = 1
line_rate_bps = 100e6

[traffic]
profile = flat
session_rate_per_hour = 60
web_mix = 1.0
start_hour = 12
)",
                             "small.scn", {});
}

scenario::Scenario small_ecr() {
  return parse_scenario_text(R"([run]
mode = ecr
duration_s = 2
seed = 4

[architecture]
kind = tdm_pon
onu_count = 2
users_per_onu = 4
feeder_rate_bps = 50e6
distribution_rate_bps = 100e6

[traffic]
profile = flat
session_rate_per_hour = 3600
web_mix = 1.0
start_hour = 12

[qoe]
metrics = page_delay

[ecr]
grid_mbps = 10,25
replications = 2
)",
                             "small_ecr.scn", {});
}

bool is_hex64(const std::string& s) {
  if (s.size() != 64) return false;
  for (char c : s)
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

TEST_CASE("resolve_out_dir prefers the explicit path, then the env root") {
  CHECK(scenario::resolve_out_dir("out/some.bundle", "x") == fs::path("out/some.bundle"));

  setenv("OATB_OUT_ROOT", "/tmp/oatb_root", 1);
  CHECK(scenario::resolve_out_dir("", "smoke") == fs::path("/tmp/oatb_root") / "smoke.bundle");

  unsetenv("OATB_OUT_ROOT");
  CHECK(scenario::resolve_out_dir("", "smoke") == fs::path(".") / "smoke.bundle");
}

TEST_CASE("read_manifest parses entries and rejects malformed lines") {
  const fs::path dir = fresh_dir("manifest");
  fs::create_directories(dir);
  const std::string sha_a(64, 'a');
  const std::string sha_b = std::string(63, '0') + "f";

  SUBCASE("well formed") {
    spit(dir / "m", sha_a + "  qoe.csv\n\n" + sha_b + "  rep_000/mac_down.csv\n");
    const auto entries = scenario::read_manifest(dir / "m");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].first == "qoe.csv");
    CHECK(entries[0].second == sha_a);
    CHECK(entries[1].first == "rep_000/mac_down.csv");
    CHECK(entries[1].second == sha_b);
  }
  SUBCASE("short line") {
    spit(dir / "m", "deadbeef  x\n");
    CHECK_THROWS_WITH_AS(scenario::read_manifest(dir / "m"),
                         doctest::Contains(":1: malformed entry"), ScenarioError);
  }
  SUBCASE("single separator space") {
    spit(dir / "m", sha_a + " single_space_after_digest\n");
    CHECK_THROWS_WITH_AS(scenario::read_manifest(dir / "m"),
                         doctest::Contains(":1: malformed entry"), ScenarioError);
  }
  SUBCASE("non-hex digest") {
    spit(dir / "m", sha_a + "  ok\n" + std::string(63, 'a') + "z  bad\n");
    CHECK_THROWS_WITH_AS(scenario::read_manifest(dir / "m"),
                         doctest::Contains(":2: malformed digest"), ScenarioError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(scenario::read_manifest(dir / "absent"),
                         doctest::Contains("cannot open manifest"), ScenarioError);
  }
}

TEST_CASE("simulate bundle layout, manifest format, and verification") {
  const fs::path dir = fresh_dir("simulate");
  const auto s = small_simulate();
  const auto result = scenario::run_bundle(s, dir, false);

  CHECK(result.dir == dir);
  CHECK(result.mode == scenario::Mode::simulate);
  REQUIRE(result.replications.size() == 2);
  CHECK(result.replications[0].replication == 0);
  CHECK(result.replications[1].replication == 1);

  for (const char* rel : {"scenario.resolved", "qoe.csv", "runs.json", "MANIFEST",
                          "rep_000/mac_down.csv", "rep_000/mac_up.csv", "rep_000/energy.json",
                          "rep_001/mac_down.csv", "rep_001/mac_up.csv", "rep_001/energy.json"}) {
    CHECK_MESSAGE(fs::exists(dir / rel), rel);
  }
  CHECK_FALSE(fs::exists(dir / "rep_000/power_timeline.csv"));
  CHECK_FALSE(fs::exists(dir / "INCOMPLETE"));

  SUBCASE("manifest lines are sorted sha256 pairs") {
    std::ifstream in(dir / "MANIFEST");
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(in, line)) {
      REQUIRE(line.size() > 66);
      CHECK(is_hex64(line.substr(0, 64)));
      CHECK(line.substr(64, 2) == "  ");
      paths.push_back(line.substr(66));
    }
    CHECK(paths.size() == 9);
    CHECK(std::is_sorted(paths.begin(), paths.end()));
    CHECK(std::find(paths.begin(), paths.end(), "MANIFEST") == paths.end());
  }

  SUBCASE("verify returns every listed path") {
    const auto verified = scenario::verify_bundle(dir);
    CHECK(verified.size() == 9);
    CHECK(std::find(verified.begin(), verified.end(), "runs.json") != verified.end());
    CHECK(std::find(verified.begin(), verified.end(), "rep_001/energy.json") != verified.end());
  }

  SUBCASE("runs.json carries per-replication seeds and hashes") {
    const auto j = nlohmann::json::parse(slurp(dir / "runs.json"));
    CHECK(j.at("mode") == "simulate");
    CHECK(j.at("architecture") == "point_to_point");
    CHECK(j.at("seed") == 11);
    REQUIRE(j.at("replications").size() == 2);
    const auto& r0 = j.at("replications")[0];
    CHECK(r0.at("seed_path") == "rep/0");
    CHECK(r0.at("trace_hash").get<std::string>().size() == 16);
    CHECK(r0.at("engine_seed").get<std::string>().size() == 16);
  }

  SUBCASE("mac tables have one row per onu") {
    const std::string down = slurp(dir / "rep_000/mac_down.csv");
    CHECK(std::count(down.begin(), down.end(), '\n') == 3);
    CHECK(down.rfind("onu,offered_packets", 0) == 0);
  }

  SUBCASE("existing directory is refused without force") {
    CHECK_THROWS_WITH_AS(scenario::run_bundle(s, dir, false),
                         doctest::Contains("(pass --force)"), ScenarioError);
  }

  SUBCASE("force reruns byte-identically") {
    std::vector<std::pair<std::string, std::string>> before;
    for (const auto& rel : scenario::verify_bundle(dir)) before.emplace_back(rel, slurp(dir / rel));
    const std::string manifest_before = slurp(dir / "MANIFEST");

    scenario::run_bundle(s, dir, true);
    CHECK(slurp(dir / "MANIFEST") == manifest_before);
    for (const auto& [rel, content] : before) CHECK_MESSAGE(slurp(dir / rel) == content, rel);
  }
}

TEST_CASE("tampering and missing pieces fail verification") {
  const fs::path dir = fresh_dir("tamper");
  scenario::run_bundle(small_simulate(), dir, false);

  SUBCASE("modified file") {
    spit(dir / "qoe.csv", slurp(dir / "qoe.csv") + "x");
    try {
      scenario::verify_bundle(dir);
      FAIL("expected a digest mismatch");
    } catch (const ScenarioError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("digest mismatch for qoe.csv") != std::string::npos);
      CHECK(msg.find(": manifest ") != std::string::npos);
      CHECK(msg.find(", file ") != std::string::npos);
    }
    CHECK_THROWS_AS(scenario::make_report(dir), ScenarioError);
  }
  SUBCASE("deleted file") {
    fs::remove(dir / "rep_001" / "mac_up.csv");
    CHECK_THROWS_WITH_AS(scenario::verify_bundle(dir),
                         doctest::Contains("missing bundle file: rep_001/mac_up.csv"),
                         ScenarioError);
  }
  SUBCASE("incomplete marker") {
    spit(dir / "INCOMPLETE", "ran out of luck\n");
    CHECK_THROWS_WITH_AS(scenario::verify_bundle(dir),
                         doctest::Contains("bundle is incomplete: ran out of luck"),
                         ScenarioError);
  }
  SUBCASE("no manifest") {
    fs::remove(dir / "MANIFEST");
    CHECK_THROWS_WITH_AS(scenario::verify_bundle(dir), doctest::Contains("no MANIFEST"),
                         ScenarioError);
  }
  SUBCASE("not a directory") {
    CHECK_THROWS_WITH_AS(scenario::verify_bundle(dir / "nope"),
                         doctest::Contains("not a bundle directory"), ScenarioError);
  }
}

TEST_CASE("a failing run leaves an INCOMPLETE marker behind") {
  const fs::path dir = fresh_dir("incomplete");
  auto s = small_ecr();
  s.traffic.profile.session_rate_per_hour = 0.0;

  CHECK_THROWS(scenario::run_bundle(s, dir, false));
  CHECK(fs::exists(dir / "INCOMPLETE"));
  CHECK_FALSE(fs::exists(dir / "MANIFEST"));
  CHECK_THROWS_WITH_AS(scenario::verify_bundle(dir), doctest::Contains("bundle is incomplete"),
                       ScenarioError);
  CHECK(slurp(dir / "INCOMPLETE").find("insufficient data") != std::string::npos);
}

TEST_CASE("report tables live outside the manifest") {
  const fs::path dir = fresh_dir("report_sim");
  scenario::run_bundle(small_simulate(), dir, false);

  const auto rep = scenario::make_report(dir);
  CHECK(rep.summary.find("mode: simulate") != std::string::npos);
  CHECK(rep.summary.find("architecture: point_to_point") != std::string::npos);
  CHECK(rep.summary.find("replications: 2") != std::string::npos);
  CHECK(rep.summary.find("energy: mean total") != std::string::npos);
  REQUIRE(std::find(rep.written.begin(), rep.written.end(), "report/qoe_summary.csv") !=
          rep.written.end());
  REQUIRE(std::find(rep.written.begin(), rep.written.end(), "report/energy_by_class.csv") !=
          rep.written.end());
  for (const auto& rel : rep.written) CHECK(fs::exists(dir / rel));

  const std::string energy_csv = slurp(dir / "report/energy_by_class.csv");
  CHECK(energy_csv.rfind("class,mean_energy_j,mean_share_pct\n", 0) == 0);
  CHECK(energy_csv.find("core,") != std::string::npos);
  CHECK(energy_csv.find("onu,") != std::string::npos);

  const auto verified = scenario::verify_bundle(dir);
  for (const auto& rel : verified) CHECK(rel.rfind("report/", 0) != 0);

  const auto again = scenario::make_report(dir);
  CHECK(again.summary == rep.summary);
}

TEST_CASE("ecr bundles carry the search transcript and report") {
  const fs::path dir = fresh_dir("report_ecr");
  const auto result = scenario::run_bundle(small_ecr(), dir, false);

  CHECK(result.mode == scenario::Mode::ecr);
  REQUIRE(result.ecr.has_value());
  CHECK(result.ecr->clip_bps == doctest::Approx(50e6));
  REQUIRE(!result.ecr->rates.empty());

  const auto j = nlohmann::json::parse(slurp(dir / "ecr.json"));
  CHECK(j.at("clip_mbps") == doctest::Approx(50.0));
  CHECK(j.at("request").at("replications") == 2);
  CHECK(j.at("request").at("pairing") == "common_random_numbers");
  REQUIRE(!j.at("rates").empty());
  CHECK(j.at("rates")[0].at("rate_mbps") == doctest::Approx(10.0));
  CHECK(j.at("rates")[0].at("tests")[0].at("metric") == "page_delay");

  const std::string rates = slurp(dir / "rates.csv");
  CHECK(rates.rfind("rate_mbps,arm,replication,metric,value\n", 0) == 0);
  CHECK(rates.find(",candidate,0,page_delay,") != std::string::npos);
  CHECK(rates.find(",reference,1,page_delay,") != std::string::npos);

  const auto rep = scenario::make_report(dir);
  CHECK(rep.summary.find("mode: ecr") != std::string::npos);
  CHECK(rep.summary.find("status: ") != std::string::npos);
  CHECK(rep.summary.find("grid clipped at 50 Mb/s") != std::string::npos);
  REQUIRE(std::find(rep.written.begin(), rep.written.end(), "report/rate_table.csv") !=
          rep.written.end());
  REQUIRE(std::find(rep.written.begin(), rep.written.end(), "report/qoe_by_rate.csv") !=
          rep.written.end());

  const std::string by_rate = slurp(dir / "report/qoe_by_rate.csv");
  CHECK(by_rate.rfind("rate_mbps,arm,metric,n,mean,sd\n", 0) == 0);
  CHECK(by_rate.find("10,candidate,page_delay,2,") != std::string::npos);
}
