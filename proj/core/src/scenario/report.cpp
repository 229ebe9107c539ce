#include "oatb/scenario/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "oatb/scenario/bundle.hpp"
#include "oatb/stats/noninferiority.hpp"
#include "oatb/util/csv.hpp"
#include "oatb/util/hash.hpp"

namespace oatb::scenario {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ScenarioError("cannot open " + p.string());
  return json::parse(in);
}

struct Agg {
  std::vector<double> values;

  void add(double v) { values.push_back(v); }
  std::size_t n() const { return values.size(); }
  double mean() const { return stats::mean(values); }
  double sd() const {
    return values.size() < 2 ? 0.0 : std::sqrt(stats::sample_variance(values));
  }
  double min() const { return *std::min_element(values.begin(), values.end()); }
  double max() const { return *std::max_element(values.begin(), values.end()); }
};

std::string fmt(double x) { return util::format_double(x); }

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ScenarioError("cannot write " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw ScenarioError("write failed: " + p.string());
}

void report_simulate(const std::filesystem::path& dir,
                     const std::vector<std::string>& verified, ReportResult& out) {
  const json runs = load_json(dir / "runs.json");
  std::ostringstream text;
  text << "mode: simulate\n";
  text << "architecture: " << runs.at("architecture").get<std::string>() << "\n";
  text << "seed: " << runs.at("seed") << "  duration_s: " << fmt(runs.at("duration_s")) << "\n";

  std::map<std::string, Agg> metrics;
  for (const auto& rep : runs.at("replications")) {
    const auto& q = rep.at("qoe");
    if (!q.at("page_delay_mean_s").is_null())
      metrics["page_delay"].add(q.at("page_delay_mean_s").get<double>());
    if (!q.at("decodable_frame_rate").is_null())
      metrics["dfr"].add(q.at("decodable_frame_rate").get<double>());
  }
  const std::size_t reps = runs.at("replications").size();
  text << "replications: " << reps << "\n";

  std::string qoe_csv = "metric,n,mean,sd,min,max\n";
  for (const auto& [name, agg] : metrics) {
    qoe_csv += name + "," + std::to_string(agg.n()) + "," + fmt(agg.mean()) + "," +
               fmt(agg.sd()) + "," + fmt(agg.min()) + "," + fmt(agg.max()) + "\n";
    text << name << ": n=" << agg.n() << " mean=" << fmt(agg.mean()) << " sd=" << fmt(agg.sd())
         << "\n";
  }
  write_file(dir / "report" / "qoe_summary.csv", qoe_csv);
  out.written.push_back("report/qoe_summary.csv");

  std::array<Agg, energy::kClassCount> class_e;
  Agg total_e;
  Agg jpb;
  for (const auto& rel : verified) {
    if (rel.size() < 12 || rel.rfind("/energy.json") != rel.size() - 12) continue;
    const json e = load_json(dir / rel);
    total_e.add(e.at("total_j").get<double>());
    if (!e.at("joules_per_bit").is_null()) jpb.add(e.at("joules_per_bit").get<double>());
    for (std::size_t i = 0; i < energy::kClassCount; ++i) {
      auto cls = static_cast<energy::ComponentClass>(i);
      class_e[i].add(e.at("energy_j").at(energy::to_string(cls)).get<double>());
    }
  }
  if (total_e.n() > 0) {
    std::string energy_csv = "class,mean_energy_j,mean_share_pct\n";
    text << "energy: mean total " << fmt(total_e.mean()) << " J";
    if (jpb.n() > 0) text << ", mean " << fmt(jpb.mean()) << " J/bit";
    text << "\n";
    for (std::size_t i = 0; i < energy::kClassCount; ++i) {
      auto cls = static_cast<energy::ComponentClass>(i);
      const double share = total_e.mean() > 0.0 ? 100.0 * class_e[i].mean() / total_e.mean() : 0.0;
      energy_csv += std::string(energy::to_string(cls)) + "," + fmt(class_e[i].mean()) + "," +
                    fmt(share) + "\n";
      text << "  " << energy::to_string(cls) << ": " << fmt(class_e[i].mean()) << " J ("
           << fmt(share) << "%)\n";
    }
    write_file(dir / "report" / "energy_by_class.csv", energy_csv);
    out.written.push_back("report/energy_by_class.csv");
  }
  out.summary = text.str();
}

void report_ecr(const std::filesystem::path& dir, ReportResult& out) {
  const json ecr = load_json(dir / "ecr.json");
  std::ostringstream text;
  text << "mode: ecr\n";
  text << "status: " << ecr.at("status").get<std::string>() << "\n";
  if (ecr.at("ecr_mbps").is_null())
    text << "ecr_mbps: none (no grid rate demonstrated non-inferiority)\n";
  else
    text << "ecr_mbps: " << fmt(ecr.at("ecr_mbps").get<double>()) << "\n";
  text << "grid clipped at " << fmt(ecr.at("clip_mbps").get<double>()) << " Mb/s\n";

  std::string table = "rate_mbps,overall,metric,estimate,adverse_bound,margin,decision\n";
  for (const auto& rate : ecr.at("rates")) {
    const double mbps = rate.at("rate_mbps").get<double>();
    const std::string overall = rate.at("decision").get<std::string>();
    text << "rate " << fmt(mbps) << " Mb/s: " << overall << "\n";
    for (const auto& t : rate.at("tests")) {
      table += fmt(mbps) + "," + overall + "," + t.at("metric").get<std::string>() + "," +
               fmt(t.at("estimate").get<double>()) + "," +
               fmt(t.at("adverse_bound").get<double>()) + "," +
               fmt(t.at("margin").get<double>()) + "," + t.at("decision").get<std::string>() +
               "\n";
      text << "  " << t.at("metric").get<std::string>() << ": "
           << t.at("decision").get<std::string>() << " (estimate "
           << fmt(t.at("estimate").get<double>()) << ", adverse bound "
           << fmt(t.at("adverse_bound").get<double>()) << ", margin "
           << fmt(t.at("margin").get<double>()) << ")\n";
    }
  }
  write_file(dir / "report" / "rate_table.csv", table);
  out.written.push_back("report/rate_table.csv");

  std::ifstream rates_in(dir / "rates.csv");
  if (!rates_in) throw ScenarioError("cannot open " + (dir / "rates.csv").string());
  std::string line;
  std::getline(rates_in, line);
  std::map<std::tuple<double, std::string, std::string>, Agg> by_rate;
  while (std::getline(rates_in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        cols.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cols.size() != 5) throw ScenarioError("malformed rates.csv row: " + line);
    by_rate[{std::stod(cols[0]), cols[1], cols[3]}].add(std::stod(cols[4]));
  }
  std::string by_rate_csv = "rate_mbps,arm,metric,n,mean,sd\n";
  for (const auto& [key, agg] : by_rate) {
    by_rate_csv += fmt(std::get<0>(key)) + "," + std::get<1>(key) + "," + std::get<2>(key) +
                   "," + std::to_string(agg.n()) + "," + fmt(agg.mean()) + "," + fmt(agg.sd()) +
                   "\n";
  }
  write_file(dir / "report" / "qoe_by_rate.csv", by_rate_csv);
  out.written.push_back("report/qoe_by_rate.csv");
  out.summary = text.str();
}

}  // namespace

std::vector<std::string> verify_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ScenarioError("not a bundle directory: " + dir.string());
  if (std::filesystem::exists(dir / "INCOMPLETE")) {
    std::ifstream in(dir / "INCOMPLETE");
    std::string reason;
    std::getline(in, reason);
    throw ScenarioError("bundle is incomplete: " + (reason.empty() ? "unknown failure" : reason));
  }
  const auto manifest_path = dir / "MANIFEST";
  if (!std::filesystem::exists(manifest_path))
    throw ScenarioError("no MANIFEST in " + dir.string());
  std::vector<std::string> verified;
  for (const auto& [rel, sha] : read_manifest(manifest_path)) {
    const auto p = dir / rel;
    if (!std::filesystem::exists(p)) throw ScenarioError("missing bundle file: " + rel);
    const std::string got = util::sha256_file(p.string());
    if (got != sha)
      throw ScenarioError("digest mismatch for " + rel + ": manifest " + sha + ", file " + got);
    verified.push_back(rel);
  }
  return verified;
}

ReportResult make_report(const std::filesystem::path& dir) {
  const auto verified = verify_bundle(dir);
  std::filesystem::create_directories(dir / "report");
  ReportResult out;
  const bool is_ecr = std::find(verified.begin(), verified.end(), "ecr.json") != verified.end();
  if (is_ecr)
    report_ecr(dir, out);
  else
    report_simulate(dir, verified, out);
  return out;
}

}  // namespace oatb::scenario
