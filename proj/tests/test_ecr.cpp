#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oatb/ecr/ecr.hpp"
#include "oatb/sim/rng.hpp"

using namespace oatb;
using ecr::EcrRequest;
using ecr::EcrResult;
using ecr::GridStatus;
using ecr::Pairing;

namespace {

// Closed-form stand-in for the simulator: page delay falls with the
// effective subscriber rate, DFR rises toward one. Point-to-point configs
// take their line rate; anything else takes the speeds injected below.
// Jitter is derived from (root_seed, seed_path) only, so paired seed paths
// reproduce it exactly.
class SyntheticRunner : public ecr::ArmRunner {
 public:
  double delay_speed_bps = 100e6;
  double dfr_speed_bps = 100e6;
  bool emit_dfr = true;
  bool noisy = true;
  int calls = 0;

  traffic::ReplicationQoe run(const arch::ArchitectureConfig& config, const std::string& seed_path,
                              std::uint64_t root_seed, int) override {
    ++calls;
    const bool p2p = config.kind == arch::Kind::point_to_point;
    const double speed = p2p ? config.line_rate_bps : delay_speed_bps;
    const double dspeed = p2p ? config.line_rate_bps : dfr_speed_bps;
    sim::RngStream noise(root_seed, seed_path);
    const double jitter = noisy ? 0.01 * (noise.uniform01() - 0.5) : 0.0;
    traffic::ReplicationQoe q;
    q.page_delay_mean_s = 1e9 / speed + jitter;
    if (emit_dfr)
      q.decodable_frame_rate = std::clamp(1.0 - 5e6 / dspeed + 0.001 * jitter, 0.0, 1.0);
    q.pages_used = 10;
    return q;
  }
};

arch::ArchitectureConfig tdm_candidate() {
  arch::ArchitectureConfig c;
  c.kind = arch::Kind::tdm_pon;
  c.onu_count = 4;
  c.feeder_rate_bps = 1e9;
  c.distribution_rate_bps = 1e9;
  return c;
}

std::vector<ecr::EcrMetric> delay_only() {
  auto m = ecr::default_metrics();
  m.resize(1);
  return m;
}

}  // namespace

TEST_CASE("seed paths pair arms under CRN and separate them otherwise") {
  CHECK(ecr::arm_seed_path(Pairing::common_random_numbers, "candidate", 3) == "rep/3");
  CHECK(ecr::arm_seed_path(Pairing::common_random_numbers, "reference", 3) == "rep/3");
  CHECK(ecr::arm_seed_path(Pairing::independent, "candidate", 3) == "arm/candidate/rep/3");
  CHECK(ecr::arm_seed_path(Pairing::independent, "reference", 3) == "arm/reference/rep/3");
}

TEST_CASE("the reference arm is a point-to-point twin at the probe rate") {
  auto cand = tdm_candidate();
  cand.users_per_onu = 3;
  cand.buffer_bytes = 123456;
  const auto ref = ecr::reference_config(cand, 25e6);
  CHECK(ref.kind == arch::Kind::point_to_point);
  CHECK(ref.onu_count == cand.onu_count);
  CHECK(ref.users_per_onu == 3);
  CHECK(ref.line_rate_bps == 25e6);
  CHECK(ref.buffer_bytes == 123456);
  CHECK(ref.feeder_length_km == cand.feeder_length_km);
}

TEST_CASE("the scan stops at the first failed rung and keeps the last pass") {
  SyntheticRunner runner;
  runner.delay_speed_bps = 80e6;  // candidate page delay 12.5 s
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.metrics = delay_only();
  request.replications = 5;
  request.root_seed = 7;

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.status == GridStatus::resolved);
  REQUIRE(result.ecr_bps.has_value());
  CHECK(*result.ecr_bps == 50e6);
  CHECK(result.clip_bps == 1e9);

  // 10, 25, 50 pass; 100 fails; 155 onward never evaluated.
  REQUIRE(result.rates.size() == 4);
  CHECK(result.rates[0].rate_bps == 10e6);
  CHECK(result.rates[3].rate_bps == 100e6);
  for (int i = 0; i < 3; ++i)
    CHECK(result.rates[std::size_t(i)].iut.overall == stats::Decision::non_inferior);
  CHECK(result.rates[3].iut.overall == stats::Decision::not_demonstrated);

  // Candidate samples are computed once and reused at every rung.
  CHECK(runner.calls == 5 * (1 + 4));
  for (const auto& rd : result.rates)
    for (std::size_t k = 0; k < 5; ++k)
      CHECK(rd.candidate.replications[k].page_delay_mean_s ==
            result.rates[0].candidate.replications[k].page_delay_mean_s);
}

TEST_CASE("a candidate beating the whole grid reports above_grid") {
  SyntheticRunner runner;
  runner.delay_speed_bps = 4e9;
  runner.dfr_speed_bps = 4e9;
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.metrics = delay_only();
  request.replications = 5;

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.status == GridStatus::above_grid);
  REQUIRE(result.ecr_bps.has_value());
  CHECK(*result.ecr_bps == 1000e6);
  CHECK(result.rates.size() == 8);
}

TEST_CASE("a candidate losing the first rung reports below_grid") {
  SyntheticRunner runner;
  runner.delay_speed_bps = 5e6;  // delay 200 s, worse than even the 10 Mb/s reference
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.metrics = delay_only();
  request.replications = 5;

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.status == GridStatus::below_grid);
  CHECK_FALSE(result.ecr_bps.has_value());
  CHECK(result.rates.size() == 1);
}

TEST_CASE("the grid is clipped at the subscriber rate bound") {
  SyntheticRunner runner;
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.candidate.distribution_rate_bps = 60e6;  // clip between 50 and 100
  request.metrics = delay_only();
  request.replications = 5;
  runner.delay_speed_bps = 4e9;

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.clip_bps == 60e6);
  CHECK(result.rates.size() == 3);  // 10, 25, 50
  CHECK(result.status == GridStatus::above_grid);
  CHECK(*result.ecr_bps == 50e6);
}

TEST_CASE("clipping away every rung is an error") {
  SyntheticRunner runner;
  EcrRequest request;
  request.candidate.kind = arch::Kind::point_to_point;
  request.candidate.line_rate_bps = 5e6;  // below the lowest default rung
  request.metrics = delay_only();
  CHECK_THROWS_WITH_AS(ecr::compute_ecr(runner, request),
                       doctest::Contains("empty after clipping"), std::runtime_error);
}

TEST_CASE("a point-to-point candidate equals its own reference at its line rate") {
  SyntheticRunner runner;
  runner.noisy = false;  // constant samples: the top rung degenerates exactly
  EcrRequest request;
  request.candidate.kind = arch::Kind::point_to_point;
  request.candidate.line_rate_bps = 100e6;
  request.metrics = delay_only();
  request.replications = 5;
  request.pairing = Pairing::common_random_numbers;

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.clip_bps == 100e6);
  CHECK(result.status == GridStatus::above_grid);
  REQUIRE(result.ecr_bps.has_value());
  CHECK(*result.ecr_bps == 100e6);

  // At the top rung the paired samples are bit-identical; the comparison
  // degenerates to the means and the zero difference sits inside the margin.
  const auto& top = result.rates.back();
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(*top.candidate.replications[k].page_delay_mean_s ==
          *top.reference.replications[k].page_delay_mean_s);
  CHECK(top.iut.components[0].degenerate);
  CHECK(top.iut.components[0].estimate == 0.0);
}

TEST_CASE("common random numbers cancel the shared jitter") {
  auto paired_differences = [](Pairing pairing) {
    SyntheticRunner runner;
    runner.delay_speed_bps = 80e6;
    EcrRequest request;
    request.candidate = tdm_candidate();
    request.metrics = delay_only();
    request.replications = 6;
    request.pairing = pairing;
    request.rate_grid_bps = {50e6};
    const EcrResult result = ecr::compute_ecr(runner, request);
    std::vector<double> diffs;
    for (std::size_t k = 0; k < 6; ++k)
      diffs.push_back(*result.rates[0].candidate.replications[k].page_delay_mean_s -
                      *result.rates[0].reference.replications[k].page_delay_mean_s);
    return diffs;
  };

  const auto crn = paired_differences(Pairing::common_random_numbers);
  for (double d : crn) CHECK(d == doctest::Approx(crn[0]).epsilon(1e-12));

  const auto indep = paired_differences(Pairing::independent);
  double spread = 0.0;
  for (double d : indep) spread = std::max(spread, std::fabs(d - indep[0]));
  CHECK(spread > 1e-4);
}

TEST_CASE("relative margins materialize against the reference mean") {
  SyntheticRunner runner;
  runner.delay_speed_bps = 80e6;
  runner.noisy = false;
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.metrics = delay_only();
  REQUIRE(request.metrics[0].margin_kind == ecr::MarginKind::relative_to_reference_mean);
  REQUIRE(request.metrics[0].margin == 0.10);
  request.replications = 5;
  request.rate_grid_bps = {25e6};

  const EcrResult result = ecr::compute_ecr(runner, request);
  const auto& test = result.rates[0].iut.components[0];
  CHECK(test.margin == doctest::Approx(0.10 * (1e9 / 25e6)).epsilon(1e-12));
  CHECK(test.mean_reference == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("the IUT rejects when any one metric fails") {
  SyntheticRunner runner;
  runner.delay_speed_bps = 4e9;  // page delay passes everywhere
  runner.dfr_speed_bps = 80e6;   // DFR 0.9375 loses above ~118 Mb/s
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.replications = 5;
  REQUIRE(request.metrics.size() == 2);

  const EcrResult result = ecr::compute_ecr(runner, request);
  CHECK(result.status == GridStatus::resolved);
  CHECK(*result.ecr_bps == 100e6);
  const auto& failing = result.rates.back();
  CHECK(failing.rate_bps == 155e6);
  REQUIRE(failing.iut.components.size() == 2);
  CHECK(failing.iut.components[0].metric == "page_delay");
  CHECK(failing.iut.components[0].decision == stats::Decision::non_inferior);
  CHECK(failing.iut.components[1].metric == "dfr");
  CHECK(failing.iut.components[1].decision == stats::Decision::not_demonstrated);
  CHECK(failing.iut.overall == stats::Decision::not_demonstrated);
}

TEST_CASE("a replication that cannot produce a requested metric is an error") {
  SyntheticRunner runner;
  runner.emit_dfr = false;
  EcrRequest request;
  request.candidate = tdm_candidate();
  request.replications = 5;  // default metrics include dfr
  CHECK_THROWS_WITH_AS(ecr::compute_ecr(runner, request),
                       doctest::Contains("insufficient data for metric dfr"), std::runtime_error);
  try {
    ecr::compute_ecr(runner, request);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("arm=candidate") != std::string::npos);
    CHECK(std::string(e.what()).find("replication=0") != std::string::npos);
  }
}

TEST_CASE("the whole search is deterministic in the request") {
  auto run = []() {
    SyntheticRunner runner;
    runner.delay_speed_bps = 80e6;
    EcrRequest request;
    request.candidate = tdm_candidate();
    request.metrics = delay_only();
    request.replications = 5;
    request.root_seed = 99;
    return ecr::compute_ecr(runner, request);
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.ecr_bps == b.ecr_bps);
  CHECK(a.status == b.status);
  REQUIRE(a.rates.size() == b.rates.size());
  for (std::size_t i = 0; i < a.rates.size(); ++i) {
    CHECK(a.rates[i].iut.overall == b.rates[i].iut.overall);
    CHECK(a.rates[i].iut.components[0].adverse_bound == b.rates[i].iut.components[0].adverse_bound);
  }
}

TEST_CASE("request validation rejects malformed searches") {
  SyntheticRunner runner;
  EcrRequest request;
  request.candidate = tdm_candidate();

  auto bad = request;
  bad.replications = 2;
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.rate_grid_bps = {};
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.rate_grid_bps = {50e6, 50e6};
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.metrics.clear();
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.metrics[0].margin = 0.0;
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.metrics[0].name = "latency";
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  bad = request;
  bad.alpha = 0.5;
  CHECK_THROWS(ecr::compute_ecr(runner, bad));

  CHECK_THROWS(ecr::evaluate_rate(runner, request.candidate, 0.0, delay_only(), 0.05, 5, 0,
                                  Pairing::common_random_numbers));
}
