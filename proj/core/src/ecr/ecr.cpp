#include "oatb/ecr/ecr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oatb::ecr {

const char* to_string(Pairing p) {
  return p == Pairing::independent ? "independent" : "common_random_numbers";
}

const char* to_string(GridStatus s) {
  switch (s) {
    case GridStatus::resolved: return "resolved";
    case GridStatus::below_grid: return "below_grid";
    case GridStatus::above_grid: return "above_grid";
  }
  return "?";
}

const char* to_string(MarginKind k) {
  return k == MarginKind::absolute ? "absolute" : "relative_to_reference_mean";
}

Pairing pairing_from_string(const std::string& s) {
  if (s == "independent") return Pairing::independent;
  if (s == "common_random_numbers") return Pairing::common_random_numbers;
  throw std::invalid_argument("unknown pairing: " + s);
}

std::vector<EcrMetric> default_metrics() {
  EcrMetric delay{"page_delay", stats::Direction::smaller_better, stats::TestKind::welch,
                  MarginKind::relative_to_reference_mean, 0.10};
  EcrMetric dfr{"dfr", stats::Direction::larger_better, stats::TestKind::welch,
                MarginKind::absolute, 0.02};
  return {delay, dfr};
}

std::vector<double> default_rate_grid_bps() {
  return {10e6, 25e6, 50e6, 100e6, 155e6, 300e6, 622e6, 1000e6};
}

void validate(const EcrRequest& r) {
  arch::validate(r.candidate);
  if (r.rate_grid_bps.empty()) throw std::invalid_argument("rate grid must be non-empty");
  for (std::size_t i = 0; i < r.rate_grid_bps.size(); ++i) {
    if (!(r.rate_grid_bps[i] > 0.0)) throw std::invalid_argument("rates must be > 0");
    if (i > 0 && !(r.rate_grid_bps[i] > r.rate_grid_bps[i - 1]))
      throw std::invalid_argument("rate grid must be strictly increasing");
  }
  if (r.metrics.empty()) throw std::invalid_argument("at least one metric is required");
  for (const auto& m : r.metrics) {
    if (m.name != "page_delay" && m.name != "dfr")
      throw std::invalid_argument("unknown metric: " + m.name);
    if (!(m.margin > 0.0)) throw std::invalid_argument("margin must be > 0");
  }
  if (!(r.alpha > 0.0 && r.alpha < 0.5)) throw std::invalid_argument("alpha must be in (0, 0.5)");
  if (r.replications < 3) throw std::invalid_argument("replications must be >= 3");
}

std::string arm_seed_path(Pairing pairing, const std::string& arm, int replication) {
  if (pairing == Pairing::common_random_numbers) return "rep/" + std::to_string(replication);
  return "arm/" + arm + "/rep/" + std::to_string(replication);
}

arch::ArchitectureConfig reference_config(const arch::ArchitectureConfig& candidate,
                                          double rate_bps) {
  arch::ArchitectureConfig ref;
  ref.kind = arch::Kind::point_to_point;
  ref.onu_count = candidate.onu_count;
  ref.users_per_onu = candidate.users_per_onu;
  ref.line_rate_bps = rate_bps;
  ref.feeder_rate_bps = rate_bps;
  ref.distribution_rate_bps = rate_bps;
  ref.feeder_length_km = candidate.feeder_length_km;
  ref.buffer_bytes = candidate.buffer_bytes;
  return ref;
}

namespace {

ArmSamples run_arm(ArmRunner& runner, const arch::ArchitectureConfig& config, Pairing pairing,
                   const std::string& arm, int replications, std::uint64_t root_seed) {
  ArmSamples out;
  out.replications.reserve(static_cast<std::size_t>(replications));
  for (int k = 0; k < replications; ++k) {
    try {
      out.replications.push_back(runner.run(config, arm_seed_path(pairing, arm, k), root_seed, k));
    } catch (const std::exception& e) {
      throw std::runtime_error("arm=" + arm + " replication=" + std::to_string(k) + ": " +
                               e.what());
    }
  }
  return out;
}

std::vector<double> metric_samples(const ArmSamples& arm, const std::string& metric,
                                   const std::string& arm_name) {
  std::vector<double> xs;
  xs.reserve(arm.replications.size());
  for (std::size_t k = 0; k < arm.replications.size(); ++k) {
    const auto& rep = arm.replications[k];
    std::optional<double> v;
    if (metric == "page_delay") v = rep.page_delay_mean_s;
    else if (metric == "dfr") v = rep.decodable_frame_rate;
    else throw std::invalid_argument("unknown metric: " + metric);
    if (!v)
      throw std::runtime_error("insufficient data for metric " + metric + " (arm=" + arm_name +
                               " replication=" + std::to_string(k) + ")");
    xs.push_back(*v);
  }
  return xs;
}

RateDecision decide(ArmSamples candidate, ArmSamples reference, double rate_bps,
                    const std::vector<EcrMetric>& metrics, double alpha) {
  RateDecision out;
  out.rate_bps = rate_bps;
  std::vector<stats::TestResult> components;
  for (const auto& m : metrics) {
    std::vector<double> c = metric_samples(candidate, m.name, "candidate");
    std::vector<double> r = metric_samples(reference, m.name, "reference");
    double margin = m.margin;
    if (m.margin_kind == MarginKind::relative_to_reference_mean)
      margin *= stats::mean(std::span<const double>(r));
    if (!(margin > 0.0))
      throw std::runtime_error("materialized margin for " + m.name + " is not positive");
    stats::MetricSpec spec{m.name, m.direction, margin, m.test};
    components.push_back(m.test == stats::TestKind::welch
                             ? stats::welch_noninferiority(c, r, spec, alpha)
                             : stats::nonparametric_noninferiority(c, r, spec, alpha));
  }
  out.iut = stats::iut_decision(std::move(components));
  out.candidate = std::move(candidate);
  out.reference = std::move(reference);
  return out;
}

}  // namespace

RateDecision evaluate_rate(ArmRunner& runner, const arch::ArchitectureConfig& candidate,
                           double rate_bps, const std::vector<EcrMetric>& metrics, double alpha,
                           int replications, std::uint64_t root_seed, Pairing pairing) {
  if (!(rate_bps > 0.0)) throw std::invalid_argument("rate must be > 0");
  if (replications < 3) throw std::invalid_argument("replications must be >= 3");
  arch::validate(candidate);
  ArmSamples cand = run_arm(runner, candidate, pairing, "candidate", replications, root_seed);
  ArmSamples ref = run_arm(runner, reference_config(candidate, rate_bps), pairing, "reference",
                           replications, root_seed);
  return decide(std::move(cand), std::move(ref), rate_bps, metrics, alpha);
}

EcrResult compute_ecr(ArmRunner& runner, const EcrRequest& request) {
  validate(request);
  EcrResult out;
  out.clip_bps = arch::subscriber_rate_bound(request.candidate);
  std::vector<double> grid;
  for (double r : request.rate_grid_bps)
    if (r <= out.clip_bps) grid.push_back(r);
  if (grid.empty())
    throw std::runtime_error("rate grid is empty after clipping at the subscriber rate bound");

  // The candidate arm does not depend on the reference rate; its seed paths
  // are rate-free, so the samples are computed once and reused verbatim.
  ArmSamples cand = run_arm(runner, request.candidate, request.pairing, "candidate",
                            request.replications, request.root_seed);
  bool all_passed = true;
  for (double rate : grid) {
    ArmSamples ref = run_arm(runner, reference_config(request.candidate, rate), request.pairing,
                             "reference", request.replications, request.root_seed);
    out.rates.push_back(decide(cand, std::move(ref), rate, request.metrics, request.alpha));
    if (out.rates.back().iut.overall == stats::Decision::non_inferior) {
      out.ecr_bps = rate;
    } else {
      all_passed = false;
      break;
    }
  }
  out.status = !out.ecr_bps ? GridStatus::below_grid
               : all_passed ? GridStatus::above_grid
                            : GridStatus::resolved;
  return out;
}

}  // namespace oatb::ecr
