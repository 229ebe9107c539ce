#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oatb/arch/config.hpp"
#include "oatb/stats/noninferiority.hpp"
#include "oatb/traffic/apps.hpp"

namespace oatb::ecr {

enum class Pairing { independent, common_random_numbers };
enum class GridStatus { resolved, below_grid, above_grid };
enum class MarginKind { absolute, relative_to_reference_mean };

const char* to_string(Pairing p);
const char* to_string(GridStatus s);
const char* to_string(MarginKind k);
Pairing pairing_from_string(const std::string& s);

// One QoE measure entering the IUT conjunction. A relative margin is
// materialized against the reference arm's sample mean at each rate before
// testing; the materialized value is recorded in the TestResult.
struct EcrMetric {
  std::string name;  // "page_delay" or "dfr"
  stats::Direction direction = stats::Direction::smaller_better;
  stats::TestKind test = stats::TestKind::welch;
  MarginKind margin_kind = MarginKind::absolute;
  double margin = 0.0;  // absolute value, or fraction of the reference mean
};

// page_delay: smaller better, margin 10% of the reference mean;
// dfr: larger better, margin 0.02 absolute. Both Welch.
std::vector<EcrMetric> default_metrics();

// Classic access-rate ladder, in bits/s.
std::vector<double> default_rate_grid_bps();

struct EcrRequest {
  arch::ArchitectureConfig candidate;
  std::vector<double> rate_grid_bps = default_rate_grid_bps();
  std::vector<EcrMetric> metrics = default_metrics();
  double alpha = 0.05;
  int replications = 10;
  std::uint64_t root_seed = 0;
  Pairing pairing = Pairing::common_random_numbers;
};

void validate(const EcrRequest& r);

// Per-arm QoE samples of one rate evaluation, in replication order.
struct ArmSamples {
  std::vector<traffic::ReplicationQoe> replications;
};

struct RateDecision {
  double rate_bps = 0.0;
  stats::IutResult iut;
  ArmSamples candidate;
  ArmSamples reference;
};

struct EcrResult {
  std::vector<RateDecision> rates;  // evaluated rates, in scan order
  std::optional<double> ecr_bps;    // absent when below_grid
  GridStatus status = GridStatus::resolved;
  double clip_bps = 0.0;  // subscriber rate bound that clipped the grid
};

// Executes one replication of one arm and returns its QoE scalars. seed_path
// already encodes pairing, arm and replication; implementations must be
// deterministic in (config, seed_path, root_seed).
class ArmRunner {
 public:
  virtual ~ArmRunner() = default;
  virtual traffic::ReplicationQoe run(const arch::ArchitectureConfig& config,
                                      const std::string& seed_path, std::uint64_t root_seed,
                                      int replication) = 0;
};

// Stream-derivation label for one arm's replication. Under
// common_random_numbers the arm label is omitted, so candidate and reference
// draw identical traffic.
std::string arm_seed_path(Pairing pairing, const std::string& arm, int replication);

// Point-to-point reference at the given rate: same subscriber population and
// feeder length as the candidate, dedicated lines at rate_bps.
arch::ArchitectureConfig reference_config(const arch::ArchitectureConfig& candidate,
                                          double rate_bps);

// Runs n replications of candidate and of the point-to-point reference at
// rate_bps, then applies the IUT over all metrics.
RateDecision evaluate_rate(ArmRunner& runner, const arch::ArchitectureConfig& candidate,
                           double rate_bps, const std::vector<EcrMetric>& metrics, double alpha,
                           int replications, std::uint64_t root_seed, Pairing pairing);

// Monotone scan over the grid clipped at the candidate's subscriber rate
// bound: rates are evaluated in increasing order until the first
// not_demonstrated. Throws when clipping empties the grid.
EcrResult compute_ecr(ArmRunner& runner, const EcrRequest& request);

}  // namespace oatb::ecr
