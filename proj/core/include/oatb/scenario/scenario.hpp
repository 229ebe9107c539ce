#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oatb/arch/config.hpp"
#include "oatb/arch/network.hpp"
#include "oatb/ecr/ecr.hpp"
#include "oatb/energy/energy.hpp"
#include "oatb/stats/noninferiority.hpp"
#include "oatb/traffic/apps.hpp"

namespace oatb::scenario {

enum class Mode { simulate, ecr };

const char* to_string(Mode m);

// Margin and test selection for one QoE metric.
struct MetricConfig {
  ecr::MarginKind margin_kind = ecr::MarginKind::absolute;
  double margin = 0.0;
  stats::TestKind test = stats::TestKind::welch;
};

// Fully resolved experiment description. Every field maps to exactly one
// schema key (section.key); resolved_echo materializes all of them.
struct Scenario {
  Mode mode = Mode::simulate;
  double duration_s = 30.0;
  std::uint64_t seed = 1;
  int replications = 3;
  int workers = 0;  // 0: one per hardware execution unit

  arch::ArchitectureConfig arch;
  arch::NetworkOptions network;
  traffic::TrafficModels traffic;

  double warmup_fraction = 0.1;
  std::vector<std::string> metrics = {"page_delay", "dfr"};
  MetricConfig page_delay{ecr::MarginKind::relative_to_reference_mean, 0.10,
                          stats::TestKind::welch};
  MetricConfig dfr{ecr::MarginKind::absolute, 0.02, stats::TestKind::welch};

  double alpha = 0.05;

  std::vector<double> ecr_grid_mbps = {10, 25, 50, 100, 155, 300, 622, 1000};
  int ecr_replications = 10;
  ecr::Pairing pairing = ecr::Pairing::common_random_numbers;

  bool energy_enabled = true;
  bool energy_timeline_csv = false;
  energy::PowerProfile profile = energy::default_power_profile();

  double warmup_s() const { return warmup_fraction * duration_s; }
  std::vector<ecr::EcrMetric> ecr_metrics() const;
  ecr::EcrRequest ecr_request() const;
};

// Raised on malformed files, unknown keys, bad values or failed cross-field
// validation. Messages carry the origin (path or "<override>") and the line.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Parses `[section]` / `key = value` text. Overrides are `section.key=value`
// strings applied after the file; every key must exist in the schema.
Scenario parse_scenario_text(const std::string& text, const std::string& origin,
                             const std::vector<std::string>& overrides);
Scenario parse_scenario_file(const std::string& path, const std::vector<std::string>& overrides);

// Canonical scenario echo: all schema keys, defaults materialized, sections
// and keys sorted. Parsing the echo reproduces the scenario exactly.
std::string resolved_echo(const Scenario& s);

// Cross-field validation; called by the parser and before any run.
void validate(const Scenario& s);

}  // namespace oatb::scenario
