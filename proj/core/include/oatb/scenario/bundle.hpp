#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oatb/ecr/ecr.hpp"
#include "oatb/scenario/scenario.hpp"

namespace oatb::scenario {

// Everything one replication produces.
struct RunRecord {
  int replication = 0;
  traffic::ReplicationQoe qoe;
  std::uint64_t events = 0;
  std::uint64_t trace_hash = 0;
  arch::DirectionTotals down;
  arch::DirectionTotals up;
  std::vector<arch::OnuMacStats> mac;
  std::optional<energy::EnergyReport> energy;
  std::vector<energy::TimelineSegment> timeline;  // only when requested
};

// Runs one replication of the scenario's traffic over the given architecture.
// The engine seed is derive_seed(root_seed, seed_path), so arms that share a
// path share every random draw.
RunRecord run_once(const Scenario& s, const arch::ArchitectureConfig& config,
                   std::uint64_t root_seed, const std::string& seed_path, int replication,
                   bool want_energy, bool want_timeline);

// ECR adapter. Every arm runs with a full accountant so power-managed
// behaviour matches simulate mode even when energy outputs are disabled.
class SimulationArmRunner : public ecr::ArmRunner {
 public:
  explicit SimulationArmRunner(Scenario s) : scenario_(std::move(s)) {}

  traffic::ReplicationQoe run(const arch::ArchitectureConfig& config, const std::string& seed_path,
                              std::uint64_t root_seed, int replication) override;

 private:
  Scenario scenario_;
};

struct BundleResult {
  std::filesystem::path dir;
  Mode mode = Mode::simulate;
  std::vector<RunRecord> replications;  // simulate mode
  std::optional<ecr::EcrResult> ecr;    // ecr mode
};

// Output directory policy: the explicit path when non-empty, otherwise
// (OATB_OUT_ROOT or ".")/<stem>.bundle.
std::filesystem::path resolve_out_dir(const std::string& out, const std::string& scenario_stem);

// Runs the scenario and writes a self-describing bundle:
//   scenario.resolved                       canonical echo
//   qoe.csv, runs.json, rep_NNN/...         simulate mode
//   ecr.json, rates.csv                     ecr mode
//   MANIFEST                                "sha256  path" per file, written last
// An existing directory is refused unless force is set. On failure an
// INCOMPLETE marker is left behind instead of a manifest.
BundleResult run_bundle(const Scenario& s, const std::filesystem::path& dir, bool force);

// Reads "sha256  relative-path" lines. Throws on malformed content.
std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& file);

}  // namespace oatb::scenario
