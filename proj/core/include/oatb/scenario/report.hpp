#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace oatb::scenario {

// Integrity gate: refuses bundles carrying an INCOMPLETE marker, missing a
// manifest, missing a listed file, or failing any digest. Returns the
// verified relative paths.
std::vector<std::string> verify_bundle(const std::filesystem::path& dir);

struct ReportResult {
  std::string summary;               // human-readable, printed by the CLI
  std::vector<std::string> written;  // files created under <dir>/report/
};

// Verifies the bundle, then derives plot-ready tables under <dir>/report/
// (kept outside the manifest) and assembles a text summary.
ReportResult make_report(const std::filesystem::path& dir);

}  // namespace oatb::scenario
