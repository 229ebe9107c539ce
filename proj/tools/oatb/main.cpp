#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oatb/scenario/bundle.hpp"
#include "oatb/scenario/report.hpp"
#include "oatb/util/csv.hpp"

namespace {

struct RunArgs {
  std::string scenario;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<int> workers;
  std::string out;
  bool force = false;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("scenario", args.scenario, "scenario file")->required();
  cmd->add_option("--set", args.sets, "override, section.key=value (repeatable)");
  cmd->add_option("--seed", args.seed, "override run.seed");
  cmd->add_option("--replications", args.replications, "override run.replications");
  cmd->add_option("--workers", args.workers, "override run.workers (0: hardware concurrency)");
  cmd->add_option("--out", args.out, "bundle directory (default: OATB_OUT_ROOT or ./<stem>.bundle)");
  cmd->add_flag("--force", args.force, "replace an existing bundle directory");
}

int run_scenario(const RunArgs& args, bool force_ecr) {
  std::vector<std::string> overrides = args.sets;
  if (args.seed) overrides.push_back("run.seed=" + std::to_string(*args.seed));
  if (args.replications)
    overrides.push_back("run.replications=" + std::to_string(*args.replications));
  if (args.workers) overrides.push_back("run.workers=" + std::to_string(*args.workers));
  if (force_ecr) overrides.push_back("run.mode=ecr");

  const auto scenario = oatb::scenario::parse_scenario_file(args.scenario, overrides);
  const std::string stem = std::filesystem::path(args.scenario).stem().string();
  const auto dir = oatb::scenario::resolve_out_dir(args.out, stem);
  const auto result = oatb::scenario::run_bundle(scenario, dir, args.force);

  if (result.mode == oatb::scenario::Mode::simulate) {
    for (const auto& rec : result.replications) {
      std::cout << "replication " << rec.replication;
      if (rec.qoe.page_delay_mean_s)
        std::cout << ": page_delay=" << oatb::util::format_double(*rec.qoe.page_delay_mean_s);
      if (rec.qoe.decodable_frame_rate)
        std::cout << " dfr=" << oatb::util::format_double(*rec.qoe.decodable_frame_rate);
      std::cout << " (events " << rec.events << ")\n";
    }
  } else if (result.ecr) {
    if (result.ecr->ecr_bps)
      std::cout << "ecr_mbps: " << oatb::util::format_double(*result.ecr->ecr_bps / 1e6);
    else
      std::cout << "ecr_mbps: none";
    std::cout << " (" << oatb::ecr::to_string(result.ecr->status) << ")\n";
    for (const auto& rate : result.ecr->rates) {
      std::cout << "  rate " << oatb::util::format_double(rate.rate_bps / 1e6)
                << " Mb/s: " << oatb::stats::to_string(rate.iut.overall) << "\n";
    }
  }
  std::cout << "bundle: " << result.dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual test bed for optical access architectures"};
  app.require_subcommand(1);

  RunArgs run_args;
  RunArgs ecr_args;
  std::string bundle_dir;

  CLI::App* run_cmd = app.add_subcommand("run", "run a scenario in its configured mode");
  add_run_options(run_cmd, run_args);
  CLI::App* ecr_cmd = app.add_subcommand("ecr", "run the equivalent-capacity search");
  add_run_options(ecr_cmd, ecr_args);
  CLI::App* report_cmd = app.add_subcommand("report", "verify a bundle and derive report tables");
  report_cmd->add_option("bundle", bundle_dir, "bundle directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (report_cmd->parsed()) {
      const auto res = oatb::scenario::make_report(bundle_dir);
      std::cout << res.summary;
      for (const auto& f : res.written) std::cout << "wrote " << f << "\n";
      return 0;
    }
    if (ecr_cmd->parsed()) return run_scenario(ecr_args, true);
    return run_scenario(run_args, false);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
