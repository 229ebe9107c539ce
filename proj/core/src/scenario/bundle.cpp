#include "oatb/scenario/bundle.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "oatb/sim/engine.hpp"
#include "oatb/util/csv.hpp"
#include "oatb/util/hash.hpp"

namespace oatb::scenario {

namespace {

using nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string rep_dir(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "rep_%03d", k);
  return buf;
}

std::optional<double> metric_value(const traffic::ReplicationQoe& q, const std::string& name) {
  if (name == "page_delay") return q.page_delay_mean_s;
  if (name == "dfr") return q.decodable_frame_rate;
  throw ScenarioError("unknown metric: " + name);
}

ordered_json qoe_json(const traffic::ReplicationQoe& q) {
  ordered_json j;
  j["page_delay_mean_s"] = q.page_delay_mean_s ? ordered_json(*q.page_delay_mean_s)
                                               : ordered_json(nullptr);
  j["decodable_frame_rate"] = q.decodable_frame_rate ? ordered_json(*q.decodable_frame_rate)
                                                     : ordered_json(nullptr);
  j["pages_used"] = q.pages_used;
  j["pages_censored"] = q.pages_censored;
  j["pages_before_warmup"] = q.pages_before_warmup;
  j["frames_total"] = q.frames_total;
  j["web_sessions"] = q.web_sessions;
  j["video_sessions"] = q.video_sessions;
  return j;
}

ordered_json totals_json(const arch::DirectionTotals& t) {
  ordered_json j;
  j["injected_packets"] = t.injected_packets;
  j["injected_bytes"] = t.injected_bytes;
  j["delivered_packets"] = t.delivered_packets;
  j["delivered_bytes"] = t.delivered_bytes;
  j["dropped_packets"] = t.dropped_packets;
  j["dropped_bytes"] = t.dropped_bytes;
  return j;
}

ordered_json energy_json(const energy::EnergyReport& r) {
  ordered_json by_class;
  ordered_json shares;
  for (std::size_t i = 0; i < energy::kClassCount; ++i) {
    auto cls = static_cast<energy::ComponentClass>(i);
    by_class[energy::to_string(cls)] = r.energy_j[i];
    shares[energy::to_string(cls)] = r.share_pct[i];
  }
  ordered_json j;
  j["energy_j"] = by_class;
  j["total_j"] = r.total_j;
  j["delivered_bits"] = r.delivered_bits;
  j["joules_per_bit"] = r.joules_per_bit ? ordered_json(*r.joules_per_bit) : ordered_json(nullptr);
  j["share_pct"] = shares;
  return j;
}

ordered_json test_json(const stats::TestResult& t) {
  ordered_json j;
  j["metric"] = t.metric;
  j["direction"] = stats::to_string(t.direction);
  j["test"] = stats::to_string(t.test);
  j["estimate"] = t.estimate;
  j["adverse_bound"] = t.adverse_bound;
  j["margin"] = t.margin;
  j["p_value"] = t.p_value ? ordered_json(*t.p_value) : ordered_json(nullptr);
  j["decision"] = stats::to_string(t.decision);
  j["n_candidate"] = t.n_candidate;
  j["n_reference"] = t.n_reference;
  j["alpha"] = t.alpha;
  j["mean_candidate"] = t.mean_candidate;
  j["mean_reference"] = t.mean_reference;
  j["sd_candidate"] = t.sd_candidate;
  j["sd_reference"] = t.sd_reference;
  j["degenerate"] = t.degenerate;
  return j;
}

std::string timeline_csv(const std::vector<energy::TimelineSegment>& timeline) {
  std::string csv = "t0_s,t1_s,core_w,l2_switch_w,olt_transceiver_w,onu_w\n";
  for (const auto& seg : timeline) {
    csv += util::format_double(seg.t0_s) + "," + util::format_double(seg.t1_s);
    for (std::size_t i = 0; i < energy::kClassCount; ++i)
      csv += "," + util::format_double(seg.watts[i]);
    csv += "\n";
  }
  return csv;
}

class BundleWriter {
 public:
  explicit BundleWriter(std::filesystem::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, const std::string& content) {
    std::filesystem::path p = root_ / rel;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ScenarioError("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw ScenarioError("write failed: " + p.string());
    entries_.emplace_back(rel, util::sha256_hex(content));
  }

  void manifest() {
    std::sort(entries_.begin(), entries_.end());
    std::string text;
    for (const auto& [path, sha] : entries_) text += sha + "  " + path + "\n";
    std::filesystem::path p = root_ / "MANIFEST";
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ScenarioError("cannot write " + p.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw ScenarioError("write failed: " + p.string());
  }

 private:
  std::filesystem::path root_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_rep_files(const Scenario& s, BundleWriter& w, const RunRecord& rec) {
  const std::string dir = rep_dir(rec.replication);
  std::string down = "onu,offered_packets,offered_bytes,done_packets,done_bytes,"
                     "dropped_packets,dropped_bytes,dist_dropped_packets,dist_dropped_bytes,"
                     "mean_sojourn_s\n";
  std::string up = "onu,offered_packets,offered_bytes,done_packets,done_bytes,"
                   "dropped_packets,dropped_bytes,mean_sojourn_s\n";
  for (std::size_t i = 0; i < rec.mac.size(); ++i) {
    const auto& m = rec.mac[i];
    down += std::to_string(i) + "," + std::to_string(m.down.offered_packets) + "," +
            std::to_string(m.down.offered_bytes) + "," + std::to_string(m.down.done_packets) +
            "," + std::to_string(m.down.done_bytes) + "," +
            std::to_string(m.down.dropped_packets) + "," + std::to_string(m.down.dropped_bytes) +
            "," + std::to_string(m.dist_dropped_packets) + "," +
            std::to_string(m.dist_dropped_bytes) + "," +
            util::format_double(m.down.mean_sojourn_s()) + "\n";
    up += std::to_string(i) + "," + std::to_string(m.up.offered_packets) + "," +
          std::to_string(m.up.offered_bytes) + "," + std::to_string(m.up.done_packets) + "," +
          std::to_string(m.up.done_bytes) + "," + std::to_string(m.up.dropped_packets) + "," +
          std::to_string(m.up.dropped_bytes) + "," + util::format_double(m.up.mean_sojourn_s()) +
          "\n";
  }
  w.write(dir + "/mac_down.csv", down);
  w.write(dir + "/mac_up.csv", up);
  if (rec.energy) w.write(dir + "/energy.json", energy_json(*rec.energy).dump(2) + "\n");
  if (s.energy_timeline_csv && !rec.timeline.empty())
    w.write(dir + "/power_timeline.csv", timeline_csv(rec.timeline));
}

void run_simulate(const Scenario& s, BundleWriter& w, BundleResult& result) {
  const int reps = s.replications;
  std::vector<RunRecord> records(static_cast<std::size_t>(reps));
  int workers = s.workers > 0
                    ? s.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, reps);
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto body = [&]() {
    for (;;) {
      int k = next.fetch_add(1);
      if (k >= reps) return;
      try {
        records[static_cast<std::size_t>(k)] =
            run_once(s, s.arch, s.seed, "rep/" + std::to_string(k), k, s.energy_enabled,
                     s.energy_timeline_csv);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);

  std::string qoe_csv = "replication,metric,value\n";
  for (const auto& rec : records) {
    for (const auto& name : s.metrics) {
      if (auto v = metric_value(rec.qoe, name))
        qoe_csv += std::to_string(rec.replication) + "," + name + "," + util::format_double(*v) +
                   "\n";
    }
  }
  w.write("qoe.csv", qoe_csv);

  ordered_json runs;
  runs["mode"] = to_string(s.mode);
  runs["architecture"] = arch::to_string(s.arch.kind);
  runs["seed"] = s.seed;
  runs["duration_s"] = s.duration_s;
  runs["warmup_s"] = s.warmup_s();
  runs["replications"] = ordered_json::array();
  for (const auto& rec : records) {
    const std::string path = "rep/" + std::to_string(rec.replication);
    ordered_json j;
    j["replication"] = rec.replication;
    j["seed_path"] = path;
    j["engine_seed"] = hex64(sim::derive_seed(s.seed, path));
    j["events"] = rec.events;
    j["trace_hash"] = hex64(rec.trace_hash);
    j["qoe"] = qoe_json(rec.qoe);
    j["downstream"] = totals_json(rec.down);
    j["upstream"] = totals_json(rec.up);
    runs["replications"].push_back(std::move(j));
  }
  w.write("runs.json", runs.dump(2) + "\n");

  for (const auto& rec : records) write_rep_files(s, w, rec);
  result.replications = std::move(records);
}

void run_ecr(const Scenario& s, BundleWriter& w, BundleResult& result) {
  SimulationArmRunner runner(s);
  const ecr::EcrRequest request = s.ecr_request();
  const ecr::EcrResult res = ecr::compute_ecr(runner, request);

  std::string rates_csv = "rate_mbps,arm,replication,metric,value\n";
  auto arm_rows = [&](double rate_mbps, const char* arm, const ecr::ArmSamples& samples) {
    for (std::size_t k = 0; k < samples.replications.size(); ++k) {
      for (const auto& name : s.metrics) {
        if (auto v = metric_value(samples.replications[k], name))
          rates_csv += util::format_double(rate_mbps) + "," + arm + "," + std::to_string(k) +
                       "," + name + "," + util::format_double(*v) + "\n";
      }
    }
  };
  for (const auto& rd : res.rates) {
    arm_rows(rd.rate_bps / 1e6, "candidate", rd.candidate);
    arm_rows(rd.rate_bps / 1e6, "reference", rd.reference);
  }
  w.write("rates.csv", rates_csv);

  ordered_json req;
  req["alpha"] = request.alpha;
  req["replications"] = request.replications;
  req["pairing"] = ecr::to_string(request.pairing);
  req["root_seed"] = request.root_seed;
  req["grid_mbps"] = ordered_json::array();
  for (double r : request.rate_grid_bps) req["grid_mbps"].push_back(r / 1e6);
  req["metrics"] = ordered_json::array();
  for (const auto& m : request.metrics) {
    ordered_json mj;
    mj["name"] = m.name;
    mj["direction"] = stats::to_string(m.direction);
    mj["test"] = stats::to_string(m.test);
    mj["margin_kind"] = ecr::to_string(m.margin_kind);
    mj["margin"] = m.margin;
    req["metrics"].push_back(std::move(mj));
  }

  ordered_json out;
  out["request"] = std::move(req);
  out["clip_mbps"] = res.clip_bps / 1e6;
  out["status"] = ecr::to_string(res.status);
  out["ecr_mbps"] = res.ecr_bps ? ordered_json(*res.ecr_bps / 1e6) : ordered_json(nullptr);
  out["rates"] = ordered_json::array();
  for (const auto& rd : res.rates) {
    ordered_json j;
    j["rate_mbps"] = rd.rate_bps / 1e6;
    j["decision"] = stats::to_string(rd.iut.overall);
    j["tests"] = ordered_json::array();
    for (const auto& t : rd.iut.components) j["tests"].push_back(test_json(t));
    out["rates"].push_back(std::move(j));
  }
  w.write("ecr.json", out.dump(2) + "\n");

  result.ecr = res;
}

}  // namespace

RunRecord run_once(const Scenario& s, const arch::ArchitectureConfig& config,
                   std::uint64_t root_seed, const std::string& seed_path, int replication,
                   bool want_energy, bool want_timeline) {
  sim::Engine engine(sim::derive_seed(root_seed, seed_path));
  energy::EnergyAccountant accountant(s.profile);
  arch::Network net(engine, config, s.network, &accountant);
  traffic::TrafficDriver driver(engine, net, s.traffic, config.users_per_onu, "traffic",
                                s.duration_s);
  driver.start();
  const auto summary = engine.run_until(sim::SimTime::from_seconds(s.duration_s));

  RunRecord rec;
  rec.replication = replication;
  rec.qoe = driver.collect(s.warmup_s());
  rec.events = summary.events_processed;
  rec.trace_hash = engine.trace_hash();
  rec.down = net.downstream_totals();
  rec.up = net.upstream_totals();
  rec.mac.reserve(static_cast<std::size_t>(config.onu_count));
  for (int i = 0; i < config.onu_count; ++i) rec.mac.push_back(net.mac_stats(i));
  accountant.finalize(engine.now());
  if (want_energy) {
    rec.energy = accountant.report();
    if (want_timeline) rec.timeline = accountant.timeline();
  }
  return rec;
}

traffic::ReplicationQoe SimulationArmRunner::run(const arch::ArchitectureConfig& config,
                                                 const std::string& seed_path,
                                                 std::uint64_t root_seed, int replication) {
  return run_once(scenario_, config, root_seed, seed_path, replication, false, false).qoe;
}

std::filesystem::path resolve_out_dir(const std::string& out, const std::string& scenario_stem) {
  if (!out.empty()) return out;
  const char* root = std::getenv("OATB_OUT_ROOT");
  return std::filesystem::path(root ? root : ".") / (scenario_stem + ".bundle");
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open manifest: " + file.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.size() < 67 || line.substr(64, 2) != "  ")
      throw ScenarioError(file.string() + ":" + std::to_string(lineno) + ": malformed entry");
    std::string sha = line.substr(0, 64);
    for (char c : sha) {
      if (!std::isxdigit(static_cast<unsigned char>(c)))
        throw ScenarioError(file.string() + ":" + std::to_string(lineno) + ": malformed digest");
    }
    entries.emplace_back(line.substr(66), sha);
  }
  return entries;
}

BundleResult run_bundle(const Scenario& s, const std::filesystem::path& dir, bool force) {
  validate(s);
  if (std::filesystem::exists(dir)) {
    if (!force)
      throw ScenarioError("output directory exists: " + dir.string() + " (pass --force)");
    std::filesystem::remove_all(dir);
  }
  std::filesystem::create_directories(dir);

  BundleResult result;
  result.dir = dir;
  result.mode = s.mode;
  BundleWriter w(dir);
  try {
    w.write("scenario.resolved", resolved_echo(s));
    if (s.mode == Mode::simulate) {
      run_simulate(s, w, result);
    } else {
      run_ecr(s, w, result);
    }
    w.manifest();
  } catch (const std::exception& e) {
    std::ofstream mark(dir / "INCOMPLETE", std::ios::binary | std::ios::trunc);
    mark << e.what() << "\n";
    throw;
  }
  return result;
}

}  // namespace oatb::scenario
