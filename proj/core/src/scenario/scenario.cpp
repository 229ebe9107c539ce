#include "oatb/scenario/scenario.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "oatb/traffic/profiles.hpp"
#include "oatb/util/csv.hpp"

namespace oatb::scenario {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(const std::string& v) {
  const std::string t = trim(v);
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("expected a number, got '" + v + "'");
  }
  if (pos != t.size()) throw ScenarioError("expected a number, got '" + v + "'");
  if (!std::isfinite(x)) throw ScenarioError("value must be finite");
  return x;
}

long long parse_ll(const std::string& v) {
  const std::string t = trim(v);
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("expected an integer, got '" + v + "'");
  }
  if (pos != t.size()) throw ScenarioError("expected an integer, got '" + v + "'");
  return x;
}

int parse_int(const std::string& v) {
  long long x = parse_ll(v);
  if (x < INT_MIN || x > INT_MAX) throw ScenarioError("integer out of range: '" + v + "'");
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v) {
  const std::string t = trim(v);
  if (!t.empty() && t[0] == '-') throw ScenarioError("expected a non-negative integer");
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(t, &pos);
  } catch (const std::exception&) {
    throw ScenarioError("expected a non-negative integer, got '" + v + "'");
  }
  if (pos != t.size()) throw ScenarioError("expected a non-negative integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v) {
  const std::string t = trim(v);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ScenarioError("expected true or false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& part : split(v, ',')) {
    if (part.empty()) throw ScenarioError("empty element in list '" + v + "'");
    out.push_back(parse_double(part));
  }
  return out;
}

stats::TestKind parse_test(const std::string& v) {
  const std::string t = trim(v);
  if (t == "welch") return stats::TestKind::welch;
  if (t == "nonparametric") return stats::TestKind::nonparametric;
  throw ScenarioError("expected welch or nonparametric, got '" + v + "'");
}

ecr::MarginKind parse_margin_kind(const std::string& v) {
  const std::string t = trim(v);
  if (t == "absolute") return ecr::MarginKind::absolute;
  if (t == "relative_to_reference_mean") return ecr::MarginKind::relative_to_reference_mean;
  throw ScenarioError("expected absolute or relative_to_reference_mean, got '" + v + "'");
}

std::string fmt(double x) { return util::format_double(x); }

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

struct Ctx {
  std::string base_dir;
};

struct KeyDef {
  std::string key;
  std::function<void(Scenario&, const std::string&, const Ctx&)> set;
  std::function<std::string(const Scenario&)> get;
  bool echo = true;
};

energy::ClassPower& class_power(Scenario& s, energy::ComponentClass c) {
  return s.profile.at(c);
}

const std::vector<KeyDef>& schema() {
  static const std::vector<KeyDef> defs = [] {
    std::vector<KeyDef> d;
    auto add = [&d](std::string key, auto set, auto get, bool echo = true) {
      d.push_back({std::move(key), set, get, echo});
    };
    auto dbl = [&add](std::string key, std::function<double&(Scenario&)> f) {
      auto setter = [f](Scenario& s, const std::string& v, const Ctx&) { f(s) = parse_double(v); };
      auto getter = [f](const Scenario& s) { return fmt(f(const_cast<Scenario&>(s))); };
      add(std::move(key), setter, getter);
    };
    auto integer = [&add](std::string key, std::function<int&(Scenario&)> f) {
      auto setter = [f](Scenario& s, const std::string& v, const Ctx&) { f(s) = parse_int(v); };
      auto getter = [f](const Scenario& s) {
        return std::to_string(f(const_cast<Scenario&>(s)));
      };
      add(std::move(key), setter, getter);
    };
    auto boolean = [&add](std::string key, std::function<bool&(Scenario&)> f) {
      auto setter = [f](Scenario& s, const std::string& v, const Ctx&) { f(s) = parse_bool(v); };
      auto getter = [f](const Scenario& s) {
        return f(const_cast<Scenario&>(s)) ? "true" : "false";
      };
      add(std::move(key), setter, getter);
    };

    add(
        "run.mode",
        [](Scenario& s, const std::string& v, const Ctx&) {
          const std::string t = trim(v);
          if (t == "simulate") s.mode = Mode::simulate;
          else if (t == "ecr") s.mode = Mode::ecr;
          else throw ScenarioError("expected simulate or ecr, got '" + v + "'");
        },
        [](const Scenario& s) { return std::string(to_string(s.mode)); });
    dbl("run.duration_s", [](Scenario& s) -> double& { return s.duration_s; });
    add(
        "run.seed",
        [](Scenario& s, const std::string& v, const Ctx&) { s.seed = parse_u64(v); },
        [](const Scenario& s) { return std::to_string(s.seed); });
    integer("run.replications", [](Scenario& s) -> int& { return s.replications; });
    integer("run.workers", [](Scenario& s) -> int& { return s.workers; });

    add(
        "architecture.kind",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.arch.kind = arch::kind_from_string(trim(v));
        },
        [](const Scenario& s) { return std::string(arch::to_string(s.arch.kind)); });
    integer("architecture.onu_count", [](Scenario& s) -> int& { return s.arch.onu_count; });
    integer("architecture.users_per_onu",
            [](Scenario& s) -> int& { return s.arch.users_per_onu; });
    dbl("architecture.feeder_rate_bps",
        [](Scenario& s) -> double& { return s.arch.feeder_rate_bps; });
    dbl("architecture.distribution_rate_bps",
        [](Scenario& s) -> double& { return s.arch.distribution_rate_bps; });
    dbl("architecture.line_rate_bps", [](Scenario& s) -> double& { return s.arch.line_rate_bps; });
    dbl("architecture.feeder_length_km",
        [](Scenario& s) -> double& { return s.arch.feeder_length_km; });
    integer("architecture.wavelength_count",
            [](Scenario& s) -> int& { return s.arch.wavelength_count; });
    integer("architecture.transceiver_pool",
            [](Scenario& s) -> int& { return s.arch.transceiver_pool; });
    dbl("architecture.tuning_time_s", [](Scenario& s) -> double& { return s.arch.tuning_time_s; });
    dbl("architecture.guard_time_s", [](Scenario& s) -> double& { return s.arch.guard_time_s; });
    add(
        "architecture.max_grant_bytes",
        [](Scenario& s, const std::string& v, const Ctx&) {
          std::uint64_t x = parse_u64(v);
          if (x == 0 || x > UINT32_MAX) throw ScenarioError("max_grant_bytes out of range");
          s.arch.max_grant_bytes = static_cast<std::uint32_t>(x);
        },
        [](const Scenario& s) { return std::to_string(s.arch.max_grant_bytes); });
    add(
        "architecture.buffer_bytes",
        [](Scenario& s, const std::string& v, const Ctx&) { s.arch.buffer_bytes = parse_u64(v); },
        [](const Scenario& s) { return std::to_string(s.arch.buffer_bytes); });

    dbl("network.core_one_way_s", [](Scenario& s) -> double& { return s.network.core_one_way_s; });
    dbl("network.idle_poll_s",
        [](Scenario& s) -> double& { return s.network.dba_idle_poll_interval_s; });
    boolean("network.onu_sleep", [](Scenario& s) -> bool& { return s.network.onu_sleep; });
    boolean("network.pool_power_off",
            [](Scenario& s) -> bool& { return s.network.pool_power_off; });

    // Applied in schema order: the named profile first, then an optional
    // file, then explicit bins; the echo emits the class and the bins.
    add(
        "traffic.profile",
        [](Scenario& s, const std::string& v, const Ctx&) {
          const std::string t = trim(v);
          if (t == "business") {
            s.traffic.profile.cls = traffic::UserClass::business;
            s.traffic.profile.day_profile = traffic::business_day_profile();
          } else if (t == "residential") {
            s.traffic.profile.cls = traffic::UserClass::residential;
            s.traffic.profile.day_profile = traffic::residential_day_profile();
          } else if (t == "flat") {
            s.traffic.profile.cls = traffic::UserClass::residential;
            s.traffic.profile.day_profile = traffic::flat_day_profile();
          } else {
            throw ScenarioError("expected business, residential or flat, got '" + v + "'");
          }
        },
        [](const Scenario& s) { return std::string(traffic::to_string(s.traffic.profile.cls)); });
    add(
        "traffic.day_profile_file",
        [](Scenario& s, const std::string& v, const Ctx& ctx) {
          std::filesystem::path p(trim(v));
          if (p.is_relative() && !ctx.base_dir.empty())
            p = std::filesystem::path(ctx.base_dir) / p;
          s.traffic.profile.day_profile = traffic::load_day_profile(p.string());
        },
        [](const Scenario&) { return std::string(); }, false);
    add(
        "traffic.day_profile",
        [](Scenario& s, const std::string& v, const Ctx&) {
          auto xs = parse_double_list(v);
          if (xs.size() != 24) throw ScenarioError("day_profile needs exactly 24 values");
          for (std::size_t i = 0; i < 24; ++i) s.traffic.profile.day_profile[i] = xs[i];
        },
        [](const Scenario& s) {
          return fmt_list({s.traffic.profile.day_profile.begin(),
                           s.traffic.profile.day_profile.end()});
        });
    dbl("traffic.session_rate_per_hour",
        [](Scenario& s) -> double& { return s.traffic.profile.session_rate_per_hour; });
    dbl("traffic.web_mix", [](Scenario& s) -> double& { return s.traffic.profile.web_mix; });
    dbl("traffic.start_hour", [](Scenario& s) -> double& { return s.traffic.start_hour; });

    dbl("traffic.web_pages_mean",
        [](Scenario& s) -> double& { return s.traffic.web.pages_per_session_mean; });
    dbl("traffic.web_main_mean_bytes",
        [](Scenario& s) -> double& { return s.traffic.web.main_size_mean_bytes; });
    dbl("traffic.web_main_sigma_log",
        [](Scenario& s) -> double& { return s.traffic.web.main_size_sigma_log; });
    dbl("traffic.web_embedded_mean",
        [](Scenario& s) -> double& { return s.traffic.web.embedded_count_mean; });
    add(
        "traffic.web_embedded_fixed",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.traffic.web.embedded_count_fixed = parse_ll(v);
        },
        [](const Scenario& s) { return std::to_string(s.traffic.web.embedded_count_fixed); });
    dbl("traffic.web_embedded_size_mean_bytes",
        [](Scenario& s) -> double& { return s.traffic.web.embedded_size_mean_bytes; });
    dbl("traffic.web_embedded_size_sigma_log",
        [](Scenario& s) -> double& { return s.traffic.web.embedded_size_sigma_log; });
    dbl("traffic.web_think_mean_s",
        [](Scenario& s) -> double& { return s.traffic.web.think_time_mean_s; });
    add(
        "traffic.web_truncation_bytes",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.traffic.web.truncation_bytes = parse_u64(v);
        },
        [](const Scenario& s) { return std::to_string(s.traffic.web.truncation_bytes); });

    dbl("traffic.video_fps", [](Scenario& s) -> double& { return s.traffic.video.fps; });
    integer("traffic.video_gop_n", [](Scenario& s) -> int& { return s.traffic.video.gop.n; });
    integer("traffic.video_gop_m", [](Scenario& s) -> int& { return s.traffic.video.gop.m; });
    auto u32 = [&add](std::string key, std::function<std::uint32_t&(Scenario&)> f) {
      auto setter = [f](Scenario& s, const std::string& v, const Ctx&) {
        std::uint64_t x = parse_u64(v);
        if (x > UINT32_MAX) throw ScenarioError("value out of range");
        f(s) = static_cast<std::uint32_t>(x);
      };
      auto getter = [f](const Scenario& s) {
        return std::to_string(f(const_cast<Scenario&>(s)));
      };
      add(std::move(key), setter, getter);
    };
    u32("traffic.video_i_bytes", [](Scenario& s) -> std::uint32_t& { return s.traffic.video.i_bytes; });
    u32("traffic.video_p_bytes", [](Scenario& s) -> std::uint32_t& { return s.traffic.video.p_bytes; });
    u32("traffic.video_b_bytes", [](Scenario& s) -> std::uint32_t& { return s.traffic.video.b_bytes; });
    dbl("traffic.video_duration_s",
        [](Scenario& s) -> double& { return s.traffic.video.duration_s; });
    dbl("traffic.video_playout_s",
        [](Scenario& s) -> double& { return s.traffic.video.playout_delay_s; });

    u32("traffic.transport_mtu_bytes",
        [](Scenario& s) -> std::uint32_t& { return s.traffic.transport.mtu_payload_bytes; });
    u32("traffic.transport_request_bytes",
        [](Scenario& s) -> std::uint32_t& { return s.traffic.transport.request_bytes; });
    u32("traffic.transport_ack_bytes",
        [](Scenario& s) -> std::uint32_t& { return s.traffic.transport.ack_bytes; });
    integer("traffic.transport_window",
            [](Scenario& s) -> int& { return s.traffic.transport.window_segments; });
    dbl("traffic.transport_rto_s", [](Scenario& s) -> double& { return s.traffic.transport.rto_s; });

    dbl("qoe.warmup_fraction", [](Scenario& s) -> double& { return s.warmup_fraction; });
    add(
        "qoe.metrics",
        [](Scenario& s, const std::string& v, const Ctx&) {
          auto parts = split(v, ',');
          if (parts.size() == 1 && parts[0].empty()) parts.clear();
          s.metrics = parts;
        },
        [](const Scenario& s) {
          std::string out;
          for (std::size_t i = 0; i < s.metrics.size(); ++i) {
            if (i) out += ",";
            out += s.metrics[i];
          }
          return out;
        });
    dbl("qoe.page_delay_margin", [](Scenario& s) -> double& { return s.page_delay.margin; });
    add(
        "qoe.page_delay_margin_kind",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.page_delay.margin_kind = parse_margin_kind(v);
        },
        [](const Scenario& s) { return std::string(ecr::to_string(s.page_delay.margin_kind)); });
    add(
        "qoe.page_delay_test",
        [](Scenario& s, const std::string& v, const Ctx&) { s.page_delay.test = parse_test(v); },
        [](const Scenario& s) { return std::string(stats::to_string(s.page_delay.test)); });
    dbl("qoe.dfr_margin", [](Scenario& s) -> double& { return s.dfr.margin; });
    add(
        "qoe.dfr_margin_kind",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.dfr.margin_kind = parse_margin_kind(v);
        },
        [](const Scenario& s) { return std::string(ecr::to_string(s.dfr.margin_kind)); });
    add(
        "qoe.dfr_test",
        [](Scenario& s, const std::string& v, const Ctx&) { s.dfr.test = parse_test(v); },
        [](const Scenario& s) { return std::string(stats::to_string(s.dfr.test)); });

    dbl("stats.alpha", [](Scenario& s) -> double& { return s.alpha; });

    add(
        "ecr.grid_mbps",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.ecr_grid_mbps = parse_double_list(v);
        },
        [](const Scenario& s) { return fmt_list(s.ecr_grid_mbps); });
    integer("ecr.replications", [](Scenario& s) -> int& { return s.ecr_replications; });
    add(
        "ecr.pairing",
        [](Scenario& s, const std::string& v, const Ctx&) {
          s.pairing = ecr::pairing_from_string(trim(v));
        },
        [](const Scenario& s) { return std::string(ecr::to_string(s.pairing)); });

    boolean("energy.enabled", [](Scenario& s) -> bool& { return s.energy_enabled; });
    boolean("energy.timeline_csv", [](Scenario& s) -> bool& { return s.energy_timeline_csv; });
    struct ClassKey {
      const char* label;
      energy::ComponentClass cls;
    };
    for (ClassKey ck : {ClassKey{"core", energy::ComponentClass::core},
                        ClassKey{"l2", energy::ComponentClass::l2_switch},
                        ClassKey{"olt_tx", energy::ComponentClass::olt_transceiver},
                        ClassKey{"onu", energy::ComponentClass::onu}}) {
      const std::string base = std::string("energy.") + ck.label + "_";
      auto cls = ck.cls;
      dbl(base + "active_w",
          [cls](Scenario& s) -> double& { return class_power(s, cls).active_w; });
      dbl(base + "idle_w", [cls](Scenario& s) -> double& { return class_power(s, cls).idle_w; });
      dbl(base + "sleep_w", [cls](Scenario& s) -> double& { return class_power(s, cls).sleep_w; });
      dbl(base + "threshold_s",
          [cls](Scenario& s) -> double& { return class_power(s, cls).sleep_threshold_s; });
      dbl(base + "wake_s", [cls](Scenario& s) -> double& { return class_power(s, cls).wake_s; });
    }
    return d;
  }();
  return defs;
}

struct RawEntry {
  std::string value;
  std::string origin;
  int line = 0;
};

[[noreturn]] void fail_at(const RawEntry& e, const std::string& key, const std::string& msg) {
  throw ScenarioError(e.origin + ":" + std::to_string(e.line) + ": key '" + key + "': " + msg);
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::simulate ? "simulate" : "ecr"; }

std::vector<ecr::EcrMetric> Scenario::ecr_metrics() const {
  std::vector<ecr::EcrMetric> out;
  for (const auto& name : metrics) {
    if (name == "page_delay") {
      out.push_back({name, stats::Direction::smaller_better, page_delay.test,
                     page_delay.margin_kind, page_delay.margin});
    } else if (name == "dfr") {
      out.push_back({name, stats::Direction::larger_better, dfr.test, dfr.margin_kind,
                     dfr.margin});
    } else {
      throw ScenarioError("unknown metric: " + name);
    }
  }
  return out;
}

ecr::EcrRequest Scenario::ecr_request() const {
  ecr::EcrRequest r;
  r.candidate = arch;
  r.rate_grid_bps.clear();
  for (double m : ecr_grid_mbps) r.rate_grid_bps.push_back(m * 1e6);
  r.metrics = ecr_metrics();
  r.alpha = alpha;
  r.replications = ecr_replications;
  r.root_seed = seed;
  r.pairing = pairing;
  return r;
}

void validate(const Scenario& s) {
  if (!(s.duration_s > 0.0)) throw ScenarioError("run.duration_s must be > 0");
  if (s.replications < 1) throw ScenarioError("run.replications must be >= 1");
  if (s.workers < 0) throw ScenarioError("run.workers must be >= 0");
  if (!(s.warmup_fraction >= 0.0 && s.warmup_fraction < 1.0))
    throw ScenarioError("qoe.warmup_fraction must be in [0, 1)");
  if (!(s.alpha > 0.0 && s.alpha < 0.5)) throw ScenarioError("stats.alpha must be in (0, 0.5)");
  if (s.metrics.empty()) throw ScenarioError("qoe.metrics must name at least one metric");
  for (const auto& m : s.metrics)
    if (m != "page_delay" && m != "dfr") throw ScenarioError("unknown metric: " + m);
  if (!(s.page_delay.margin > 0.0) || !(s.dfr.margin > 0.0))
    throw ScenarioError("margins must be > 0");
  try {
    arch::validate(s.arch);
    traffic::validate(s.traffic);
    energy::validate(s.profile);
  } catch (const std::exception& e) {
    throw ScenarioError(e.what());
  }
  if (s.mode == Mode::ecr) {
    if (s.ecr_replications < 3) throw ScenarioError("ecr.replications must be >= 3");
    if (s.ecr_grid_mbps.empty()) throw ScenarioError("ecr.grid_mbps must be non-empty");
    for (std::size_t i = 0; i < s.ecr_grid_mbps.size(); ++i) {
      if (!(s.ecr_grid_mbps[i] > 0.0)) throw ScenarioError("ecr.grid_mbps must be > 0");
      if (i > 0 && !(s.ecr_grid_mbps[i] > s.ecr_grid_mbps[i - 1]))
        throw ScenarioError("ecr.grid_mbps must be strictly increasing");
    }
  }
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin,
                             const std::vector<std::string>& overrides) {
  std::map<std::string, RawEntry> raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ScenarioError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty() || section.find('.') != std::string::npos)
        throw ScenarioError(origin + ":" + std::to_string(lineno) + ": malformed section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ScenarioError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ScenarioError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ScenarioError(origin + ":" + std::to_string(lineno) + ": key outside any section");
    std::string full = section + "." + key;
    if (raw.count(full))
      throw ScenarioError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + full +
                          "'");
    raw[full] = {value, origin, lineno};
  }

  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("override '" + ov + "': expected section.key=value");
    std::string key = trim(ov.substr(0, eq));
    if (key.find('.') == std::string::npos)
      throw ScenarioError("override '" + ov + "': expected section.key=value");
    raw[key] = {trim(ov.substr(eq + 1)), "<override>", 0};
  }

  Ctx ctx;
  if (auto pos = origin.find_last_of('/'); pos != std::string::npos)
    ctx.base_dir = origin.substr(0, pos);

  Scenario s;
  std::map<std::string, bool> used;
  for (const auto& def : schema()) {
    auto it = raw.find(def.key);
    if (it == raw.end()) continue;
    used[def.key] = true;
    try {
      def.set(s, it->second.value, ctx);
    } catch (const ScenarioError& e) {
      fail_at(it->second, def.key, e.what());
    } catch (const std::exception& e) {
      fail_at(it->second, def.key, e.what());
    }
  }
  for (const auto& [key, entry] : raw) {
    if (!used.count(key))
      throw ScenarioError(entry.origin + ":" + std::to_string(entry.line) + ": unknown key '" +
                          key + "'");
  }
  validate(s);
  return s;
}

Scenario parse_scenario_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path, overrides);
}

std::string resolved_echo(const Scenario& s) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  for (const auto& def : schema()) {
    if (!def.echo) continue;
    auto dot = def.key.find('.');
    sections[def.key.substr(0, dot)][def.key.substr(dot + 1)] = def.get(s);
  }
  std::string out;
  bool first = true;
  for (const auto& [sec, keys] : sections) {
    if (!first) out += "\n";
    first = false;
    out += "[" + sec + "]\n";
    for (const auto& [k, v] : keys) out += k + " = " + v + "\n";
  }
  return out;
}

}  // namespace oatb::scenario
