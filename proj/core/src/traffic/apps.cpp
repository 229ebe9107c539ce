#include "oatb/traffic/apps.hpp"

#include <stdexcept>
#include <utility>

namespace oatb::traffic {

void validate(const TrafficModels& m) {
  validate(m.profile);
  validate(m.web);
  validate(m.video);
  validate(m.transport);
  if (!(m.start_hour >= 0.0 && m.start_hour < 24.0))
    throw std::invalid_argument("start_hour must be in [0, 24)");
}

struct TrafficDriver::User {
  int onu = 0;
  int index = 0;
  sim::RngStream arrivals;
  std::uint64_t sessions = 0;

  explicit User(sim::RngStream s) : arrivals(std::move(s)) {}
};

struct TrafficDriver::WebSession {
  TrafficDriver& drv;
  int onu;
  sim::RngStream stream;
  std::int64_t pages_left = 0;
  std::size_t page_index = 0;
  std::size_t embedded_pending = 0;
  std::vector<std::unique_ptr<ReliableDownload>> downloads;

  WebSession(TrafficDriver& d, int o, sim::RngStream s) : drv(d), onu(o), stream(std::move(s)) {}

  void begin(sim::SimTime now) {
    pages_left = draw_session_pages(drv.models_.web, stream);
    start_page(now);
  }

  void start_page(sim::SimTime now) {
    --pages_left;
    PageSpec spec = generate_page(drv.models_.web, stream);
    page_index = drv.pages_.size();
    drv.pages_.push_back({now.seconds(), std::nullopt});
    auto dl = std::make_unique<ReliableDownload>(
        drv.engine_, drv.net_, onu, drv.models_.transport, spec.main_bytes,
        [this, spec = std::move(spec)](sim::SimTime t) { on_main_done(spec, t); });
    dl->start();
    downloads.push_back(std::move(dl));
  }

  void on_main_done(const PageSpec& spec, sim::SimTime t) {
    if (spec.embedded_bytes.empty()) {
      finish_page(t, spec.think_time_s);
      return;
    }
    embedded_pending = spec.embedded_bytes.size();
    const double think_s = spec.think_time_s;
    for (std::uint64_t bytes : spec.embedded_bytes) {
      auto dl = std::make_unique<ReliableDownload>(
          drv.engine_, drv.net_, onu, drv.models_.transport, bytes,
          [this, think_s](sim::SimTime tt) {
            if (--embedded_pending == 0) finish_page(tt, think_s);
          });
      dl->start();
      downloads.push_back(std::move(dl));
    }
  }

  void finish_page(sim::SimTime t, double think_s) {
    drv.pages_[page_index].completion_s = t.seconds();
    if (pages_left <= 0) return;
    drv.engine_.schedule(t + sim::SimTime::from_seconds(think_s), "web", "page",
                         [this]() { start_page(drv.engine_.now()); });
  }
};

struct TrafficDriver::VideoSession {
  TrafficDriver& drv;
  int onu;
  double request_s = 0.0;
  std::optional<double> server_start_s;
  std::int64_t gop_base = 0;
  std::vector<FrameEmission> schedule;

  struct FrameState {
    std::uint32_t expected = 0;
    std::uint32_t arrived = 0;
    bool emitted = false;
    sim::SimTime last_arrival;
  };
  std::vector<FrameState> frames;

  VideoSession(TrafficDriver& d, int o) : drv(d), onu(o) {}

  void begin(sim::SimTime now) {
    request_s = now.seconds();
    schedule = generate_gop_schedule(drv.models_.video);
    frames.resize(schedule.size());
    gop_base = drv.next_gop_base_;
    if (!schedule.empty()) drv.next_gop_base_ += schedule.back().gop_index + 1;
    drv.net_.send_upstream(onu, drv.models_.transport.request_bytes,
                           [this](sim::SimTime t) { on_server_start(t); });
  }

  void on_server_start(sim::SimTime t) {
    server_start_s = t.seconds();
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      drv.engine_.schedule(t + sim::SimTime::from_seconds(schedule[i].emit_s), "video", "frame",
                           [this, i]() { emit(i); });
    }
  }

  void emit(std::size_t i) {
    auto segs = segment_object(schedule[i].bytes, drv.models_.transport.mtu_payload_bytes);
    auto& f = frames[i];
    f.emitted = true;
    f.expected = static_cast<std::uint32_t>(segs.size());
    for (std::uint32_t bytes : segs) {
      drv.net_.send_downstream(onu, bytes, [this, i](sim::SimTime t) { on_segment(i, t); });
    }
  }

  void on_segment(std::size_t i, sim::SimTime t) {
    auto& f = frames[i];
    ++f.arrived;
    if (t > f.last_arrival) f.last_arrival = t;
  }
};

TrafficDriver::TrafficDriver(sim::Engine& engine, arch::Network& net, TrafficModels models,
                             int users_per_onu, std::string stream_prefix, double run_duration_s)
    : engine_(engine),
      net_(net),
      models_(std::move(models)),
      stream_prefix_(std::move(stream_prefix)),
      run_duration_s_(run_duration_s) {
  validate(models_);
  if (users_per_onu < 0) throw std::invalid_argument("users_per_onu must be >= 0");
  if (!(run_duration_s_ > 0.0)) throw std::invalid_argument("run duration must be > 0");
  day_offset_s_ = models_.start_hour * 3600.0;
  for (int onu = 0; onu < net_.config().onu_count; ++onu) {
    for (int u = 0; u < users_per_onu; ++u) {
      auto user = std::make_unique<User>(engine_.stream(stream_prefix_ + "/onu/" +
                                                        std::to_string(onu) + "/user/" +
                                                        std::to_string(u) + "/arrivals"));
      user->onu = onu;
      user->index = u;
      users_.push_back(std::move(user));
    }
  }
}

TrafficDriver::~TrafficDriver() = default;

void TrafficDriver::start() {
  if (started_) throw std::logic_error("driver already started");
  started_ = true;
  for (auto& u : users_) schedule_next_arrival(*u);
}

void TrafficDriver::schedule_next_arrival(User& u) {
  auto t_abs = next_session_time(models_.profile, day_offset_s_ + engine_.now().seconds(),
                                 u.arrivals);
  if (!t_abs) return;
  const double t_rel = *t_abs - day_offset_s_;
  if (t_rel >= run_duration_s_) return;
  sim::SimTime when = sim::SimTime::from_seconds(t_rel);
  if (when <= engine_.now()) when = engine_.now() + sim::SimTime::from_picos(1);
  engine_.schedule(when, "user", "session", [this, &u]() { on_session_arrival(u); });
}

void TrafficDriver::on_session_arrival(User& u) {
  const sim::SimTime now = engine_.now();
  const std::string base = stream_prefix_ + "/onu/" + std::to_string(u.onu) + "/user/" +
                           std::to_string(u.index) + "/session/" + std::to_string(u.sessions++);
  if (u.arrivals.chance(models_.profile.web_mix)) {
    web_.push_back(std::make_unique<WebSession>(*this, u.onu, engine_.stream(base)));
    web_.back()->begin(now);
  } else {
    video_.push_back(std::make_unique<VideoSession>(*this, u.onu));
    video_.back()->begin(now);
  }
  schedule_next_arrival(u);
}

std::vector<qoe::FrameReceipt> TrafficDriver::receipts(double warmup_s) const {
  std::vector<qoe::FrameReceipt> out;
  const sim::SimTime run_end = sim::SimTime::from_seconds(run_duration_s_);
  const int n = models_.video.gop.n;
  for (const auto& vs : video_) {
    if (vs->request_s < warmup_s || !vs->server_start_s) continue;
    for (std::size_t i = 0; i < vs->schedule.size(); ++i) {
      const auto& e = vs->schedule[i];
      const auto& f = vs->frames[i];
      if (!f.emitted) continue;
      const sim::SimTime deadline = sim::SimTime::from_seconds(
          *vs->server_start_s + models_.video.playout_delay_s +
          static_cast<double>(e.display_index) / models_.video.fps);
      if (deadline > run_end) continue;
      const bool ok = f.expected > 0 && f.arrived == f.expected && f.last_arrival <= deadline;
      out.push_back({e.display_index + vs->gop_base * n, e.type, e.gop_index + vs->gop_base, ok});
    }
  }
  return out;
}

ReplicationQoe TrafficDriver::collect(double warmup_s) const {
  ReplicationQoe out;
  out.web_sessions = web_.size();
  out.video_sessions = video_.size();
  try {
    auto st = qoe::page_delay_stats(pages_, warmup_s);
    out.page_delay_mean_s = st.mean_s;
    out.pages_used = st.used;
    out.pages_censored = st.censored;
    out.pages_before_warmup = st.before_warmup;
  } catch (const qoe::InsufficientData& e) {
    out.pages_censored = e.censored;
    out.pages_before_warmup = e.before_warmup;
  }
  auto rec = receipts(warmup_s);
  out.frames_total = rec.size();
  if (!rec.empty()) out.decodable_frame_rate = qoe::decodable_frame_rate(rec, models_.video.gop);
  return out;
}

}  // namespace oatb::traffic
