#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oatb/arch/network.hpp"
#include "oatb/qoe/qoe.hpp"
#include "oatb/sim/engine.hpp"
#include "oatb/traffic/generators.hpp"
#include "oatb/traffic/profiles.hpp"
#include "oatb/traffic/transport.hpp"

namespace oatb::traffic {

struct TrafficModels {
  UserProfile profile;
  WebModel web;
  VideoModel video;
  TransportParams transport;
  double start_hour = 20.0;  // position in the day profile at t = 0
};

void validate(const TrafficModels& m);

// Scalar QoE outcome of one replication. A metric is absent when the run
// produced no eligible sample for it (no completed page, no adjudicated
// frame); the caller decides whether that is an error.
struct ReplicationQoe {
  std::optional<double> page_delay_mean_s;
  std::optional<double> decodable_frame_rate;
  std::size_t pages_used = 0;
  std::size_t pages_censored = 0;
  std::size_t pages_before_warmup = 0;
  std::size_t frames_total = 0;
  std::size_t web_sessions = 0;
  std::size_t video_sessions = 0;
};

// User-behaviour layer: users_per_onu users on every ONU, each producing
// sessions from the profile's non-homogeneous Poisson process. Each session
// is web (probability web_mix) or video; web pages ride the reliable
// transport, video frames are sent unreliably and adjudicated against their
// playout deadline at collection time.
class TrafficDriver {
 public:
  TrafficDriver(sim::Engine& engine, arch::Network& net, TrafficModels models, int users_per_onu,
                std::string stream_prefix, double run_duration_s);
  ~TrafficDriver();

  TrafficDriver(const TrafficDriver&) = delete;
  TrafficDriver& operator=(const TrafficDriver&) = delete;

  // Schedules the first session arrival of every user; call once.
  void start();

  // Call after the engine has run to run_duration_s.
  ReplicationQoe collect(double warmup_s) const;

  const std::vector<qoe::PageTrace>& pages() const { return pages_; }
  // Deadline-adjudicated receipts of sessions requested at or after warmup_s,
  // pooled across sessions via disjoint GOP index ranges.
  std::vector<qoe::FrameReceipt> receipts(double warmup_s) const;

  std::size_t web_session_count() const { return web_.size(); }
  std::size_t video_session_count() const { return video_.size(); }

 private:
  struct User;
  struct WebSession;
  struct VideoSession;

  void schedule_next_arrival(User& u);
  void on_session_arrival(User& u);

  sim::Engine& engine_;
  arch::Network& net_;
  TrafficModels models_;
  std::string stream_prefix_;
  double run_duration_s_;
  double day_offset_s_;
  std::vector<std::unique_ptr<User>> users_;
  std::vector<std::unique_ptr<WebSession>> web_;
  std::vector<std::unique_ptr<VideoSession>> video_;
  std::vector<qoe::PageTrace> pages_;
  std::int64_t next_gop_base_ = 0;
  bool started_ = false;
};

}  // namespace oatb::traffic
