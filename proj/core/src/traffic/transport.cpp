#include "oatb/traffic/transport.hpp"

#include <stdexcept>

#include "oatb/traffic/generators.hpp"

namespace oatb::traffic {

void validate(const TransportParams& p) {
  if (p.mtu_payload_bytes == 0) throw std::invalid_argument("mtu payload must be >= 1");
  if (p.request_bytes == 0) throw std::invalid_argument("request size must be >= 1");
  if (p.ack_bytes == 0) throw std::invalid_argument("ack size must be >= 1");
  if (p.window_segments < 1) throw std::invalid_argument("window must be >= 1 segment");
  if (!(p.rto_s > 0.0)) throw std::invalid_argument("rto must be > 0");
}

ReliableDownload::ReliableDownload(sim::Engine& engine, arch::Network& net, int onu,
                                   const TransportParams& params, std::uint64_t object_bytes,
                                   Done done)
    : engine_(engine), net_(net), onu_(onu), params_(params), done_(std::move(done)) {
  validate(params_);
  // A zero-byte object needs no data phase; the request round trip alone
  // completes it.
  if (object_bytes > 0) segments_ = segment_object(object_bytes, params_.mtu_payload_bytes);
}

void ReliableDownload::start() {
  if (started_) throw std::logic_error("download already started");
  started_ = true;
  net_.send_upstream(onu_, params_.request_bytes, [this](sim::SimTime) { server_start(); });
  arm_timer();
}

void ReliableDownload::server_start() {
  if (server_started_) return;
  server_started_ = true;
  if (timer_) {
    engine_.cancel(*timer_);
    timer_.reset();
  }
  if (segments_.empty()) {
    done_fired_ = true;
    if (done_) done_(engine_.now());
    return;
  }
  fill_window();
}

void ReliableDownload::fill_window() {
  const std::size_t limit = base_ + static_cast<std::size_t>(params_.window_segments);
  while (next_ < segments_.size() && next_ < limit) {
    send_segment(next_);
    ++next_;
  }
  if (base_ < next_ && !timer_) arm_timer();
}

void ReliableDownload::send_segment(std::size_t seq) {
  net_.send_downstream(onu_, segments_[seq], [this, seq](sim::SimTime t) { on_segment(seq, t); });
}

void ReliableDownload::on_segment(std::size_t seq, sim::SimTime t) {
  if (seq == expected_) ++expected_;
  send_ack();
  if (expected_ == segments_.size() && !done_fired_) {
    done_fired_ = true;
    if (done_) done_(t);
  }
}

void ReliableDownload::send_ack() {
  net_.send_upstream(onu_, params_.ack_bytes,
                     [this, cumulative = expected_](sim::SimTime) { on_ack(cumulative); });
}

void ReliableDownload::on_ack(std::size_t cumulative) {
  if (cumulative <= base_) return;
  base_ = cumulative;
  if (timer_) {
    engine_.cancel(*timer_);
    timer_.reset();
  }
  if (base_ >= segments_.size()) return;
  arm_timer();
  fill_window();
}

void ReliableDownload::arm_timer() {
  if (timer_) engine_.cancel(*timer_);
  timer_ = engine_.schedule(engine_.now() + sim::SimTime::from_seconds(params_.rto_s), "transport",
                            "rto", [this]() {
                              timer_.reset();
                              on_timeout();
                            });
}

void ReliableDownload::on_timeout() {
  if (!server_started_) {
    net_.send_upstream(onu_, params_.request_bytes, [this](sim::SimTime) { server_start(); });
    arm_timer();
    return;
  }
  if (base_ >= segments_.size()) return;
  for (std::size_t seq = base_; seq < next_; ++seq) {
    send_segment(seq);
    ++retransmitted_;
  }
  arm_timer();
}

}  // namespace oatb::traffic
