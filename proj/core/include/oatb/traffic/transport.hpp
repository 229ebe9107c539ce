#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "oatb/arch/network.hpp"
#include "oatb/sim/engine.hpp"

namespace oatb::traffic {

// Fixed-window, acknowledgment-clocked reliable transfer. Deliberately
// simpler than TCP: constant window, cumulative acks, go-back-N recovery on
// a fixed retransmission timeout, no congestion control. Architecture-level
// queueing and scheduling remain the only source of performance differences.
struct TransportParams {
  std::uint32_t mtu_payload_bytes = 1460;
  std::uint32_t request_bytes = 400;
  std::uint32_t ack_bytes = 64;
  int window_segments = 16;
  double rto_s = 1.0;
};

void validate(const TransportParams& p);

// One client-initiated object download: a request travels upstream, the
// server answers with the segmented object under the window discipline, the
// client acknowledges each in-order segment. done fires when the last byte
// of the object reaches the client (for a zero-byte object, when the request
// reaches the server); it never fires for transfers still incomplete at run
// end.
class ReliableDownload {
 public:
  using Done = std::function<void(sim::SimTime)>;

  ReliableDownload(sim::Engine& engine, arch::Network& net, int onu, const TransportParams& params,
                   std::uint64_t object_bytes, Done done);

  // Sends the request; call once.
  void start();

  bool finished() const { return done_fired_; }
  std::uint64_t retransmitted_segments() const { return retransmitted_; }

 private:
  void server_start();
  void fill_window();
  void send_segment(std::size_t seq);
  void on_segment(std::size_t seq, sim::SimTime t);
  void send_ack();
  void on_ack(std::size_t cumulative);
  void arm_timer();
  void on_timeout();

  sim::Engine& engine_;
  arch::Network& net_;
  int onu_;
  TransportParams params_;
  Done done_;
  std::vector<std::uint32_t> segments_;
  std::size_t base_ = 0;      // lowest unacknowledged segment (server)
  std::size_t next_ = 0;      // next segment to send (server)
  std::size_t expected_ = 0;  // next in-order segment (client)
  std::optional<sim::EventHandle> timer_;
  std::uint64_t retransmitted_ = 0;
  bool started_ = false;
  bool server_started_ = false;
  bool done_fired_ = false;
};

}  // namespace oatb::traffic
