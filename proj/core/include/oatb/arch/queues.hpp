#pragma once

#include <cstdint>
#include <deque>
#include <functional>

#include "oatb/sim/engine.hpp"

namespace oatb::arch {

// Callback fired when a packet's last byte leaves the stage that accepted it
// (service completion for rate queues; arrival at the OLT for granted
// upstream bursts). The argument is the completion time.
using PacketDone = std::function<void(sim::SimTime)>;

struct QueueCounters {
  std::uint64_t offered_packets = 0;
  std::uint64_t offered_bytes = 0;
  std::uint64_t done_packets = 0;
  std::uint64_t done_bytes = 0;
  std::uint64_t dropped_packets = 0;
  std::uint64_t dropped_bytes = 0;
  double sojourn_sum_s = 0.0;  // enqueue to completion, over done packets

  std::uint64_t resident_packets() const { return offered_packets - done_packets - dropped_packets; }
  std::uint64_t resident_bytes() const { return offered_bytes - done_bytes - dropped_bytes; }
  double mean_sojourn_s() const {
    return done_packets == 0 ? 0.0 : sojourn_sum_s / static_cast<double>(done_packets);
  }
};

// Work-conserving FIFO server: serialization at a fixed bit rate with a
// drop-tail byte buffer. Buffer occupancy counts queued packets only; the
// packet in service has left the buffer.
class ServiceQueue {
 public:
  using BusyHook = std::function<void(sim::SimTime, bool busy)>;

  ServiceQueue(sim::Engine& engine, std::string name, double rate_bps, std::uint64_t buffer_bytes);

  // Returns false when the packet was dropped (buffer overflow).
  bool enqueue(std::uint32_t bytes, PacketDone done);

  bool busy() const { return busy_; }
  std::uint64_t backlog_bytes() const { return queued_bytes_; }
  const QueueCounters& counters() const { return counters_; }
  double rate_bps() const { return rate_bps_; }

  // Observes busy/idle transitions (energy accounting).
  void set_busy_hook(BusyHook hook) { busy_hook_ = std::move(hook); }

 private:
  struct Packet {
    std::uint32_t bytes;
    sim::SimTime enqueued;
    PacketDone done;
  };

  void start_service(sim::SimTime now);

  sim::Engine& engine_;
  std::string name_;
  double rate_bps_;
  std::uint64_t buffer_bytes_;
  std::uint64_t queued_bytes_ = 0;
  std::deque<Packet> queue_;
  bool busy_ = false;
  QueueCounters counters_;
  BusyHook busy_hook_;
};

// Upstream ONU buffer drained by explicit byte grants. Packets may span
// grants (fragment and reassemble at the OLT); a packet completes when its
// last byte has been granted.
class GrantedQueue {
 public:
  explicit GrantedQueue(std::uint64_t buffer_bytes);

  bool enqueue(std::uint32_t bytes, sim::SimTime now, PacketDone done);

  std::uint64_t backlog_bytes() const { return queued_bytes_; }
  bool empty() const { return queue_.empty(); }
  const QueueCounters& counters() const { return counters_; }

  struct Completion {
    std::uint64_t end_offset_bytes;  // grant bytes consumed up to and including this packet
    sim::SimTime enqueued;
    std::uint32_t bytes;
    PacketDone done;
  };

  // Removes up to grant_bytes from the head of the queue. Completions are
  // returned in order with their byte offsets inside this grant; the caller
  // schedules the delivery instants and reports them back through
  // record_done. Returns the number of bytes consumed.
  std::uint64_t drain(std::uint64_t grant_bytes, std::vector<Completion>& out);

  void record_done(const Completion& c, sim::SimTime done_time);

 private:
  struct Packet {
    std::uint32_t bytes;
    std::uint32_t sent;
    sim::SimTime enqueued;
    PacketDone done;
  };

  std::uint64_t buffer_bytes_;
  std::uint64_t queued_bytes_ = 0;
  std::deque<Packet> queue_;
  QueueCounters counters_;
};

}  // namespace oatb::arch
