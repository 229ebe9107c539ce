#include "oatb/arch/queues.hpp"

#include <stdexcept>
#include <utility>

namespace oatb::arch {

ServiceQueue::ServiceQueue(sim::Engine& engine, std::string name, double rate_bps,
                           std::uint64_t buffer_bytes)
    : engine_(engine), name_(std::move(name)), rate_bps_(rate_bps), buffer_bytes_(buffer_bytes) {
  if (!(rate_bps > 0.0)) throw std::invalid_argument("ServiceQueue: rate must be > 0");
  if (buffer_bytes < 1) throw std::invalid_argument("ServiceQueue: buffer must be >= 1 byte");
}

bool ServiceQueue::enqueue(std::uint32_t bytes, PacketDone done) {
  if (bytes < 1) throw std::invalid_argument("ServiceQueue: empty packet");
  sim::SimTime now = engine_.now();
  counters_.offered_packets += 1;
  counters_.offered_bytes += bytes;
  if (busy_ && queued_bytes_ + bytes > buffer_bytes_) {
    counters_.dropped_packets += 1;
    counters_.dropped_bytes += bytes;
    return false;
  }
  queue_.push_back({bytes, now, std::move(done)});
  queued_bytes_ += bytes;
  if (!busy_) {
    busy_ = true;
    if (busy_hook_) busy_hook_(now, true);
    start_service(now);
  }
  return true;
}

void ServiceQueue::start_service(sim::SimTime now) {
  Packet pkt = std::move(queue_.front());
  queue_.pop_front();
  queued_bytes_ -= pkt.bytes;
  sim::SimTime finish = now + sim::transmission_time(pkt.bytes, rate_bps_);
  engine_.schedule(finish, name_, "tx_done", [this, finish, p = std::move(pkt)]() mutable {
    counters_.done_packets += 1;
    counters_.done_bytes += p.bytes;
    counters_.sojourn_sum_s += (finish - p.enqueued).seconds();
    if (p.done) p.done(finish);
    if (!queue_.empty()) {
      start_service(finish);
    } else {
      busy_ = false;
      if (busy_hook_) busy_hook_(finish, false);
    }
  });
}

GrantedQueue::GrantedQueue(std::uint64_t buffer_bytes) : buffer_bytes_(buffer_bytes) {
  if (buffer_bytes < 1) throw std::invalid_argument("GrantedQueue: buffer must be >= 1 byte");
}

bool GrantedQueue::enqueue(std::uint32_t bytes, sim::SimTime now, PacketDone done) {
  if (bytes < 1) throw std::invalid_argument("GrantedQueue: empty packet");
  counters_.offered_packets += 1;
  counters_.offered_bytes += bytes;
  if (queued_bytes_ + bytes > buffer_bytes_) {
    counters_.dropped_packets += 1;
    counters_.dropped_bytes += bytes;
    return false;
  }
  queue_.push_back({bytes, 0, now, std::move(done)});
  queued_bytes_ += bytes;
  return true;
}

std::uint64_t GrantedQueue::drain(std::uint64_t grant_bytes, std::vector<Completion>& out) {
  std::uint64_t consumed = 0;
  while (grant_bytes > consumed && !queue_.empty()) {
    Packet& head = queue_.front();
    std::uint64_t want = head.bytes - head.sent;
    std::uint64_t take = std::min<std::uint64_t>(want, grant_bytes - consumed);
    head.sent += static_cast<std::uint32_t>(take);
    consumed += take;
    queued_bytes_ -= take;
    if (head.sent == head.bytes) {
      out.push_back({consumed, head.enqueued, head.bytes, std::move(head.done)});
      queue_.pop_front();
    }
  }
  return consumed;
}

void GrantedQueue::record_done(const Completion& c, sim::SimTime done_time) {
  counters_.done_packets += 1;
  counters_.done_bytes += c.bytes;
  counters_.sojourn_sum_s += (done_time - c.enqueued).seconds();
}

}  // namespace oatb::arch
