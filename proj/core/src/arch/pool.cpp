#include "oatb/arch/pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace oatb::arch {

std::vector<Assignment> assign_transceiver(const std::vector<TransceiverState>& pool,
                                           const std::vector<WavelengthBacklog>& queues,
                                           sim::SimTime now, double tuning_time_s) {
  if (tuning_time_s < 0.0) throw std::invalid_argument("assign_transceiver: negative tuning time");

  std::vector<const WavelengthBacklog*> candidates;
  for (const auto& q : queues)
    if (!q.in_service && q.hol_enqueued) candidates.push_back(&q);
  // Oldest head-of-line first; lowest wavelength index on equal age.
  std::sort(candidates.begin(), candidates.end(),
            [](const WavelengthBacklog* a, const WavelengthBacklog* b) {
              if (*a->hol_enqueued != *b->hol_enqueued) return *a->hol_enqueued < *b->hol_enqueued;
              return a->wavelength < b->wavelength;
            });

  std::vector<const TransceiverState*> idle;
  for (const auto& t : pool)
    if (t.busy_until <= now) idle.push_back(&t);
  std::sort(idle.begin(), idle.end(),
            [](const TransceiverState* a, const TransceiverState* b) { return a->id < b->id; });

  std::vector<Assignment> out;
  std::vector<bool> taken(idle.size(), false);
  for (const auto* q : candidates) {
    std::size_t pick = idle.size();
    for (std::size_t i = 0; i < idle.size(); ++i)
      if (!taken[i] && idle[i]->current_wavelength == q->wavelength) {
        pick = i;
        break;
      }
    if (pick == idle.size())
      for (std::size_t i = 0; i < idle.size(); ++i)
        if (!taken[i]) {
          pick = i;
          break;
        }
    if (pick == idle.size()) break;  // pool exhausted
    taken[pick] = true;
    Assignment a;
    a.transceiver = idle[pick]->id;
    a.wavelength = q->wavelength;
    bool retune = idle[pick]->current_wavelength != q->wavelength;
    a.tune_until = retune ? now + sim::SimTime::from_seconds(tuning_time_s) : now;
    a.transmit_start = a.tune_until;
    out.push_back(a);
  }
  return out;
}

PoolScheduler::PoolScheduler(sim::Engine& engine, std::string name, int wavelengths, int pool_size,
                             double rate_bps, double tuning_time_s,
                             std::uint64_t buffer_bytes_per_wavelength,
                             double power_off_threshold_s)
    : engine_(engine),
      name_(std::move(name)),
      rate_bps_(rate_bps),
      tuning_time_s_(tuning_time_s),
      buffer_bytes_(buffer_bytes_per_wavelength),
      off_threshold_s_(power_off_threshold_s) {
  if (wavelengths < 1 || pool_size < 1)
    throw std::invalid_argument("PoolScheduler: need at least one wavelength and one transceiver");
  if (pool_size > wavelengths)
    throw std::invalid_argument("PoolScheduler: pool larger than wavelength count");
  if (!(rate_bps > 0.0)) throw std::invalid_argument("PoolScheduler: rate must be > 0");
  wavelengths_.resize(static_cast<std::size_t>(wavelengths));
  pool_.resize(static_cast<std::size_t>(pool_size));
  for (int i = 0; i < pool_size; ++i) pool_[static_cast<std::size_t>(i)].id = i;
  idle_since_.assign(static_cast<std::size_t>(pool_size), engine_.now());
  off_check_pending_.assign(static_cast<std::size_t>(pool_size), false);
  for (int i = 0; i < pool_size; ++i) schedule_off_check(i, engine_.now());
}

bool PoolScheduler::enqueue(int wavelength, int onu, std::uint32_t bytes, PacketDone done) {
  auto& wl = wavelengths_.at(static_cast<std::size_t>(wavelength));
  sim::SimTime now = engine_.now();
  wl.counters.offered_packets += 1;
  wl.counters.offered_bytes += bytes;
  if (wl.queued_bytes + bytes > buffer_bytes_) {
    wl.counters.dropped_packets += 1;
    wl.counters.dropped_bytes += bytes;
    return false;
  }
  wl.queue.push_back({onu, bytes, now, std::move(done)});
  wl.queued_bytes += bytes;
  dispatch();
  return true;
}

const QueueCounters& PoolScheduler::wavelength_counters(int wavelength) const {
  return wavelengths_.at(static_cast<std::size_t>(wavelength)).counters;
}

std::uint64_t PoolScheduler::backlog_bytes(int wavelength) const {
  return wavelengths_.at(static_cast<std::size_t>(wavelength)).queued_bytes;
}

void PoolScheduler::dispatch() {
  sim::SimTime now = engine_.now();
  std::vector<WavelengthBacklog> backlogs;
  backlogs.reserve(wavelengths_.size());
  for (std::size_t w = 0; w < wavelengths_.size(); ++w) {
    WavelengthBacklog b;
    b.wavelength = static_cast<int>(w);
    b.in_service = wavelengths_[w].in_service;
    if (!wavelengths_[w].queue.empty()) b.hol_enqueued = wavelengths_[w].queue.front().enqueued;
    backlogs.push_back(b);
  }
  auto assignments = assign_transceiver(pool_, backlogs, now, tuning_time_s_);
  for (const auto& a : assignments) {
    auto& tx = pool_[static_cast<std::size_t>(a.transceiver)];
    auto& wl = wavelengths_[static_cast<std::size_t>(a.wavelength)];
    if (tx.current_wavelength != a.wavelength) ++retunes_;
    tx.powered = Powered::active;
    tx.current_wavelength = a.wavelength;
    tx.busy_until = a.transmit_start;
    wl.in_service = true;
    if (power_hook_) power_hook_(a.transceiver, now, true, true);
    if (a.transmit_start > now) {
      engine_.schedule(a.transmit_start, name_, "tuned",
                       [this, t = a.transceiver, w = a.wavelength]() { serve(t, w); });
    } else {
      serve(a.transceiver, a.wavelength);
    }
  }
}

void PoolScheduler::serve(int tx_id, int wavelength) {
  auto& tx = pool_[static_cast<std::size_t>(tx_id)];
  auto& wl = wavelengths_[static_cast<std::size_t>(wavelength)];
  sim::SimTime now = engine_.now();
  if (wl.queue.empty()) {
    wl.in_service = false;
    mark_idle(tx_id, now);
    dispatch();
    return;
  }
  Packet pkt = std::move(wl.queue.front());
  wl.queue.pop_front();
  wl.queued_bytes -= pkt.bytes;
  sim::SimTime tx_end = now + sim::transmission_time(pkt.bytes, rate_bps_);
  tx.busy_until = tx_end;
  engine_.schedule(tx_end, name_, "tx_done", [this, tx_id, wavelength, p = std::move(pkt), tx_end]() {
    auto& w = wavelengths_[static_cast<std::size_t>(wavelength)];
    w.counters.done_packets += 1;
    w.counters.done_bytes += p.bytes;
    w.counters.sojourn_sum_s += (tx_end - p.enqueued).seconds();
    if (p.done) p.done(tx_end);
    serve(tx_id, wavelength);
  });
}

void PoolScheduler::mark_idle(int tx_id, sim::SimTime t) {
  auto& tx = pool_[static_cast<std::size_t>(tx_id)];
  tx.busy_until = t;
  idle_since_[static_cast<std::size_t>(tx_id)] = t;
  if (power_hook_) power_hook_(tx_id, t, false, tx.powered == Powered::active);
  if (off_threshold_s_ > 0.0) schedule_off_check(tx_id, t);
}

void PoolScheduler::schedule_off_check(int tx_id, sim::SimTime idle_since) {
  if (off_threshold_s_ <= 0.0) return;
  auto idx = static_cast<std::size_t>(tx_id);
  if (off_check_pending_[idx]) return;
  off_check_pending_[idx] = true;
  sim::SimTime when = idle_since + sim::SimTime::from_seconds(off_threshold_s_);
  engine_.schedule(when, name_, "off_check", [this, tx_id, idx]() {
    off_check_pending_[idx] = false;
    auto& tx = pool_[idx];
    sim::SimTime now = engine_.now();
    if (tx.powered == Powered::off) return;
    bool busy = tx.busy_until > now ||
                (tx.current_wavelength >= 0 &&
                 wavelengths_[static_cast<std::size_t>(tx.current_wavelength)].in_service);
    if (busy) return;
    sim::SimTime idle_start = idle_since_[idx];
    if ((now - idle_start).seconds() + 1e-15 >= off_threshold_s_) {
      tx.powered = Powered::off;
      if (power_hook_) power_hook_(tx_id, now, false, false);
    } else {
      schedule_off_check(tx_id, idle_start);
    }
  });
}

}  // namespace oatb::arch
