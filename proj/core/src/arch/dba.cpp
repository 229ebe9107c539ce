#include "oatb/arch/dba.hpp"

#include <algorithm>
#include <stdexcept>

namespace oatb::arch {

std::vector<Grant> dba_grant_cycle(const std::vector<std::uint64_t>& reports,
                                   const std::vector<double>& rtts_s, sim::SimTime now,
                                   const DbaParams& params) {
  if (reports.size() != rtts_s.size())
    throw std::invalid_argument("dba_grant_cycle: one report and one rtt per ONU");
  if (reports.empty()) return {};
  std::vector<Grant> grants;
  grants.reserve(reports.size());
  sim::SimTime guard = sim::SimTime::from_seconds(params.guard_time_s);
  sim::SimTime free_at;
  bool first = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    Grant g;
    g.onu = static_cast<int>(i);
    g.length_bytes = std::min<std::uint64_t>(reports[i], params.max_grant_bytes);
    sim::SimTime earliest = now + sim::SimTime::from_seconds(rtts_s[i]);
    g.start = first ? earliest : std::max(free_at, earliest);
    free_at = g.start +
              (g.length_bytes > 0 ? sim::transmission_time(g.length_bytes, params.feeder_rate_bps)
                                  : sim::SimTime::zero()) +
              guard;
    first = false;
    grants.push_back(g);
  }
  return grants;
}

InterleavedPoller::InterleavedPoller(sim::Engine& engine, std::string name, const DbaParams& params,
                                     double rtt_s, std::vector<int> onu_ids,
                                     std::uint64_t buffer_bytes, int wavelength)
    : engine_(engine),
      name_(std::move(name)),
      params_(params),
      prop_(sim::SimTime::from_seconds(rtt_s / 2.0)),
      guard_(sim::SimTime::from_seconds(params.guard_time_s)),
      wavelength_(wavelength) {
  if (onu_ids.empty()) throw std::invalid_argument("InterleavedPoller: no ONUs");
  onus_.reserve(onu_ids.size());
  for (int id : onu_ids) onus_.push_back({id, GrantedQueue(buffer_bytes), sim::SimTime::zero()});
}

std::size_t InterleavedPoller::index_of(int onu) const {
  for (std::size_t i = 0; i < onus_.size(); ++i)
    if (onus_[i].id == onu) return i;
  throw std::invalid_argument("InterleavedPoller: unknown ONU " + std::to_string(onu));
}

void InterleavedPoller::start() {
  sim::SimTime now = engine_.now();
  for (std::size_t i = 0; i < onus_.size(); ++i) on_report(i, 0, now);
}

bool InterleavedPoller::enqueue(int onu, std::uint32_t bytes, PacketDone done) {
  return onus_[index_of(onu)].queue.enqueue(bytes, engine_.now(), std::move(done));
}

std::uint64_t InterleavedPoller::backlog_bytes(int onu) const {
  return onus_[index_of(onu)].queue.backlog_bytes();
}

const QueueCounters& InterleavedPoller::onu_counters(int onu) const {
  return onus_[index_of(onu)].queue.counters();
}

void InterleavedPoller::on_report(std::size_t idx, std::uint64_t report_bytes, sim::SimTime now) {
  OnuState& st = onus_[idx];
  std::uint64_t length = std::min<std::uint64_t>(report_bytes, params_.max_grant_bytes);

  // Earliest burst arrival at the OLT: gate travels down, first bit back up.
  sim::SimTime earliest = now + prop_ + prop_;
  if (length == 0 && st.polled_once)
    earliest = std::max(earliest,
                        st.last_grant_start + sim::SimTime::from_seconds(params_.idle_poll_interval_s));
  sim::SimTime start = std::max(feeder_free_at_, earliest);
  sim::SimTime burst =
      length > 0 ? sim::transmission_time(length, params_.feeder_rate_bps) : sim::SimTime::zero();
  feeder_free_at_ = start + burst + guard_;
  st.last_grant_start = start;
  st.polled_once = true;
  if (grant_log_) grant_log_->push_back({st.id, start, length, wavelength_});

  // The ONU starts transmitting one propagation time before the burst
  // reaches the OLT. Bytes are committed and the piggybacked report is
  // measured at transmission start; the report reaches the OLT at burst end.
  sim::SimTime tx_start = start - prop_;
  engine_.schedule(tx_start, name_, "burst_tx", [this, idx, start, length, burst]() {
    OnuState& onu = onus_[idx];
    if (tx_activity_ && length > 0) tx_activity_(onu.id, engine_.now(), engine_.now() + burst);
    if (length > 0) {
      std::vector<GrantedQueue::Completion> completions;
      std::uint64_t consumed = onu.queue.drain(length, completions);
      if (consumed != length)
        throw std::logic_error("InterleavedPoller: reported bytes missing from ONU queue");
      for (auto& c : completions) {
        sim::SimTime arrival = start + sim::transmission_time(c.end_offset_bytes, params_.feeder_rate_bps);
        engine_.schedule(arrival, name_, "burst_rx",
                         [this, idx2 = idx, c = std::move(c), arrival]() mutable {
                           OnuState& o = onus_[idx2];
                           o.queue.record_done(c, arrival);
                           if (delivered_) delivered_(o.id, c.bytes, c.enqueued, arrival);
                           if (c.done) c.done(arrival);
                         });
      }
    }
    std::uint64_t next_report = onu.queue.backlog_bytes();
    sim::SimTime report_at = start + burst;
    engine_.schedule(report_at, name_, "report",
                     [this, idx, next_report, report_at]() { on_report(idx, next_report, report_at); });
  });
}

}  // namespace oatb::arch
