#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oatb/arch/queues.hpp"
#include "oatb/sim/engine.hpp"

namespace oatb::arch {

// One upstream transmission opportunity. start is the time the burst begins
// arriving at the OLT receiver; the burst occupies the medium until
// start + transmission_time(length_bytes).
struct Grant {
  int onu = 0;
  sim::SimTime start;
  std::uint64_t length_bytes = 0;
  int wavelength = -1;  // hybrid only
};

struct DbaParams {
  double feeder_rate_bps = 1e9;
  std::uint32_t max_grant_bytes = 15500;
  double guard_time_s = 1e-6;
  // A zero-report ONU is re-polled no earlier than this after its previous
  // poll, so idle ONUs do not spin the feeder with empty slots.
  double idle_poll_interval_s = 1e-3;
};

// Limited-service polling: plans one full grant cycle for the given reports.
// Grant i's length is min(report, max_grant); bursts are sequenced in ONU
// order with exactly guard_time between them, and each start additionally
// respects now + rtt (gate notification down, first bit up).
std::vector<Grant> dba_grant_cycle(const std::vector<std::uint64_t>& reports,
                                   const std::vector<double>& rtts_s, sim::SimTime now,
                                   const DbaParams& params);

// Event-driven interleaved polling over one shared upstream medium (the
// TDM-PON feeder, or one wavelength of the hybrid). Each ONU's report is
// piggybacked on its burst; the next grant for that ONU is planned the
// moment its report reaches the OLT, which keeps the feeder busy when the
// aggregate cycle exceeds the round-trip time.
class InterleavedPoller {
 public:
  // Fired per delivered packet at its OLT arrival time.
  using Delivered = std::function<void(int onu, std::uint32_t bytes, sim::SimTime enqueued,
                                       sim::SimTime arrival)>;
  // Fired when an ONU begins transmitting a burst (energy bookkeeping).
  using TxActivity = std::function<void(int onu, sim::SimTime start, sim::SimTime end)>;

  InterleavedPoller(sim::Engine& engine, std::string name, const DbaParams& params,
                    double rtt_s, std::vector<int> onu_ids, std::uint64_t buffer_bytes,
                    int wavelength = -1);

  // Begin polling; call once, at time zero of the run.
  void start();

  // Returns false on drop-tail overflow of the ONU's upstream buffer.
  bool enqueue(int onu, std::uint32_t bytes, PacketDone done);

  std::uint64_t backlog_bytes(int onu) const;
  const QueueCounters& onu_counters(int onu) const;

  void set_delivered(Delivered cb) { delivered_ = std::move(cb); }
  void set_tx_activity(TxActivity cb) { tx_activity_ = std::move(cb); }
  // When set, every issued grant is appended (exclusivity checks in tests).
  void set_grant_log(std::vector<Grant>* log) { grant_log_ = log; }

 private:
  struct OnuState {
    int id;
    GrantedQueue queue;
    sim::SimTime last_grant_start;
    bool polled_once = false;
  };

  std::size_t index_of(int onu) const;
  void on_report(std::size_t idx, std::uint64_t report_bytes, sim::SimTime now);

  sim::Engine& engine_;
  std::string name_;
  DbaParams params_;
  sim::SimTime prop_;
  sim::SimTime guard_;
  int wavelength_;
  std::vector<OnuState> onus_;
  sim::SimTime feeder_free_at_;
  Delivered delivered_;
  TxActivity tx_activity_;
  std::vector<Grant>* grant_log_ = nullptr;
};

}  // namespace oatb::arch
