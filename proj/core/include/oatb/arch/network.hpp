#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "oatb/arch/config.hpp"
#include "oatb/arch/dba.hpp"
#include "oatb/arch/pool.hpp"
#include "oatb/arch/queues.hpp"
#include "oatb/energy/energy.hpp"
#include "oatb/sim/engine.hpp"

namespace oatb::arch {

struct OnuMacStats {
  QueueCounters down;  // OLT MAC stage; sojourn ends when the last byte leaves the OLT
  QueueCounters up;    // ONU MAC stage; sojourn ends at OLT arrival (grant wait included)
  std::uint64_t dist_dropped_packets = 0;  // drop-fibre overflow behind the MAC stage
  std::uint64_t dist_dropped_bytes = 0;
};

struct DirectionTotals {
  std::uint64_t injected_packets = 0;
  std::uint64_t injected_bytes = 0;
  std::uint64_t delivered_packets = 0;
  std::uint64_t delivered_bytes = 0;
  std::uint64_t dropped_packets = 0;
  std::uint64_t dropped_bytes = 0;
};

struct NetworkOptions {
  double core_one_way_s = 0.005;  // aggregation + core latency, each direction
  double dba_idle_poll_interval_s = 1e-3;
  bool onu_sleep = true;       // doze idle ONUs; the receive path pays the wake latency
  bool pool_power_off = true;  // hybrid: idle pooled transmitters switch off
};

// One access network wired to the event engine: MAC queues, grant scheduling,
// fibre propagation and the aggregation hop toward the servers. Downstream
// packets enter at the server side, upstream packets at the subscriber side;
// the callback fires when the last byte reaches the far end. Drops are
// silent (the callback never fires); recovery belongs to the transport.
//
// With an accountant attached, power states track behaviour: the core node
// and switch stay active, OLT transmitters follow their busy state (and pool
// power-off in the hybrid), and ONUs doze after the profile's sleep
// threshold. A dozing ONU delays downstream delivery by the wake time but
// wakes instantly for its own upstream sends.
class Network {
 public:
  Network(sim::Engine& engine, const ArchitectureConfig& config, const NetworkOptions& options,
          energy::EnergyAccountant* accountant);

  void send_downstream(int onu, std::uint32_t bytes, PacketDone done);
  void send_upstream(int onu, std::uint32_t bytes, PacketDone done);

  const ArchitectureConfig& config() const { return config_; }
  const NetworkOptions& options() const { return options_; }
  double access_rtt_s() const { return 2.0 * prop_.seconds(); }

  const OnuMacStats& mac_stats(int onu) const;
  const DirectionTotals& downstream_totals() const { return down_totals_; }
  const DirectionTotals& upstream_totals() const { return up_totals_; }
  std::uint64_t upstream_backlog_bytes(int onu) const;
  std::uint64_t pool_retunes() const { return pool_ ? pool_->retune_count() : 0; }
  const PoolScheduler* pool() const { return pool_.get(); }

  // Appends every upstream grant issued by any poller (exclusivity tests).
  void set_grant_log(std::vector<Grant>* log);

 private:
  enum class Doze { awake, asleep, waking };

  struct OnuPath {
    std::unique_ptr<ServiceQueue> down_line;     // point_to_point
    std::unique_ptr<ServiceQueue> up_line;       // point_to_point
    std::unique_ptr<ServiceQueue> distribution;  // tdm / hybrid drop fibre
    OnuMacStats mac;
    Doze doze = Doze::awake;
    sim::SimTime last_activity;
    sim::SimTime wake_end;
    std::uint64_t wake_epoch = 0;
    bool doze_check_pending = false;
    bool tx_busy = false;
    int energy_id = -1;
  };

  OnuPath& path(int onu);
  const OnuPath& path(int onu) const;
  InterleavedPoller& poller_for(int onu);

  void enter_access_down(int onu, std::uint32_t bytes, PacketDone done);
  void past_prop_down(int onu, std::uint32_t bytes, PacketDone done);
  void deliver_down(int onu, std::uint32_t bytes, PacketDone done);
  void complete_down(int onu, std::uint32_t bytes, PacketDone done);
  void olt_arrival_up(int onu, std::uint32_t bytes, PacketDone done);

  void touch(int onu, sim::SimTime t);
  void arm_doze(int onu);
  void doze_check(int onu);
  void wake_for_upstream(int onu, sim::SimTime now);
  void on_burst(int onu, sim::SimTime start, sim::SimTime end);
  void set_onu_energy(int onu, sim::SimTime t, energy::PowerState s);
  void set_olt_tx_energy(std::size_t idx, sim::SimTime t, energy::PowerState s);

  sim::Engine& engine_;
  ArchitectureConfig config_;
  NetworkOptions options_;
  energy::EnergyAccountant* accountant_;
  sim::SimTime prop_;
  sim::SimTime core_;
  sim::SimTime wake_;
  sim::SimTime doze_threshold_;
  bool sleep_enabled_ = false;
  std::vector<OnuPath> onus_;
  std::unique_ptr<ServiceQueue> feeder_;                     // tdm downstream
  std::unique_ptr<PoolScheduler> pool_;                      // hybrid downstream
  std::vector<std::unique_ptr<InterleavedPoller>> pollers_;  // tdm: 1, hybrid: one per wavelength
  DirectionTotals down_totals_;
  DirectionTotals up_totals_;
  std::vector<int> olt_tx_energy_;
};

}  // namespace oatb::arch
