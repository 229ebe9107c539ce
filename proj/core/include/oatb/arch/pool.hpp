#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "oatb/arch/queues.hpp"
#include "oatb/sim/engine.hpp"

namespace oatb::arch {

enum class Powered { active, off };

struct TransceiverState {
  int id = 0;
  int current_wavelength = -1;  // -1: never tuned
  sim::SimTime busy_until;
  Powered powered = Powered::active;
};

struct WavelengthBacklog {
  int wavelength = 0;
  bool in_service = false;  // a transceiver currently owns this wavelength
  std::optional<sim::SimTime> hol_enqueued;  // head-of-line enqueue time, absent when empty
};

struct Assignment {
  int transceiver = 0;
  int wavelength = 0;
  sim::SimTime tune_until;
  sim::SimTime transmit_start;
};

// Assigns idle transceivers to distinct backlogged, unserved wavelengths in
// decreasing head-of-line age (ties: lowest wavelength index). A transceiver
// already tuned to the target is preferred; otherwise the lowest-id idle one
// is taken and transmit_start is delayed by tuning_time.
std::vector<Assignment> assign_transceiver(const std::vector<TransceiverState>& pool,
                                           const std::vector<WavelengthBacklog>& queues,
                                           sim::SimTime now, double tuning_time_s);

// Downstream scheduler of the hybrid architecture: per-wavelength FIFO byte
// queues served by a pool of tunable transmitters at the per-wavelength line
// rate. A transceiver stays on its wavelength while backlog remains (work
// conservation without tuning thrash), then rejoins the idle pool.
class PoolScheduler {
 public:
  // Transceiver power bookkeeping: busy covers transmission and tuning.
  using PowerHook = std::function<void(int transceiver, sim::SimTime t, bool busy, bool powered_on)>;

  PoolScheduler(sim::Engine& engine, std::string name, int wavelengths, int pool_size,
                double rate_bps, double tuning_time_s, std::uint64_t buffer_bytes_per_wavelength,
                double power_off_threshold_s);  // <= 0: transceivers never power off

  // done fires when the packet's last byte leaves the OLT transmitter.
  // Returns false on drop-tail overflow of the wavelength buffer.
  bool enqueue(int wavelength, int onu, std::uint32_t bytes, PacketDone done);

  const QueueCounters& wavelength_counters(int wavelength) const;
  std::uint64_t backlog_bytes(int wavelength) const;
  const std::vector<TransceiverState>& pool() const { return pool_; }
  std::uint64_t retune_count() const { return retunes_; }

  void set_power_hook(PowerHook hook) { power_hook_ = std::move(hook); }

 private:
  struct Packet {
    int onu;
    std::uint32_t bytes;
    sim::SimTime enqueued;
    PacketDone done;
  };
  struct Wavelength {
    std::deque<Packet> queue;
    std::uint64_t queued_bytes = 0;
    bool in_service = false;
    QueueCounters counters;
  };

  void dispatch();
  void serve(int tx, int wavelength);
  void mark_idle(int tx, sim::SimTime t);
  void schedule_off_check(int tx, sim::SimTime idle_since);

  sim::Engine& engine_;
  std::string name_;
  double rate_bps_;
  double tuning_time_s_;
  std::uint64_t buffer_bytes_;
  double off_threshold_s_;
  PowerHook power_hook_;
  std::vector<Wavelength> wavelengths_;
  std::vector<TransceiverState> pool_;
  std::vector<sim::SimTime> idle_since_;
  std::vector<bool> off_check_pending_;
  std::uint64_t retunes_ = 0;
};

}  // namespace oatb::arch
