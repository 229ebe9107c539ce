#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oatb/sim/time.hpp"

namespace oatb::energy {

enum class ComponentClass { core, l2_switch, olt_transceiver, onu };
constexpr std::size_t kClassCount = 4;

const char* to_string(ComponentClass c);
std::size_t class_index(ComponentClass c);

enum class PowerState { active, idle, sleep, off, waking };

const char* to_string(PowerState s);

struct ClassPower {
  double active_w = 0.0;
  double idle_w = 0.0;
  double sleep_w = 0.0;
  double sleep_threshold_s = 0.0;  // idle time before entering sleep/off
  double wake_s = 0.0;             // transition time, charged at active watts
};

struct PowerProfile {
  std::array<ClassPower, kClassCount> by_class{};

  const ClassPower& at(ComponentClass c) const { return by_class[class_index(c)]; }
  ClassPower& at(ComponentClass c) { return by_class[class_index(c)]; }
};

// Calibration defaults: with one core node, one layer-2 switch, one OLT
// transceiver and 32 ONUs all active, the class shares of total power are
// 18.8 / 14.1 / 7.0 / 60.1 percent.
PowerProfile default_power_profile();

void validate(const PowerProfile& p);

// Instantaneous draw of one component in one state.
double state_watts(const ClassPower& p, PowerState s);

struct ComponentState {
  ComponentClass cls = ComponentClass::onu;
  PowerState state = PowerState::active;
};

struct PowerByClass {
  std::array<double, kClassCount> watts{};
  double total_w = 0.0;
};

PowerByClass power_draw(const std::vector<ComponentState>& components, const PowerProfile& profile);

// One piecewise-constant segment of the aggregate power timeline.
struct TimelineSegment {
  double t0_s = 0.0;
  double t1_s = 0.0;
  std::array<double, kClassCount> watts{};
};

struct EnergyReport {
  std::array<double, kClassCount> energy_j{};
  double total_j = 0.0;
  std::uint64_t delivered_bits = 0;
  std::optional<double> joules_per_bit;  // absent when delivered_bits == 0
  std::array<double, kClassCount> share_pct{};
};

// Integrates a contiguous, non-overlapping timeline. Throws when segments
// overlap, leave gaps, or run backwards.
EnergyReport energy_report(const std::vector<TimelineSegment>& timeline, std::uint64_t delivered_bits);

// Per-run state bookkeeping. Components register once; state changes are
// recorded with non-decreasing timestamps; finalize() closes the last
// segment and freezes the report inputs.
class EnergyAccountant {
 public:
  explicit EnergyAccountant(PowerProfile profile);

  int add_component(std::string name, ComponentClass cls, PowerState initial, sim::SimTime t0);
  void set_state(int component, sim::SimTime t, PowerState s);
  PowerState state(int component) const;
  void add_delivered_bits(std::uint64_t bits) { delivered_bits_ += bits; }
  std::uint64_t delivered_bits() const { return delivered_bits_; }

  void finalize(sim::SimTime t_end);
  bool finalized() const { return finalized_; }

  // Merged piecewise-constant aggregate timeline from t0 to t_end.
  std::vector<TimelineSegment> timeline() const;
  EnergyReport report() const;
  const PowerProfile& profile() const { return profile_; }

 private:
  struct Component {
    std::string name;
    ComponentClass cls;
    PowerState state;    // latest
    PowerState initial;  // state at registration
    sim::SimTime since;
  };
  struct Change {
    sim::SimTime t;
    int component;
    PowerState state;
  };

  PowerProfile profile_;
  std::vector<Component> components_;
  std::vector<Change> changes_;
  std::uint64_t delivered_bits_ = 0;
  sim::SimTime start_ = sim::SimTime::zero();
  sim::SimTime end_ = sim::SimTime::zero();
  bool has_start_ = false;
  bool finalized_ = false;
};

}  // namespace oatb::energy
