#include "oatb/energy/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oatb::energy {

const char* to_string(ComponentClass c) {
  switch (c) {
    case ComponentClass::core: return "core";
    case ComponentClass::l2_switch: return "l2_switch";
    case ComponentClass::olt_transceiver: return "olt_transceiver";
    case ComponentClass::onu: return "onu";
  }
  return "?";
}

std::size_t class_index(ComponentClass c) { return static_cast<std::size_t>(c); }

const char* to_string(PowerState s) {
  switch (s) {
    case PowerState::active: return "active";
    case PowerState::idle: return "idle";
    case PowerState::sleep: return "sleep";
    case PowerState::off: return "off";
    case PowerState::waking: return "waking";
  }
  return "?";
}

PowerProfile default_power_profile() {
  PowerProfile p;
  p.at(ComponentClass::core) = {50.0, 50.0, 50.0, 0.0, 0.0};
  p.at(ComponentClass::l2_switch) = {37.5, 37.5, 37.5, 0.0, 0.0};
  p.at(ComponentClass::olt_transceiver) = {18.75, 18.75, 0.0, 0.05, 0.0};
  p.at(ComponentClass::onu) = {5.0, 5.0, 0.25, 0.05, 0.002};
  return p;
}

void validate(const PowerProfile& p) {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    const auto& c = p.by_class[i];
    if (c.sleep_w < 0.0 || c.idle_w < 0.0 || c.active_w < 0.0)
      throw std::invalid_argument("PowerProfile: watts must be >= 0");
    if (!(c.sleep_w <= c.idle_w && c.idle_w <= c.active_w))
      throw std::invalid_argument("PowerProfile: require sleep <= idle <= active watts");
    if (c.sleep_threshold_s < 0.0 || c.wake_s < 0.0)
      throw std::invalid_argument("PowerProfile: thresholds must be >= 0");
  }
}

double state_watts(const ClassPower& p, PowerState s) {
  switch (s) {
    case PowerState::active: return p.active_w;
    case PowerState::idle: return p.idle_w;
    case PowerState::sleep: return p.sleep_w;
    case PowerState::off: return 0.0;
    case PowerState::waking: return p.active_w;
  }
  return 0.0;
}

PowerByClass power_draw(const std::vector<ComponentState>& components, const PowerProfile& profile) {
  validate(profile);
  PowerByClass out;
  for (const auto& c : components) {
    double w = state_watts(profile.at(c.cls), c.state);
    out.watts[class_index(c.cls)] += w;
    out.total_w += w;
  }
  return out;
}

EnergyReport energy_report(const std::vector<TimelineSegment>& timeline, std::uint64_t delivered_bits) {
  EnergyReport out;
  out.delivered_bits = delivered_bits;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto& seg = timeline[i];
    if (seg.t1_s < seg.t0_s) throw std::invalid_argument("energy_report: segment runs backwards");
    if (i > 0 && seg.t0_s != timeline[i - 1].t1_s)
      throw std::invalid_argument("energy_report: timeline has a gap or overlap");
    double dt = seg.t1_s - seg.t0_s;
    for (std::size_t k = 0; k < kClassCount; ++k) {
      out.energy_j[k] += seg.watts[k] * dt;
      out.total_j += seg.watts[k] * dt;
    }
  }
  if (delivered_bits > 0) out.joules_per_bit = out.total_j / static_cast<double>(delivered_bits);
  if (out.total_j > 0.0)
    for (std::size_t k = 0; k < kClassCount; ++k)
      out.share_pct[k] = 100.0 * out.energy_j[k] / out.total_j;
  return out;
}

EnergyAccountant::EnergyAccountant(PowerProfile profile) : profile_(profile) { validate(profile_); }

int EnergyAccountant::add_component(std::string name, ComponentClass cls, PowerState initial,
                                    sim::SimTime t0) {
  if (finalized_) throw std::logic_error("EnergyAccountant: already finalized");
  if (!has_start_) {
    start_ = t0;
    has_start_ = true;
  } else if (t0 < start_) {
    throw std::invalid_argument("EnergyAccountant: component added before accounting start");
  }
  components_.push_back({std::move(name), cls, initial, initial, t0});
  return static_cast<int>(components_.size()) - 1;
}

void EnergyAccountant::set_state(int component, sim::SimTime t, PowerState s) {
  if (finalized_) throw std::logic_error("EnergyAccountant: already finalized");
  if (component < 0 || component >= static_cast<int>(components_.size()))
    throw std::invalid_argument("EnergyAccountant: unknown component");
  if (!changes_.empty() && t < changes_.back().t)
    throw std::invalid_argument("EnergyAccountant: state changes must be time ordered");
  if (t < components_[static_cast<std::size_t>(component)].since)
    throw std::invalid_argument("EnergyAccountant: change before component registration");
  changes_.push_back({t, component, s});
  components_[static_cast<std::size_t>(component)].state = s;
}

PowerState EnergyAccountant::state(int component) const {
  return components_.at(static_cast<std::size_t>(component)).state;
}

void EnergyAccountant::finalize(sim::SimTime t_end) {
  if (finalized_) throw std::logic_error("EnergyAccountant: already finalized");
  if (!has_start_) start_ = t_end;
  if (t_end < start_ || (!changes_.empty() && t_end < changes_.back().t))
    throw std::invalid_argument("EnergyAccountant: end precedes recorded activity");
  end_ = t_end;
  finalized_ = true;
}

std::vector<TimelineSegment> EnergyAccountant::timeline() const {
  if (!finalized_) throw std::logic_error("EnergyAccountant: timeline requires finalize");
  // Replay registrations and changes in time order.
  struct Edit {
    sim::SimTime t;
    int component;
    PowerState state;
    bool registration;
  };
  std::vector<Edit> edits;
  edits.reserve(components_.size() + changes_.size());
  for (std::size_t i = 0; i < components_.size(); ++i)
    edits.push_back({components_[i].since, static_cast<int>(i), PowerState::active, true});
  for (const auto& ch : changes_) edits.push_back({ch.t, ch.component, ch.state, false});
  std::stable_sort(edits.begin(), edits.end(),
                   [](const Edit& a, const Edit& b) { return a.t < b.t; });

  std::vector<PowerState> cur(components_.size(), PowerState::off);
  std::array<double, kClassCount> watts{};
  std::vector<TimelineSegment> out;
  sim::SimTime cursor = start_;

  auto flush_until = [&](sim::SimTime t) {
    if (t.picos() > cursor.picos()) {
      TimelineSegment seg;
      seg.t0_s = cursor.seconds();
      seg.t1_s = t.seconds();
      seg.watts = watts;
      if (!out.empty() && out.back().watts == seg.watts)
        out.back().t1_s = seg.t1_s;  // merge equal-power neighbours
      else
        out.push_back(seg);
      cursor = t;
    }
  };

  for (const auto& e : edits) {
    flush_until(e.t);
    auto idx = static_cast<std::size_t>(e.component);
    const auto& cp = profile_.at(components_[idx].cls);
    if (e.registration) {
      cur[idx] = components_[idx].initial;
      watts[class_index(components_[idx].cls)] += state_watts(cp, cur[idx]);
    } else {
      watts[class_index(components_[idx].cls)] -= state_watts(cp, cur[idx]);
      cur[idx] = e.state;
      watts[class_index(components_[idx].cls)] += state_watts(cp, cur[idx]);
    }
  }
  flush_until(end_);
  if (out.empty()) {
    TimelineSegment seg;
    seg.t0_s = start_.seconds();
    seg.t1_s = end_.seconds();
    out.push_back(seg);
  }
  return out;
}

EnergyReport EnergyAccountant::report() const { return energy_report(timeline(), delivered_bits_); }

}  // namespace oatb::energy
