#include <doctest.h>

#include <cmath>
#include <vector>

#include "oatb/energy/energy.hpp"
#include "oatb/sim/time.hpp"

using namespace oatb::energy;
using oatb::sim::SimTime;

namespace {

SimTime secs(double s) { return SimTime::from_seconds(s); }

}  // namespace

TEST_CASE("state watts map each power state onto the profile") {
  ClassPower p{10.0, 4.0, 1.0, 0.5, 0.01};
  CHECK(state_watts(p, PowerState::active) == 10.0);
  CHECK(state_watts(p, PowerState::idle) == 4.0);
  CHECK(state_watts(p, PowerState::sleep) == 1.0);
  CHECK(state_watts(p, PowerState::off) == 0.0);
  CHECK(state_watts(p, PowerState::waking) == 10.0);  // wake transitions burn active power
}

TEST_CASE("profile validation enforces the state ordering") {
  auto p = default_power_profile();
  CHECK_NOTHROW(validate(p));
  p.at(ComponentClass::onu).sleep_w = 99.0;
  CHECK_THROWS(validate(p));
  p = default_power_profile();
  p.at(ComponentClass::core).active_w = -1.0;
  CHECK_THROWS(validate(p));
}

TEST_CASE("32-ONU access shares match the calibration") {
  std::vector<ComponentState> components;
  components.push_back({ComponentClass::core, PowerState::active});
  components.push_back({ComponentClass::l2_switch, PowerState::active});
  components.push_back({ComponentClass::olt_transceiver, PowerState::active});
  for (int i = 0; i < 32; ++i) components.push_back({ComponentClass::onu, PowerState::active});

  const auto draw = power_draw(components, default_power_profile());
  REQUIRE(draw.total_w > 0.0);
  const double core_pct = 100.0 * draw.watts[class_index(ComponentClass::core)] / draw.total_w;
  const double l2_pct = 100.0 * draw.watts[class_index(ComponentClass::l2_switch)] / draw.total_w;
  const double olt_pct =
      100.0 * draw.watts[class_index(ComponentClass::olt_transceiver)] / draw.total_w;
  const double onu_pct = 100.0 * draw.watts[class_index(ComponentClass::onu)] / draw.total_w;
  CHECK(std::fabs(core_pct - 18.8) < 0.05);
  CHECK(std::fabs(l2_pct - 14.1) < 0.05);
  CHECK(std::fabs(olt_pct - 7.0) < 0.05);
  CHECK(std::fabs(onu_pct - 60.1) < 0.05);
  CHECK(core_pct + l2_pct + olt_pct + onu_pct == doctest::Approx(100.0));
}

TEST_CASE("energy report integrates a hand-built timeline") {
  std::vector<TimelineSegment> tl(2);
  tl[0].t0_s = 0.0;
  tl[0].t1_s = 2.0;
  tl[0].watts[class_index(ComponentClass::core)] = 10.0;
  tl[0].watts[class_index(ComponentClass::onu)] = 5.0;
  tl[1].t0_s = 2.0;
  tl[1].t1_s = 5.0;
  tl[1].watts[class_index(ComponentClass::core)] = 10.0;
  tl[1].watts[class_index(ComponentClass::onu)] = 1.0;

  const auto report = energy_report(tl, 1000);
  CHECK(report.energy_j[class_index(ComponentClass::core)] == doctest::Approx(50.0));
  CHECK(report.energy_j[class_index(ComponentClass::onu)] == doctest::Approx(13.0));
  CHECK(report.total_j == doctest::Approx(63.0));
  REQUIRE(report.joules_per_bit.has_value());
  CHECK(*report.joules_per_bit == doctest::Approx(0.063));
  CHECK(report.share_pct[class_index(ComponentClass::core)] == doctest::Approx(100.0 * 50.0 / 63.0));

  const auto starved = energy_report(tl, 0);
  CHECK_FALSE(starved.joules_per_bit.has_value());
}

TEST_CASE("energy report rejects gapped or reversed timelines") {
  std::vector<TimelineSegment> gap(2);
  gap[0].t0_s = 0.0;
  gap[0].t1_s = 1.0;
  gap[1].t0_s = 1.5;
  gap[1].t1_s = 2.0;
  CHECK_THROWS(energy_report(gap, 0));

  std::vector<TimelineSegment> reversed(1);
  reversed[0].t0_s = 2.0;
  reversed[0].t1_s = 1.0;
  CHECK_THROWS(energy_report(reversed, 0));
}

TEST_CASE("accountant integrates state changes into class energies") {
  // One ONU at 5 W active for 1 s, then 0.25 W sleep for 3 s: 5.75 J.
  EnergyAccountant acct(default_power_profile());
  const int onu = acct.add_component("onu/0", ComponentClass::onu, PowerState::active, secs(0.0));
  acct.set_state(onu, secs(1.0), PowerState::sleep);
  acct.add_delivered_bits(2300);
  acct.finalize(secs(4.0));

  const auto report = acct.report();
  CHECK(report.energy_j[class_index(ComponentClass::onu)] == doctest::Approx(5.75));
  CHECK(report.total_j == doctest::Approx(5.75));
  CHECK(*report.joules_per_bit == doctest::Approx(5.75 / 2300.0));

  const auto tl = acct.timeline();
  REQUIRE(tl.size() == 2);
  CHECK(tl.front().t0_s == 0.0);
  CHECK(tl.back().t1_s == 4.0);
  CHECK(tl[0].watts[class_index(ComponentClass::onu)] == doctest::Approx(5.0));
  CHECK(tl[1].watts[class_index(ComponentClass::onu)] == doctest::Approx(0.25));
}

TEST_CASE("accountant sums concurrent components of one class") {
  auto profile = default_power_profile();
  EnergyAccountant acct(profile);
  acct.add_component("onu/0", ComponentClass::onu, PowerState::active, secs(0.0));
  acct.add_component("onu/1", ComponentClass::onu, PowerState::idle, secs(0.0));
  acct.finalize(secs(2.0));
  const auto report = acct.report();
  const double idle_w = profile.at(ComponentClass::onu).idle_w;
  CHECK(report.energy_j[class_index(ComponentClass::onu)] ==
        doctest::Approx(2.0 * (5.0 + idle_w)));
}

TEST_CASE("late registration starts charging at the registration instant") {
  EnergyAccountant acct(default_power_profile());
  acct.add_component("core", ComponentClass::core, PowerState::active, secs(0.0));
  acct.add_component("onu/0", ComponentClass::onu, PowerState::active, secs(2.0));
  acct.finalize(secs(4.0));
  const auto report = acct.report();
  CHECK(report.energy_j[class_index(ComponentClass::core)] == doctest::Approx(4.0 * 50.0));
  CHECK(report.energy_j[class_index(ComponentClass::onu)] == doctest::Approx(2.0 * 5.0));
}

TEST_CASE("accountant enforces its bookkeeping contract") {
  EnergyAccountant acct(default_power_profile());
  const int c = acct.add_component("core", ComponentClass::core, PowerState::active, secs(1.0));
  CHECK_THROWS(acct.add_component("x", ComponentClass::onu, PowerState::idle, secs(0.5)));
  acct.set_state(c, secs(2.0), PowerState::idle);
  CHECK_THROWS(acct.set_state(c, secs(1.5), PowerState::active));  // time went backwards
  CHECK_THROWS(acct.set_state(99, secs(3.0), PowerState::active));
  CHECK_THROWS(acct.finalize(secs(1.0)));  // precedes the last change
  acct.finalize(secs(3.0));
  CHECK(acct.finalized());
  CHECK_THROWS(acct.set_state(c, secs(3.5), PowerState::active));
  CHECK_THROWS(acct.finalize(secs(4.0)));
}

TEST_CASE("timeline requires finalize and report matches its integral") {
  EnergyAccountant acct(default_power_profile());
  const int onu = acct.add_component("onu/0", ComponentClass::onu, PowerState::idle, secs(0.0));
  CHECK_THROWS(acct.timeline());
  acct.set_state(onu, secs(0.5), PowerState::active);
  acct.set_state(onu, secs(1.5), PowerState::sleep);
  acct.add_delivered_bits(100);
  acct.finalize(secs(2.0));

  const auto tl = acct.timeline();
  const auto direct = acct.report();
  const auto recomputed = energy_report(tl, acct.delivered_bits());
  CHECK(recomputed.total_j == doctest::Approx(direct.total_j));
  for (std::size_t k = 0; k < kClassCount; ++k)
    CHECK(recomputed.energy_j[k] == doctest::Approx(direct.energy_j[k]));
  for (std::size_t i = 1; i < tl.size(); ++i) CHECK(tl[i].t0_s == tl[i - 1].t1_s);
}
