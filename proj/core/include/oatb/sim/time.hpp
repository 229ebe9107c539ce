#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace oatb::sim {

/// Simulation time as integer picoseconds.
///
/// The integer representation makes event ordering exact: two events either
/// have the same timestamp or a strict order, never a floating-point tie.
/// Signed 64-bit picoseconds cover ~106 days of simulated time, far beyond
/// any scenario this test bed runs.
class SimTime {
 public:
  constexpr SimTime() = default;

  static constexpr SimTime zero() { return SimTime{0}; }

  static constexpr SimTime from_picos(std::int64_t ps) {
    if (ps < 0) throw std::invalid_argument("SimTime: negative picoseconds");
    return SimTime{ps};
  }

  static SimTime from_seconds(double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("SimTime: negative or NaN seconds");
    const double ps = s * 1e12;
    if (ps > static_cast<double>(std::numeric_limits<std::int64_t>::max()))
      throw std::out_of_range("SimTime: seconds value overflows picosecond clock");
    return SimTime{static_cast<std::int64_t>(std::llround(ps))};
  }

  constexpr std::int64_t picos() const { return ps_; }
  double seconds() const { return static_cast<double>(ps_) * 1e-12; }

  friend constexpr auto operator<=>(SimTime, SimTime) = default;

  constexpr SimTime operator+(SimTime rhs) const { return SimTime{ps_ + rhs.ps_}; }
  constexpr SimTime operator-(SimTime rhs) const {
    return ps_ >= rhs.ps_ ? SimTime{ps_ - rhs.ps_} : throw std::invalid_argument("SimTime: negative difference");
  }
  SimTime& operator+=(SimTime rhs) {
    ps_ += rhs.ps_;
    return *this;
  }

 private:
  constexpr explicit SimTime(std::int64_t ps) : ps_(ps) {}
  std::int64_t ps_ = 0;
};

/// Duration helper: transmission time of `bytes` at `rate_bps`, rounded up to
/// the next picosecond so a burst never finishes "early" relative to the
/// real-valued wire time.
inline SimTime transmission_time(std::uint64_t bytes, double rate_bps) {
  if (!(rate_bps > 0.0)) throw std::invalid_argument("transmission_time: rate must be positive");
  const double ps = static_cast<double>(bytes) * 8.0 / rate_bps * 1e12;
  return SimTime::from_picos(static_cast<std::int64_t>(std::ceil(ps)));
}

}  // namespace oatb::sim
