#pragma once

#include <cstdint>
#include <string>

namespace oatb::arch {

enum class Kind { point_to_point, tdm_pon, hybrid_twdm_pon };

const char* to_string(Kind k);
Kind kind_from_string(const std::string& s);

// Declarative description of one access architecture.
//
// point_to_point: each ONU gets a dedicated full-duplex line at line_rate_bps
//   over feeder_length_km; feeder_rate/distribution_rate are unused.
// tdm_pon: one shared feeder at feeder_rate_bps, per-ONU drops at
//   distribution_rate_bps, upstream shared by grant scheduling.
// hybrid_twdm_pon: wavelength_count wavelengths at feeder_rate_bps each,
//   ONU i fixed to wavelength i mod W, downstream served by a pool of
//   transceiver_pool tunable transmitters, upstream per-wavelength grant
//   scheduling on fixed receivers.
struct ArchitectureConfig {
  Kind kind = Kind::point_to_point;
  int onu_count = 1;
  int users_per_onu = 1;
  double feeder_rate_bps = 1e9;
  double distribution_rate_bps = 1e9;
  double line_rate_bps = 100e6;  // point_to_point only
  double feeder_length_km = 20.0;
  int wavelength_count = 1;   // hybrid only
  int transceiver_pool = 1;   // hybrid only
  double tuning_time_s = 1e-3;  // hybrid only
  double guard_time_s = 1e-6;
  std::uint32_t max_grant_bytes = 15500;
  std::uint64_t buffer_bytes = 1 << 20;
};

void validate(const ArchitectureConfig& c);

// Highest rate the architecture can hand one subscriber; ECR grids are
// clipped here. point_to_point: the line rate; others: min(feeder,
// distribution) rate.
double subscriber_rate_bound(const ArchitectureConfig& c);

// Signal propagation time over fibre at v = 2.0e8 m/s.
double propagation_delay_s(double length_km, double velocity_mps = 2.0e8);

}  // namespace oatb::arch
