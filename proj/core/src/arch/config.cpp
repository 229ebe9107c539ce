#include "oatb/arch/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oatb::arch {

const char* to_string(Kind k) {
  switch (k) {
    case Kind::point_to_point: return "point_to_point";
    case Kind::tdm_pon: return "tdm_pon";
    case Kind::hybrid_twdm_pon: return "hybrid_twdm_pon";
  }
  return "?";
}

Kind kind_from_string(const std::string& s) {
  if (s == "point_to_point") return Kind::point_to_point;
  if (s == "tdm_pon") return Kind::tdm_pon;
  if (s == "hybrid_twdm_pon") return Kind::hybrid_twdm_pon;
  throw std::invalid_argument("unknown architecture kind: " + s);
}

void validate(const ArchitectureConfig& c) {
  if (c.onu_count < 1) throw std::invalid_argument("architecture: onu_count must be >= 1");
  if (c.users_per_onu < 1) throw std::invalid_argument("architecture: users_per_onu must be >= 1");
  if (c.feeder_length_km < 0.0)
    throw std::invalid_argument("architecture: feeder_length must be >= 0");
  if (c.guard_time_s < 0.0) throw std::invalid_argument("architecture: guard_time must be >= 0");
  if (c.max_grant_bytes < 1) throw std::invalid_argument("architecture: max_grant must be >= 1 byte");
  if (c.buffer_bytes < 1) throw std::invalid_argument("architecture: buffer must be >= 1 byte");
  switch (c.kind) {
    case Kind::point_to_point:
      if (!(c.line_rate_bps > 0.0))
        throw std::invalid_argument("architecture: point_to_point needs line_rate > 0");
      break;
    case Kind::tdm_pon:
      if (!(c.feeder_rate_bps > 0.0) || !(c.distribution_rate_bps > 0.0))
        throw std::invalid_argument("architecture: tdm_pon needs feeder and distribution rates > 0");
      break;
    case Kind::hybrid_twdm_pon:
      if (!(c.feeder_rate_bps > 0.0) || !(c.distribution_rate_bps > 0.0))
        throw std::invalid_argument("architecture: hybrid needs feeder and distribution rates > 0");
      if (c.wavelength_count < 1)
        throw std::invalid_argument("architecture: hybrid needs wavelength_count >= 1");
      if (c.transceiver_pool < 1)
        throw std::invalid_argument("architecture: hybrid needs transceiver_pool >= 1");
      if (c.transceiver_pool > c.wavelength_count)
        throw std::invalid_argument("architecture: transceiver_pool must not exceed wavelength_count");
      if (c.wavelength_count > c.onu_count)
        throw std::invalid_argument("architecture: wavelength_count must not exceed onu_count");
      if (c.tuning_time_s < 0.0)
        throw std::invalid_argument("architecture: tuning_time must be >= 0");
      break;
  }
}

double subscriber_rate_bound(const ArchitectureConfig& c) {
  if (c.kind == Kind::point_to_point) return c.line_rate_bps;
  return std::min(c.feeder_rate_bps, c.distribution_rate_bps);
}

double propagation_delay_s(double length_km, double velocity_mps) {
  if (length_km < 0.0) throw std::invalid_argument("propagation_delay: negative length");
  if (!(velocity_mps > 0.0)) throw std::invalid_argument("propagation_delay: velocity must be > 0");
  return length_km * 1000.0 / velocity_mps;
}

}  // namespace oatb::arch
