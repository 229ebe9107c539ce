#pragma once

#include <array>
#include <optional>
#include <string>

#include "oatb/sim/rng.hpp"

namespace oatb::traffic {

enum class UserClass { business, residential };

const char* to_string(UserClass c);

// Built-in 24-bin shapes. business peaks 09:00-17:00, residential 19:00-23:00,
// flat is all ones. Each averages exactly 1.0.
const std::array<double, 24>& business_day_profile();
const std::array<double, 24>& residential_day_profile();
const std::array<double, 24>& flat_day_profile();

// Behavioural layer: session arrivals follow a non-homogeneous Poisson
// process with rate session_rate_per_hour * day_profile[hour of day].
struct UserProfile {
  UserClass cls = UserClass::residential;
  std::array<double, 24> day_profile = flat_day_profile();  // multipliers, mean 1.0
  double session_rate_per_hour = 0.0;
  double web_mix = 1.0;  // probability that a session is web (else video)
};

void validate(const UserProfile& p);

// Loads a 24-line multiplier file (one non-negative value per line; blank
// lines and # comments ignored). Throws on malformed content.
std::array<double, 24> load_day_profile(const std::string& path);

// Next arrival strictly after now_s, via thinning against the profile's peak
// rate. Returns nullopt when the process is empty (rate 0 or all bins 0).
std::optional<double> next_session_time(const UserProfile& p, double now_s, sim::RngStream& stream);

}  // namespace oatb::traffic
