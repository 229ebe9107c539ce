#include "oatb/traffic/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace oatb::traffic {

const char* to_string(UserClass c) {
  return c == UserClass::business ? "business" : "residential";
}

void validate(const UserProfile& p) {
  double sum = 0.0;
  for (double v : p.day_profile) {
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument("UserProfile: day profile multipliers must be finite and >= 0");
    sum += v;
  }
  if (std::fabs(sum / 24.0 - 1.0) > 1e-9)
    throw std::invalid_argument("UserProfile: day profile must average to 1.0");
  if (p.session_rate_per_hour < 0.0 || !std::isfinite(p.session_rate_per_hour))
    throw std::invalid_argument("UserProfile: session rate must be finite and >= 0");
  if (p.web_mix < 0.0 || p.web_mix > 1.0)
    throw std::invalid_argument("UserProfile: mix must be in [0,1]");
}

const std::array<double, 24>& business_day_profile() {
  static const std::array<double, 24> p = {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.4, 0.8,
                                           1.4, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0,
                                           2.0, 1.6, 1.0, 0.6, 0.4, 0.3, 0.2, 0.1};
  return p;
}

const std::array<double, 24>& residential_day_profile() {
  static const std::array<double, 24> p = {0.5, 0.3, 0.2, 0.1, 0.1, 0.2, 0.4, 0.7,
                                           0.7, 0.6, 0.6, 0.7, 0.8, 0.7, 0.6, 0.7,
                                           0.9, 1.3, 2.0, 2.6, 2.8, 2.8, 2.4, 1.3};
  return p;
}

const std::array<double, 24>& flat_day_profile() {
  static const std::array<double, 24> p = [] {
    std::array<double, 24> a{};
    a.fill(1.0);
    return a;
  }();
  return p;
}

std::array<double, 24> load_day_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("day profile: cannot open " + path);
  std::array<double, 24> out{};
  std::size_t i = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    std::string tok = line.substr(begin, end - begin + 1);
    if (i >= 24) throw std::runtime_error("day profile: more than 24 values in " + path);
    try {
      std::size_t used = 0;
      out[i] = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("day profile: bad value at " + path + ":" + std::to_string(lineno));
    }
    ++i;
  }
  if (i != 24) throw std::runtime_error("day profile: expected 24 values, got " + std::to_string(i));
  return out;
}

std::optional<double> next_session_time(const UserProfile& p, double now_s, sim::RngStream& stream) {
  validate(p);
  double peak = *std::max_element(p.day_profile.begin(), p.day_profile.end());
  if (p.session_rate_per_hour <= 0.0 || peak <= 0.0) return std::nullopt;
  const double lambda_max = p.session_rate_per_hour * peak / 3600.0;  // per second
  double t = now_s;
  for (;;) {
    double dt;
    do {
      dt = stream.exponential(1.0 / lambda_max);
    } while (dt <= 0.0);
    t += dt;
    int hour = static_cast<int>(std::fmod(std::floor(t / 3600.0), 24.0));
    if (hour < 0) hour += 24;
    double accept = p.day_profile[static_cast<std::size_t>(hour)] / peak;
    if (stream.uniform01() < accept) return t;
  }
}

}  // namespace oatb::traffic
