#include "oatb/sim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace oatb::sim {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view path) {
  std::uint64_t s = mix(root_seed);
  for (unsigned char c : path) s = mix(s ^ static_cast<std::uint64_t>(c));
  // Absorb the length so "a" and "a\0"-like prefixes cannot collide.
  return mix(s ^ static_cast<std::uint64_t>(path.size()));
}

RngStream::RngStream(std::uint64_t root_seed, std::string_view path)
    : root_seed_(root_seed), path_(path), gen_(derive_seed(root_seed, path)) {}

RngStream RngStream::child(std::string_view label) const {
  std::string p = path_;
  if (!p.empty()) p += '/';
  p += label;
  return RngStream(root_seed_, p);
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double RngStream::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be positive");
  // 1 - u is in (0,1], so the log is finite.
  return -mean * std::log(1.0 - uniform01());
}

double RngStream::normal(double mu, double sigma) {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return mu + sigma * z;
  }
  const double u1 = 1.0 - uniform01();  // (0,1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double z0 = r * std::cos(2.0 * M_PI * u2);
  spare_normal_ = r * std::sin(2.0 * M_PI * u2);
  return mu + sigma * z0;
}

double RngStream::lognormal_mean(double mean, double sigma_log) {
  if (!(mean > 0.0)) throw std::invalid_argument("lognormal_mean: mean must be positive");
  if (sigma_log < 0.0) throw std::invalid_argument("lognormal_mean: sigma_log must be >= 0");
  const double mu_log = std::log(mean) - 0.5 * sigma_log * sigma_log;
  if (sigma_log == 0.0) return std::exp(mu_log);
  return std::exp(normal(mu_log, sigma_log));
}

std::uint64_t RngStream::geometric_count(double mean) {
  if (mean < 0.0) throw std::invalid_argument("geometric_count: mean must be >= 0");
  if (mean == 0.0) return 0;
  // Geometric on {0,1,...} with P(X=k) = p(1-p)^k has mean (1-p)/p.
  const double p = 1.0 / (1.0 + mean);
  const double u = 1.0 - uniform01();  // (0,1]
  const double k = std::floor(std::log(u) / std::log1p(-p));
  return k < 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  // Rejection-free modulo would bias; use Lemire-style rejection on the top.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

bool RngStream::chance(double p) { return uniform01() < p; }

}  // namespace oatb::sim
