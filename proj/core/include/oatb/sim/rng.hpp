#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace oatb::sim {

/// Hierarchical named random-number stream.
///
/// A stream is identified by (root_seed, path) where the path is a
/// slash-separated label sequence such as "rep/3/onu/7/web". Identical
/// (root_seed, path) pairs yield identical variate sequences on every
/// platform; distinct paths yield statistically independent streams.
///
/// The construction is frozen: the path bytes are absorbed into a
/// splitmix64 hash chain and the result seeds a std::mt19937_64 (whose
/// seeding and output are fully specified by the C++ standard). All
/// variate mappings below are implemented here rather than with
/// std::*_distribution, which is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view path);

  /// Child stream with "<path>/<label>" appended; equal to deriving the
  /// full path from the root directly.
  RngStream child(std::string_view label) const;

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& path() const { return path_; }

  std::uint64_t next_u64();

  /// Uniform on [0,1) with 53-bit resolution.
  double uniform01();
  double uniform(double lo, double hi);
  /// Exponential with the given mean (mean > 0).
  double exponential(double mean);
  /// Standard Box-Muller normal; the spare variate is cached.
  double normal(double mu, double sigma);
  /// Lognormal parameterized by the distribution mean and sigma of log.
  double lognormal_mean(double mean, double sigma_log);
  /// Geometric count on {0,1,2,...} with the given mean (mean >= 0).
  std::uint64_t geometric_count(double mean);
  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n);
  /// Bernoulli with probability p.
  bool chance(double p);

 private:
  std::uint64_t root_seed_;
  std::string path_;
  std::mt19937_64 gen_;
  std::optional<double> spare_normal_;
};

/// Seed derivation used by RngStream; exposed for tests.
std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view path);

}  // namespace oatb::sim
