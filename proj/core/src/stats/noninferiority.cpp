#include "oatb/stats/noninferiority.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oatb/stats/tdist.hpp"

namespace oatb::stats {

const char* to_string(Direction d) {
  return d == Direction::smaller_better ? "smaller_better" : "larger_better";
}
const char* to_string(TestKind t) { return t == TestKind::welch ? "welch" : "nonparametric"; }
const char* to_string(Decision d) { return d == Decision::non_inferior ? "non_inferior" : "not_demonstrated"; }

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 0.5)) throw std::invalid_argument("alpha must be in (0, 0.5)");
}

void check_margin(const MetricSpec& spec) {
  if (!(spec.margin > 0.0)) throw std::invalid_argument("metric '" + spec.name + "': margin must be positive");
}

bool bound_inside_margin(Direction dir, double bound, double margin) {
  return dir == Direction::smaller_better ? bound < margin : bound > -margin;
}

}  // namespace

TestResult welch_noninferiority(std::span<const double> candidate, std::span<const double> reference,
                                const MetricSpec& spec, double alpha) {
  check_alpha(alpha);
  check_margin(spec);
  if (candidate.size() < 2 || reference.size() < 2)
    throw std::invalid_argument("welch_noninferiority: need at least 2 samples per arm (got " +
                                std::to_string(candidate.size()) + " and " + std::to_string(reference.size()) + ")");

  TestResult r;
  r.metric = spec.name;
  r.direction = spec.direction;
  r.test = TestKind::welch;
  r.alpha = alpha;
  r.margin = spec.margin;
  r.n_candidate = candidate.size();
  r.n_reference = reference.size();
  r.mean_candidate = mean(candidate);
  r.mean_reference = mean(reference);
  const double var_c = sample_variance(candidate);
  const double var_r = sample_variance(reference);
  r.sd_candidate = std::sqrt(var_c);
  r.sd_reference = std::sqrt(var_r);

  const double diff = r.mean_candidate - r.mean_reference;
  r.estimate = diff;

  if (var_c == 0.0 && var_r == 0.0) {
    // Deterministic samples: decide by direct comparison so that smoke
    // scenarios with zero variability still produce a verdict.
    r.degenerate = true;
    r.adverse_bound = diff;
    r.decision = bound_inside_margin(spec.direction, diff, spec.margin) ? Decision::non_inferior
                                                                        : Decision::not_demonstrated;
    return r;
  }

  const double nc = static_cast<double>(candidate.size());
  const double nr = static_cast<double>(reference.size());
  const double vc = var_c / nc;
  const double vr = var_r / nr;
  const double se = std::sqrt(vc + vr);
  // Welch-Satterthwaite degrees of freedom.
  const double nu = (vc + vr) * (vc + vr) / (vc * vc / (nc - 1.0) + vr * vr / (nr - 1.0));
  const double tq = student_t_quantile(1.0 - alpha, nu);

  if (spec.direction == Direction::smaller_better) {
    r.adverse_bound = diff + tq * se;
    r.p_value = student_t_cdf((diff - spec.margin) / se, nu);
  } else {
    r.adverse_bound = diff - tq * se;
    r.p_value = 1.0 - student_t_cdf((diff + spec.margin) / se, nu);
  }
  r.decision = bound_inside_margin(spec.direction, r.adverse_bound, spec.margin) ? Decision::non_inferior
                                                                                 : Decision::not_demonstrated;
  return r;
}

double hodges_lehmann(std::span<const double> candidate, std::span<const double> reference) {
  if (candidate.empty() || reference.empty()) throw std::invalid_argument("hodges_lehmann: empty input");
  std::vector<double> diffs;
  diffs.reserve(candidate.size() * reference.size());
  for (double c : candidate)
    for (double ref : reference) diffs.push_back(c - ref);
  const std::size_t n = diffs.size();
  auto mid = diffs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(diffs.begin(), mid, diffs.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(diffs.begin(), mid);
  return 0.5 * (lower + upper);
}

std::vector<double> mann_whitney_null_cdf(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("mann_whitney_null_cdf: empty sample sizes");
  const std::size_t umax = n * m;
  // c[i][j][u]: number of rank configurations with U = u, equivalently the
  // number of integer partitions of u into at most i parts each of size <= j.
  // Recurrence: c(i, j, u) = c(i, j-1, u) + c(i-1, j, u-j).
  std::vector<std::vector<std::vector<double>>> c(
      n + 1, std::vector<std::vector<double>>(m + 1, std::vector<double>(umax + 1, 0.0)));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= m; ++j) c[i][j][0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      for (std::size_t u = 1; u <= i * j && u <= umax; ++u) {
        double v = c[i][j - 1][u];
        if (u >= j) v += c[i - 1][j][u - j];
        c[i][j][u] = v;
      }
    }
  }
  // Counts stay integral and below 2^53 for the exact-range sample sizes,
  // so double arithmetic is exact here.
  double total = 1.0;
  for (std::size_t k = 1; k <= n; ++k) total = total * static_cast<double>(m + k) / static_cast<double>(k);
  std::vector<double> cdf(umax + 1, 0.0);
  double acc = 0.0;
  for (std::size_t u = 0; u <= umax; ++u) {
    acc += c[n][m][u];
    cdf[u] = acc / total;
  }
  return cdf;
}

int mann_whitney_lower_critical(std::size_t n, std::size_t m, double alpha) {
  check_alpha(alpha);
  const std::size_t nm = n * m;
  if (nm <= 400) {
    const auto cdf = mann_whitney_null_cdf(n, m);
    int k = -1;
    for (std::size_t u = 0; u <= nm; ++u) {
      if (cdf[u] <= alpha)
        k = static_cast<int>(u);
      else
        break;
    }
    return k;
  }
  const double mu = static_cast<double>(nm) / 2.0;
  const double sigma = std::sqrt(static_cast<double>(nm) * static_cast<double>(n + m + 1) / 12.0);
  const double z = normal_quantile(1.0 - alpha);
  const double k = std::floor(mu - 0.5 - z * sigma);
  return k < 0.0 ? -1 : static_cast<int>(k);
}

TestResult nonparametric_noninferiority(std::span<const double> candidate, std::span<const double> reference,
                                        const MetricSpec& spec, double alpha) {
  check_alpha(alpha);
  check_margin(spec);
  if (candidate.size() < 3 || reference.size() < 3)
    throw std::invalid_argument("nonparametric_noninferiority: need at least 3 samples per arm (got " +
                                std::to_string(candidate.size()) + " and " + std::to_string(reference.size()) + ")");

  TestResult r;
  r.metric = spec.name;
  r.direction = spec.direction;
  r.test = TestKind::nonparametric;
  r.alpha = alpha;
  r.margin = spec.margin;
  r.n_candidate = candidate.size();
  r.n_reference = reference.size();
  r.mean_candidate = mean(candidate);
  r.mean_reference = mean(reference);
  r.sd_candidate = std::sqrt(sample_variance(candidate));
  r.sd_reference = std::sqrt(sample_variance(reference));
  r.estimate = hodges_lehmann(candidate, reference);

  std::vector<double> diffs;
  diffs.reserve(candidate.size() * reference.size());
  for (double c : candidate)
    for (double ref : reference) diffs.push_back(c - ref);
  std::sort(diffs.begin(), diffs.end());
  const std::size_t nm = diffs.size();

  const int k = mann_whitney_lower_critical(candidate.size(), reference.size(), alpha);
  if (spec.direction == Direction::smaller_better) {
    r.adverse_bound = k < 0 ? std::numeric_limits<double>::infinity() : diffs[nm - 1 - static_cast<std::size_t>(k)];
  } else {
    r.adverse_bound = k < 0 ? -std::numeric_limits<double>::infinity() : diffs[static_cast<std::size_t>(k)];
  }
  r.decision = bound_inside_margin(spec.direction, r.adverse_bound, spec.margin) ? Decision::non_inferior
                                                                                 : Decision::not_demonstrated;
  return r;
}

IutResult iut_decision(std::vector<TestResult> components) {
  if (components.empty()) throw std::invalid_argument("iut_decision: empty component list");
  IutResult r;
  r.overall = Decision::non_inferior;
  for (const auto& c : components)
    if (c.decision != Decision::non_inferior) r.overall = Decision::not_demonstrated;
  r.components = std::move(components);
  return r;
}

}  // namespace oatb::stats
