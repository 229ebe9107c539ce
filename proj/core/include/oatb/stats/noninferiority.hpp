#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oatb::stats {

enum class Direction { smaller_better, larger_better };
enum class TestKind { welch, nonparametric };
enum class Decision { non_inferior, not_demonstrated };

const char* to_string(Direction d);
const char* to_string(TestKind t);
const char* to_string(Decision d);

/// What "no worse than the reference" means for one metric: the adverse
/// one-sided confidence bound of the candidate-minus-reference difference
/// must fall strictly inside the margin.
struct MetricSpec {
  std::string name;
  Direction direction = Direction::smaller_better;
  double margin = 0.0;  // absolute, in metric units, > 0
  TestKind test = TestKind::welch;
};

struct TestResult {
  std::string metric;
  Direction direction = Direction::smaller_better;
  TestKind test = TestKind::welch;
  double estimate = 0.0;       // mean or median difference, candidate - reference
  double adverse_bound = 0.0;  // upper bound for smaller_better, lower bound for larger_better
  std::optional<double> p_value;
  Decision decision = Decision::not_demonstrated;
  std::size_t n_candidate = 0;
  std::size_t n_reference = 0;
  double alpha = 0.0;
  double margin = 0.0;
  double mean_candidate = 0.0;
  double mean_reference = 0.0;
  double sd_candidate = 0.0;
  double sd_reference = 0.0;
  bool degenerate = false;  // zero-variance branch taken
};

struct IutResult {
  std::vector<TestResult> components;
  Decision overall = Decision::not_demonstrated;
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // n-1 denominator

/// One-sided Welch non-inferiority test. With direction smaller_better the
/// null is mu_c - mu_r >= margin; it is rejected (decision non_inferior)
/// when the upper (1-alpha) Welch confidence bound of the difference is
/// strictly below the margin. larger_better is the mirror image. When both
/// sample variances are exactly zero the decision degenerates to a direct
/// comparison of the means against the margin.
TestResult welch_noninferiority(std::span<const double> candidate, std::span<const double> reference,
                                const MetricSpec& spec, double alpha);

/// Hodges-Lehmann estimate: median of all n_c * n_r pairwise differences
/// (candidate - reference); even counts average the two central values.
double hodges_lehmann(std::span<const double> candidate, std::span<const double> reference);

/// Distribution-free one-sided confidence bound for the median difference
/// from the order statistics of the pairwise differences, with the critical
/// order-statistic index taken from the Mann-Whitney null distribution
/// (exact for n_c * n_r <= 400, normal approximation with continuity
/// correction above).
TestResult nonparametric_noninferiority(std::span<const double> candidate, std::span<const double> reference,
                                        const MetricSpec& spec, double alpha);

/// Overall decision is non_inferior iff every component is; all components
/// are tested at the same level, no multiplicity correction.
IutResult iut_decision(std::vector<TestResult> components);

/// P(U <= u) for u = 0..n*m under the Mann-Whitney null; exact enumeration
/// counts computed by the standard partition recurrence.
std::vector<double> mann_whitney_null_cdf(std::size_t n, std::size_t m);

/// Largest k with P(U <= k) <= alpha, or -1 when even k = 0 exceeds alpha
/// (no finite distribution-free bound at this sample size).
int mann_whitney_lower_critical(std::size_t n, std::size_t m, double alpha);

}  // namespace oatb::stats
