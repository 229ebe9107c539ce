#pragma once

namespace oatb::stats {

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// Lentz continued fraction; accurate to ~1e-14 over the ranges used here.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with (possibly non-integer) nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Quantile of Student's t: smallest t with CDF(t) >= p. Solved by Newton
/// iteration on the CDF with a bisection fallback.
double student_t_quantile(double p, double nu);

/// Standard normal CDF and quantile (Acklam rational approximation with a
/// Halley refinement step against erfc).
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace oatb::stats
