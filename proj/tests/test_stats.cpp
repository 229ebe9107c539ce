#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "oatb/sim/rng.hpp"
#include "oatb/stats/noninferiority.hpp"
#include "oatb/stats/tdist.hpp"

using namespace oatb::stats;
using nlohmann::json;

namespace {

json load_oracle() {
  std::ifstream in(std::string(OATB_TEST_DATA_DIR) + "/stats_oracle.json");
  REQUIRE(in);
  return json::parse(in);
}

double rel_err(double got, double want) {
  const double denom = std::max(std::fabs(want), 1e-300);
  return std::fabs(got - want) / denom;
}

double welch_nu(double v1, std::size_t n1, double v2, std::size_t n2) {
  const double a = v1 / double(n1);
  const double b = v2 / double(n2);
  return (a + b) * (a + b) / (a * a / double(n1 - 1) + b * b / double(n2 - 1));
}

}  // namespace

TEST_CASE("student t quantiles match the frozen table to 1e-9") {
  const json oracle = load_oracle();
  for (const auto& q : oracle.at("quantiles")) {
    const double p = q.at("p").get<double>();
    const double nu = q.at("nu").get<double>();
    const double want = q.at("t").get<double>();
    const double got = student_t_quantile(p, nu);
    CHECK(rel_err(got, want) <= 1e-9);
  }
}

TEST_CASE("student t cdf and quantile are inverses") {
  for (double nu : {1.3, 2.0, 4.7, 11.0, 60.0}) {
    for (double p : {0.6, 0.8, 0.95, 0.99}) {
      const double t = student_t_quantile(p, nu);
      CHECK(student_t_cdf(t, nu) == doctest::Approx(p).epsilon(1e-10));
    }
  }
}

TEST_CASE("welch statistic, degrees of freedom, quantile and bound match the oracle") {
  const json oracle = load_oracle();
  std::size_t checked = 0;
  for (const auto& c : oracle.at("welch")) {
    const std::vector<double> x = c.at("x").get<std::vector<double>>();
    const std::vector<double> y = c.at("y").get<std::vector<double>>();
    MetricSpec spec{"m", Direction::smaller_better, 1.0, TestKind::welch};
    const TestResult r = welch_noninferiority(x, y, spec, 0.05);

    const double se =
        std::sqrt(r.sd_candidate * r.sd_candidate / double(r.n_candidate) +
                  r.sd_reference * r.sd_reference / double(r.n_reference));
    const double t = (r.mean_candidate - r.mean_reference) / se;
    CHECK(rel_err(t, c.at("t").get<double>()) <= 1e-9);

    const double nu = welch_nu(r.sd_candidate * r.sd_candidate, r.n_candidate,
                               r.sd_reference * r.sd_reference, r.n_reference);
    CHECK(rel_err(nu, c.at("nu").get<double>()) <= 1e-9);

    const double tq = student_t_quantile(0.95, c.at("nu").get<double>());
    CHECK(rel_err(tq, c.at("tq95").get<double>()) <= 1e-9);

    CHECK(rel_err(r.estimate, c.at("t").get<double>() * c.at("se").get<double>()) <= 1e-9);
    CHECK(rel_err(r.adverse_bound, c.at("bound95").get<double>()) <= 1e-9);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("welch decision follows the adverse bound against the margin") {
  std::vector<double> cand{1.02, 1.01, 0.99, 1.03, 1.00, 0.98, 1.02, 1.01};
  std::vector<double> ref{1.00, 0.99, 1.01, 1.02, 0.98, 1.00, 1.01, 0.99};
  MetricSpec spec{"delay", Direction::smaller_better, 0.2, TestKind::welch};
  auto r = welch_noninferiority(cand, ref, spec, 0.05);
  CHECK(r.decision == Decision::non_inferior);
  CHECK(r.adverse_bound < 0.2);

  spec.margin = 0.001;
  r = welch_noninferiority(cand, ref, spec, 0.05);
  CHECK(r.decision == Decision::not_demonstrated);
}

TEST_CASE("direction symmetry: larger_better mirrors smaller_better") {
  std::vector<double> cand{3.1, 2.9, 3.0, 3.2, 2.8};
  std::vector<double> ref{3.0, 3.1, 2.9, 3.0, 3.1};
  MetricSpec smaller{"m", Direction::smaller_better, 0.5, TestKind::welch};
  MetricSpec larger{"m", Direction::larger_better, 0.5, TestKind::welch};

  std::vector<double> neg_cand;
  std::vector<double> neg_ref;
  for (double v : cand) neg_cand.push_back(-v);
  for (double v : ref) neg_ref.push_back(-v);

  const auto a = welch_noninferiority(cand, ref, smaller, 0.05);
  const auto b = welch_noninferiority(neg_cand, neg_ref, larger, 0.05);
  CHECK(a.decision == b.decision);
  CHECK(a.adverse_bound == doctest::Approx(-b.adverse_bound).epsilon(1e-12));
  CHECK(a.estimate == doctest::Approx(-b.estimate).epsilon(1e-12));
}

TEST_CASE("zero-variance samples degenerate to a direct mean comparison") {
  std::vector<double> cand{2.0, 2.0, 2.0, 2.0};
  std::vector<double> ref{2.0, 2.0, 2.0, 2.0};
  MetricSpec spec{"m", Direction::smaller_better, 0.1, TestKind::welch};
  auto r = welch_noninferiority(cand, ref, spec, 0.05);
  CHECK(r.degenerate);
  CHECK(r.decision == Decision::non_inferior);

  std::vector<double> worse{2.2, 2.2, 2.2, 2.2};
  r = welch_noninferiority(worse, ref, spec, 0.05);
  CHECK(r.degenerate);
  CHECK(r.decision == Decision::not_demonstrated);
}

TEST_CASE("mann-whitney null for n=m=4 matches the 70-arrangement enumeration") {
  // Enumerate all C(8,4) placements of candidate ranks among 8 values and
  // count the U statistic for each arrangement.
  std::vector<int> counts(17, 0);
  for (int mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    int u = 0;
    int seen_y = 0;
    for (int pos = 0; pos < 8; ++pos) {
      if (mask & (1 << pos)) {
        u += seen_y;
      } else {
        ++seen_y;
      }
    }
    ++counts[u];
  }
  int total = 0;
  for (int c : counts) total += c;
  CHECK(total == 70);

  const auto cdf = mann_whitney_null_cdf(4, 4);
  REQUIRE(cdf.size() == 17);
  double cum = 0.0;
  for (std::size_t u = 0; u < cdf.size(); ++u) {
    cum += double(counts[u]) / 70.0;
    CHECK(cdf[u] == doctest::Approx(cum).epsilon(1e-12));
  }
}

TEST_CASE("mann-whitney lower critical index matches the null cdf") {
  for (std::size_t n : {3u, 4u, 5u, 8u}) {
    for (std::size_t m : {3u, 5u, 9u}) {
      const auto cdf = mann_whitney_null_cdf(n, m);
      for (double alpha : {0.01, 0.05, 0.1}) {
        const int k = mann_whitney_lower_critical(n, m, alpha);
        if (k < 0) {
          CHECK(cdf[0] > alpha);
        } else {
          CHECK(cdf[std::size_t(k)] <= alpha);
          if (std::size_t(k) + 1 < cdf.size()) CHECK(cdf[std::size_t(k) + 1] > alpha);
        }
      }
    }
  }
}

TEST_CASE("hodges-lehmann equals the median of all pairwise differences") {
  oatb::sim::RngStream s(123, "hl");
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + s.uniform_int(10);
    const std::size_t m = 1 + s.uniform_int(10);
    if (n * m > 100) continue;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) x.push_back(s.normal(0.0, 3.0));
    for (std::size_t j = 0; j < m; ++j) y.push_back(s.normal(1.0, 2.0));

    std::vector<double> diffs;
    for (double a : x)
      for (double b : y) diffs.push_back(a - b);
    std::sort(diffs.begin(), diffs.end());
    const std::size_t k = diffs.size();
    const double want = k % 2 == 1 ? diffs[k / 2] : 0.5 * (diffs[k / 2 - 1] + diffs[k / 2]);
    CHECK(hodges_lehmann(x, y) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("nonparametric bound reacts to a location shift") {
  std::vector<double> ref;
  std::vector<double> close;
  std::vector<double> far;
  oatb::sim::RngStream s(5, "np");
  for (int i = 0; i < 12; ++i) {
    const double base = s.uniform(0.0, 0.05);
    ref.push_back(1.0 + base);
    close.push_back(1.01 + base * 1.1);
    far.push_back(2.0 + base);
  }
  MetricSpec spec{"m", Direction::smaller_better, 0.3, TestKind::nonparametric};
  CHECK(nonparametric_noninferiority(close, ref, spec, 0.05).decision ==
        Decision::non_inferior);
  CHECK(nonparametric_noninferiority(far, ref, spec, 0.05).decision ==
        Decision::not_demonstrated);
}

TEST_CASE("nonparametric estimate is the hodges-lehmann difference") {
  std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y{0.5, 1.5, 3.5, 9.0};
  MetricSpec spec{"m", Direction::smaller_better, 1.0, TestKind::nonparametric};
  const auto r = nonparametric_noninferiority(x, y, spec, 0.05);
  CHECK(r.estimate == doctest::Approx(hodges_lehmann(x, y)).epsilon(1e-12));
}

TEST_CASE("iut overall decision is the conjunction of components") {
  oatb::sim::RngStream s(77, "iut");
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 1 + s.uniform_int(5);
    std::vector<TestResult> comps(k);
    bool all = true;
    for (auto& c : comps) {
      const bool ni = s.chance(0.5);
      c.decision = ni ? Decision::non_inferior : Decision::not_demonstrated;
      all = all && ni;
    }
    const auto r = iut_decision(comps);
    CHECK(r.overall == (all ? Decision::non_inferior : Decision::not_demonstrated));
    CHECK(r.components.size() == k);
  }
}

TEST_CASE("mean and sample variance match hand values") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  CHECK(mean(xs) == doctest::Approx(2.5));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("small samples are rejected") {
  std::vector<double> one{1.0};
  std::vector<double> two{1.0, 2.0};
  std::vector<double> three{1.0, 2.0, 3.0};
  MetricSpec spec{"m", Direction::smaller_better, 0.1, TestKind::welch};
  CHECK_THROWS(welch_noninferiority(one, three, spec, 0.05));
  CHECK_THROWS(welch_noninferiority(three, one, spec, 0.05));
  CHECK_NOTHROW(welch_noninferiority(two, two, spec, 0.05));

  spec.test = TestKind::nonparametric;
  CHECK_THROWS(nonparametric_noninferiority(two, three, spec, 0.05));
  CHECK_THROWS(nonparametric_noninferiority(three, two, spec, 0.05));
}
