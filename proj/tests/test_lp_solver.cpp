#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpcoreset/lp_oracle.hpp"
#include "lpcoreset/lp_solver.hpp"
#include "test_support.hpp"

using namespace lpcoreset;

namespace {

DenseMatrix column(std::initializer_list<double> values) {
  DenseMatrix a(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) a(i++, 0) = v;
  return a;
}

DenseVector vec(std::initializer_list<double> values) {
  DenseVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Minimizer of 2x^4 + (3-x)^4 found by golden section on the scalar quartic.
double quartic_min() {
  return golden_section_min([](double x) { return 2 * std::pow(x, 4) + std::pow(3 - x, 4); }, 0.0);
}

}  // namespace

TEST_CASE("solve_l2 examples") {
  CHECK(solve_l2(column({1, 1}), vec({0, 2}))[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((solve_l2(DenseMatrix::Identity(2, 2), vec({3, 4})) - vec({3, 4})).norm() < 1e-14);
  DenseMatrix line(3, 2);
  line << 1, 0, 1, 1, 1, 2;
  CHECK((solve_l2(line, vec({0, 1, 2})) - vec({0, 1})).norm() < 1e-13);
}

TEST_CASE("solve_l2 matches the normal equations") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix a = testing::gaussian_matrix(40, 5, seed);
    const DenseVector b = testing::gaussian_vector(40, seed + 50);
    const Eigen::MatrixXd g = a.transpose() * a;
    const DenseVector normal = g.ldlt().solve(a.transpose() * b);
    CHECK((solve_l2(a, b) - normal).norm() <= 1e-8 * std::max(1.0, normal.norm()));
  }
}

TEST_CASE("solve_l2 returns a bounded basic solution on rank-deficient input") {
  DenseMatrix a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  const DenseVector b = vec({1, 2, 3});
  const DenseVector x = solve_l2(a, b);
  CHECK(x.allFinite());
  CHECK(x.norm() < 1e3);
  // The residual is orthogonal to the column space.
  CHECK((a.transpose() * (a * x - b)).norm() < 1e-10);
}

TEST_CASE("solve_lp symmetry examples") {
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
    CAPTURE(p);
    const LpFit fit = solve_lp(column({1, 1}), vec({0, 2}), p, 1e-6);
    CHECK(fit.x[0] == doctest::Approx(1.0).epsilon(p == 1.0 ? 1e-2 : 1e-4));
    CHECK(fit.value == doctest::Approx(std::pow(2.0, 1.0 / p)).epsilon(1e-5));
  }
}

TEST_CASE("solve_lp on the scalar quartic") {
  const double oracle = quartic_min();
  // Stationarity 8x^3 = 4(3-x)^3 gives x = 3 / (1 + 2^{1/3}).
  CHECK(oracle == doctest::Approx(3.0 / (1.0 + std::cbrt(2.0))).epsilon(1e-8));
  const LpFit fit = solve_lp(column({1, 1, 1}), vec({0, 0, 3}), 4, 1e-8);
  CHECK(fit.x[0] == doctest::Approx(oracle).epsilon(1e-4));
  CHECK(fit.converged);
}

TEST_CASE("solve_lp at p = 2 matches least squares") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseMatrix a = testing::gaussian_matrix(30, 4, 700 + seed);
    const DenseVector b = testing::gaussian_vector(30, 800 + seed);
    const DenseVector ls = solve_l2(a, b);
    const LpFit fit = solve_lp(a, b, 2, 1e-6);
    CHECK((fit.x - ls).norm() <= 1e-8 * std::max(1.0, ls.norm()));
  }
}

TEST_CASE("solve_lp exact fit and guards") {
  const DenseMatrix a = testing::gaussian_matrix(20, 3, 9);
  const DenseVector x0 = vec({1, -2, 0.5});
  const LpFit fit = solve_lp(a, a * x0, 6, 1e-4);
  CHECK((fit.x - x0).norm() < 1e-6);
  CHECK(fit.value < 1e-6);
  CHECK_THROWS_AS(solve_lp(a, a * x0, 0.5, 1e-4), InvalidParameter);
  CHECK_THROWS_AS(solve_lp(a, a * x0, 2, 0.0), InvalidParameter);
  CHECK_THROWS_AS(solve_lp(a, DenseVector::Zero(3), 2, 0.1), InvalidInput);
}

TEST_CASE("smoothed gradient agrees with finite differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix a = testing::gaussian_matrix(15, 3, 900 + seed);
    const DenseVector b = testing::gaussian_vector(15, 950 + seed);
    const DenseVector x = testing::gaussian_vector(3, 990 + seed);
    for (double p : {1.0, 3.0, 6.0}) {
      const double delta = 0.05;
      const DenseVector g = smoothed_gradient(a, b, x, p, delta);
      for (Eigen::Index j = 0; j < 3; ++j) {
        const double h = 1e-6;
        DenseVector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double fd = (smoothed_objective(a, b, xp, p, delta) -
                           smoothed_objective(a, b, xm, p, delta)) / (2 * h);
        CHECK(std::abs(fd - g[j]) <= 1e-4 * std::max(1.0, std::abs(g[j])));
      }
    }
  }
}

TEST_CASE("IRLS never increases the objective at a fixed smoothing level") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix a = testing::gaussian_matrix(60, 4, 1100 + seed);
    const DenseVector b = testing::gaussian_vector(60, 1200 + seed);
    for (double p : {1.0, 3.0, 8.0}) {
      std::vector<IrlsStep> trace;
      LpSolveOptions options;
      options.trace = &trace;
      solve_lp(a, b, p, 1e-4, options);
      REQUIRE(trace.size() >= 2);
      for (std::size_t k = 1; k < trace.size(); ++k) {
        if (trace[k].delta != trace[k - 1].delta) continue;
        CHECK(trace[k].log_objective <= trace[k - 1].log_objective + 1e-12);
      }
    }
  }
}

TEST_CASE("solve_lp agrees with the golden-section oracle") {
  int instance = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 2);
    const DenseMatrix a = testing::gaussian_matrix(12, d, 2000 + seed);
    const DenseVector b = testing::gaussian_vector(12, 3000 + seed);
    for (double p : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      CAPTURE(seed);
      CAPTURE(p);
      const LpFit fit = solve_lp(a, b, p, 1e-3);
      const LpFit oracle = oracle_solve(a, b, p);
      CHECK(fit.value <= (1 + 2e-3) * oracle.value);
      // The oracle is a global minimizer, so IRLS cannot beat it by more than its tolerance.
      CHECK(oracle.value <= fit.value * (1 + 1e-6));
      ++instance;
    }
  }
  CHECK(instance == 300);
}

TEST_CASE("oracle_solve examples") {
  CHECK(oracle_solve(column({1, 1}), vec({0, 2}), 3).x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(oracle_solve(column({1, 2}), vec({1, 1}), 1).x[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(oracle_solve(column({1, 1, 1}), vec({0, 0, 3}), 4).x[0] ==
        doctest::Approx(3.0 / (1.0 + std::cbrt(2.0))).epsilon(1e-6));
  CHECK_THROWS_AS(oracle_solve(testing::gaussian_matrix(5, 4, 1), DenseVector::Zero(5), 2), UnsupportedSize);
}

TEST_CASE("linf exponent") {
  bool capped = true;
  CHECK(linf_exponent(3, 0.1, &capped) == std::ceil(3 * std::log(3.0) / 0.1));
  CHECK_FALSE(capped);
  CHECK(linf_exponent(1000000, 0.01, &capped) == kMaxLinfExponent);
  CHECK(capped);
  CHECK(linf_exponent(1, 0.5) >= 2.0);
}

TEST_CASE("solve_linf examples") {
  const LpFit mid = solve_linf(column({1, 1}), vec({0, 2}), 0.1);
  CHECK(mid.x[0] >= 0.9);
  CHECK(mid.x[0] <= 1.1);
  CHECK(mid.value <= 1.1);

  const LpFit exact = solve_linf(DenseMatrix::Identity(2, 2), vec({1, 1}), 0.1);
  CHECK((exact.x - vec({1, 1})).norm() < 1e-6);
  CHECK(exact.value < 1e-6);

  const LpFit three = solve_linf(column({1, 1, 1}), vec({0, 1, 5}), 0.05);
  CHECK(three.value == doctest::Approx(2.5).epsilon(0.05));
  CHECK(three.x[0] == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("golden_section_min on shifted parabolas") {
  for (double c : {-1e3, -2.5, 0.0, 0.3, 17.0}) {
    const double x = golden_section_min([c](double t) { return (t - c) * (t - c); }, 0.0);
    CHECK(x == doctest::Approx(c).epsilon(1e-8));
  }
}
