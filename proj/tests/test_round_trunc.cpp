#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "lpcoreset/round_trunc.hpp"
#include "test_support.hpp"

using namespace lpcoreset;

namespace {

DenseVector vec(std::initializer_list<double> values) {
  DenseVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Heavy-tailed test vectors: magnitudes spread over many decades, some zeros.
DenseVector spread_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-30.0, 5.0);
  std::bernoulli_distribution sign(0.5), zero(0.05);
  DenseVector b(n);
  for (Eigen::Index i = 0; i < n; ++i)
    b[i] = zero(rng) ? 0.0 : (sign(rng) ? 1.0 : -1.0) * std::pow(10.0, exponent(rng));
  return b;
}

}  // namespace

TEST_CASE("round_trunc worked example") {
  const DenseVector x = round_trunc(vec({100, -3, 0.5, 1e-9}), 0.1);
  CHECK(x[0] == doctest::Approx(97.017).epsilon(5e-5));
  CHECK(x[1] == doctest::Approx(-2.8531).epsilon(5e-5));
  CHECK(x[2] == doctest::Approx(0.46651).epsilon(5e-5));
  CHECK(x[3] == 0.0);
  CHECK(x[0] == std::pow(1.1, 48));
}

TEST_CASE("round_trunc degenerate inputs") {
  CHECK(round_trunc(vec({0, 0}), 0.3).isZero(0.0));
  CHECK(round_trunc(vec({1}), 0.5)[0] == 1.0);
  CHECK(round_trunc(vec({-7}), 0.5)[0] < 0.0);
  CHECK_THROWS_AS(round_trunc(vec({1}), 0.0), InvalidParameter);
  CHECK_THROWS_AS(round_trunc(vec({1}), 1.0), InvalidParameter);
  CHECK_THROWS_AS(round_trunc(vec({std::nan("")}), 0.1), InvalidInput);
}

TEST_CASE("round_trunc contract on random vectors") {
  for (double eps : {0.05, 0.1, 0.5}) {
    for (Eigen::Index n : {2, 17, 500, 10000}) {
      CAPTURE(eps);
      CAPTURE(n);
      const DenseVector b = spread_vector(n, static_cast<std::uint64_t>(n) * 7 + 1);
      const DenseVector x = round_trunc(b, eps);
      const double top = b.cwiseAbs().maxCoeff();
      const double cut = top / std::pow(static_cast<double>(n), 5.0);
      std::set<double> magnitudes;
      bool ok = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (x[i] != 0.0) {
          ok &= std::abs(b[i] - x[i]) <= eps * std::abs(b[i]);
          ok &= std::signbit(x[i]) == std::signbit(b[i]);
          ok &= std::abs(x[i]) <= std::abs(b[i]);
          magnitudes.insert(std::abs(x[i]));
        } else {
          ok &= std::abs(b[i]) <= (1 + eps) * cut;
        }
      }
      CHECK(ok);
      CHECK(magnitudes.size() <= max_distinct_magnitudes(static_cast<std::size_t>(n), eps));
      const double limit = static_cast<double>(
          std::ceil(std::log(std::pow(static_cast<double>(n), 5.0)) / std::log1p(eps)) + 1);
      CHECK(static_cast<double>(magnitudes.size()) <= limit);
      // Norm bound for p in {1, 2, 4}.
      for (double p : {1.0, 2.0, 4.0}) {
        const double lhs = lp_norm(b - x, p);
        const double rhs = eps * lp_norm(b, p) +
                           std::pow(static_cast<double>(n), 1.0 / p) * (1 + eps) * cut;
        CHECK(lhs <= rhs * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("round_trunc is idempotent") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseVector b = spread_vector(300, seed);
    for (double eps : {0.05, 0.25}) {
      const DenseVector once = round_trunc(b, eps);
      const DenseVector twice = round_trunc(once, eps);
      CHECK(once == twice);
    }
  }
}

TEST_CASE("partition_groups examples") {
  const GroupPartition p = partition_groups(vec({1, 1, 0.5}));
  REQUIRE(p.size() == 2);
  CHECK(p.values == std::vector<double>{1, 0.5});
  CHECK(p.groups[0] == std::vector<std::size_t>{0, 1});
  CHECK(p.groups[1] == std::vector<std::size_t>{2});

  const GroupPartition z = partition_groups(vec({0, 0, 0}));
  REQUIRE(z.size() == 1);
  CHECK(z.values[0] == 0.0);
  CHECK(z.groups[0] == std::vector<std::size_t>{0, 1, 2});

  const GroupPartition mixed = partition_groups(vec({0, -2, 2, 0.5, -2}));
  CHECK(mixed.values == std::vector<double>{2, -2, 0.5, 0});
  CHECK(mixed.groups[1] == std::vector<std::size_t>{1, 4});
}

TEST_CASE("partition_groups covers every index exactly once") {
  const DenseVector x = round_trunc(spread_vector(2000, 99), 0.2);
  std::set<double> distinct(x.data(), x.data() + x.size());
  const GroupPartition part = partition_groups(x);
  CHECK(part.size() == distinct.size());
  std::vector<int> hits(2000, 0);
  for (std::size_t k = 0; k < part.size(); ++k)
    for (std::size_t i : part.groups[k]) {
      ++hits[i];
      CHECK(x[static_cast<Eigen::Index>(i)] == part.values[k]);
    }
  for (int h : hits) CHECK(h == 1);
}
