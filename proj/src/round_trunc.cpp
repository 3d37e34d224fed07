#include "lpcoreset/round_trunc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lpcoreset {

namespace {

// Largest k with base^k <= magnitude. The floating-point log can be off by one
// near grid points, so the exponent is corrected against std::pow.
double round_down_to_grid(double magnitude, double base) {
  double k = std::floor(std::log(magnitude) / std::log(base));
  while (std::pow(base, k + 1.0) <= magnitude) k += 1.0;
  while (std::pow(base, k) > magnitude) k -= 1.0;
  return std::pow(base, k);
}

}  // namespace

DenseVector round_trunc(const DenseVector& b, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("round_trunc requires eps in (0, 1)");
  if (!b.allFinite()) throw InvalidInput("round_trunc input must be finite");
  const Eigen::Index n = b.size();
  DenseVector x = DenseVector::Zero(n);
  if (n == 0) return x;
  const double top = b.cwiseAbs().maxCoeff();
  if (top == 0.0) return x;

  const double threshold = top / std::pow(static_cast<double>(n), 5.0);
  const double base = 1.0 + eps;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (b[i] == 0.0) continue;
    const double mag = round_down_to_grid(std::abs(b[i]), base);
    // For n = 1 the threshold is max|b| itself; comparing the unrounded entry
    // strictly keeps the lone nonzero entry.
    const bool truncate = n == 1 ? std::abs(b[i]) < threshold : mag <= threshold;
    if (!truncate) x[i] = std::copysign(mag, b[i]);
  }
  return x;
}

std::size_t max_distinct_magnitudes(std::size_t n, double eps) {
  const double levels = 5.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 1))) /
                        std::log1p(eps);
  return static_cast<std::size_t>(std::ceil(levels)) + 1;
}

GroupPartition partition_groups(const DenseVector& rounded) {
  // Order: decreasing magnitude, positive before negative, zero last.
  auto before = [](double u, double v) {
    if (std::abs(u) != std::abs(v)) return std::abs(u) > std::abs(v);
    return u > v;
  };
  std::map<double, std::vector<std::size_t>, decltype(before)> by_value(before);
  for (Eigen::Index i = 0; i < rounded.size(); ++i)
    by_value[rounded[i]].push_back(static_cast<std::size_t>(i));

  GroupPartition part;
  for (auto& [value, rows] : by_value) {
    part.values.push_back(value);
    part.groups.push_back(std::move(rows));
  }
  return part;
}

}  // namespace lpcoreset
