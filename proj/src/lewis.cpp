#include "lpcoreset/lewis.hpp"

#include <algorithm>
#include <cmath>

#include "lpcoreset/random.hpp"

namespace lpcoreset {

namespace {

void check_q(double q) {
  if (!(q >= 1.0 && q < 4.0))
    throw InvalidParameter("Lewis iteration requires 1 <= q < 4");
}

}  // namespace

DenseVector compute_tau(const DenseMatrix& a, const LewisWeights& w) {
  const Eigen::Index n = a.rows();
  const Eigen::Index d = a.cols();
  if (w.weights.size() != n) throw InvalidInput("weights do not match matrix rows");
  if ((w.weights.array() <= 0.0).any()) throw InvalidInput("Lewis weights must be positive");
  if (d == 0) throw InvalidInput("matrix has no columns");

  const double exponent = 0.5 * (1.0 - 2.0 / w.q);
  Eigen::ArrayXd row_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) row_scale[i] = std::pow(w.weights[i], exponent);

  // Column equilibration; tau is unchanged by A -> A C for diagonal C.
  Eigen::ArrayXd col_scale = Eigen::ArrayXd::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i)
    col_scale += (row_scale[i] * a.row(i).transpose().array()).square();
  col_scale = col_scale.sqrt();
  for (Eigen::Index j = 0; j < d; ++j)
    col_scale[j] = col_scale[j] > 0.0 ? 1.0 / col_scale[j] : 1.0;

  // R from a QR of W^{1/2-1/q} A C satisfies R^T R = A^T W^{1-2/q} A (scaled),
  // so tau_i = |R^{-T} C a_i|^2 without squaring the condition number.
  Eigen::MatrixXd scaled = a * col_scale.matrix().asDiagonal();
  Eigen::MatrixXd weighted = row_scale.matrix().asDiagonal() * scaled;
  if (!weighted.allFinite()) throw NumericalFailure("non-finite entries in weighted matrix");
  const double lambda = 1e-12 * weighted.squaredNorm() / static_cast<double>(d);

  Eigen::MatrixXd r;
  bool ok = n >= d;
  if (ok) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(weighted);
    r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    const double min_pivot = r.diagonal().cwiseAbs().minCoeff();
    ok = min_pivot * min_pivot > lambda;
  }
  if (!ok) {
    // Ridge fallback: appending sqrt(lambda) I gives R^T R = G + lambda I.
    if (!(lambda > 0.0)) throw NumericalFailure("all-zero matrix has no ridge rescue");
    Eigen::MatrixXd augmented(n + d, d);
    augmented << weighted, std::sqrt(lambda) * Eigen::MatrixXd::Identity(d, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(augmented);
    r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  }

  Eigen::MatrixXd scaled_t = scaled.transpose();
  r.transpose().triangularView<Eigen::Lower>().solveInPlace(scaled_t);
  DenseVector tau = scaled_t.colwise().squaredNorm().transpose();
  if (!tau.allFinite()) throw NumericalFailure("non-finite leverage values");
  return tau;
}

LewisWeights lewis_iterate(const DenseMatrix& a, double q, const LewisWeights& w) {
  check_q(q);
  LewisWeights current = w;
  current.q = q;
  const DenseVector tau = compute_tau(a, current);

  LewisWeights next;
  next.q = q;
  next.iterations = w.iterations + 1;
  next.weights.resize(tau.size());
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    double wi = std::pow(tau[i], q / 2.0);
    if (!(wi > kWeightFloor)) {
      wi = kWeightFloor;
      if (a.row(i).isZero(0.0)) next.floored_rows.push_back(static_cast<std::size_t>(i));
    }
    next.weights[i] = wi;
  }
  return next;
}

LewisWeights approx_lewis_weights(const DenseMatrix& a, double q, int iterations) {
  check_q(q);
  if (iterations < 1) throw InvalidParameter("Lewis iteration count must be >= 1");
  LewisWeights w;
  w.q = q;
  w.weights = DenseVector::Ones(a.rows());
  for (int t = 0; t < iterations; ++t) w = lewis_iterate(a, q, w);
  return w;
}

double fixed_point_residual(const DenseMatrix& a, const LewisWeights& w) {
  const DenseVector tau = compute_tau(a, w);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    if (a.row(i).isZero(0.0)) continue;
    worst = std::max(worst, std::abs(std::pow(tau[i], w.q / 2.0) / w.weights[i] - 1.0));
  }
  return worst;
}

SampleSet sample_by_weights(const DenseVector& weights, std::size_t m, double p,
                            std::uint64_t seed) {
  if (m < 1) throw InvalidParameter("sample size must be >= 1");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("sampling exponent must be finite and >= 1");
  if ((weights.array() < 0.0).any() || !weights.allFinite())
    throw InvalidInput("sampling weights must be finite and nonnegative");

  std::vector<double> cumulative(static_cast<std::size_t>(weights.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    total += weights[i];
    cumulative[static_cast<std::size_t>(i)] = total;
  }
  if (!(total > 0.0)) throw InvalidInput("sampling weights are all zero");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleSet s;
  s.indices.reserve(m);
  s.scales.reserve(m);
  const double md = static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double u = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    auto idx = static_cast<std::size_t>(it - cumulative.begin());
    // Skip zero-probability slots that upper_bound can land on at a boundary.
    while (weights[static_cast<Eigen::Index>(idx)] == 0.0 && idx + 1 < cumulative.size()) ++idx;
    const double prob = weights[static_cast<Eigen::Index>(idx)] / total;
    s.indices.push_back(idx);
    s.scales.push_back(std::pow(1.0 / (md * prob), 1.0 / p));
  }
  return s;
}

SampleSet build_sampler(const LewisWeights& w, std::size_t m, double p,
                        std::uint64_t seed) {
  if ((w.weights.array() <= 0.0).any()) throw InvalidInput("Lewis weights must be positive");
  return sample_by_weights(w.weights, m, p, seed);
}

SampleSet uniform_sampler(std::size_t n, std::size_t m, double p, std::uint64_t seed) {
  if (n == 0) throw InvalidInput("cannot sample from zero rows");
  if (m < 1) throw InvalidParameter("sample size must be >= 1");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const double scale = std::pow(static_cast<double>(n) / static_cast<double>(m), 1.0 / p);
  SampleSet s;
  s.indices.reserve(m);
  for (std::size_t j = 0; j < m; ++j) s.indices.push_back(pick(rng));
  s.scales.assign(m, scale);
  return s;
}

}  // namespace lpcoreset
