#include "lpcoreset/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lpcoreset {

SampleSet SampleSet::identity(std::size_t n) {
  SampleSet s;
  s.indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.indices[i] = i;
  s.scales.assign(n, 1.0);
  return s;
}

namespace {

void check_spec(const VandermondeSpec& spec) {
  if (spec.degree < 1) throw InvalidParameter("vandermonde degree must be >= 1");
}

void fill_row(double t, std::size_t degree, double* out) {
  double power = 1.0;
  for (std::size_t j = 0; j < degree; ++j) {
    out[j] = power;
    power *= t;
  }
}

}  // namespace

DenseMatrix materialize(const VandermondeSpec& spec) {
  check_spec(spec);
  DenseMatrix m(spec.rows(), spec.degree);
  for (std::size_t i = 0; i < spec.rows(); ++i)
    fill_row(spec.nodes[i], spec.degree, m.row(i).data());
  return m;
}

DenseMatrix materialize_rows(const VandermondeSpec& spec,
                             std::span<const std::size_t> rows) {
  check_spec(spec);
  DenseMatrix m(rows.size(), spec.degree);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= spec.rows()) throw InvalidInput("row index out of range");
    fill_row(spec.nodes[rows[k]], spec.degree, m.row(k).data());
  }
  return m;
}

double lp_norm(const DenseVector& v, double p) {
  if (!(p >= 1.0)) throw InvalidParameter("lp_norm requires p >= 1");
  if (v.size() == 0) return 0.0;
  const double top = v.cwiseAbs().maxCoeff();
  if (std::isinf(p) || top == 0.0) return top;
  if (p == 2.0) return v.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double log_lp_power(const DenseVector& v, double p) {
  if (!(p >= 1.0) || std::isinf(p))
    throw InvalidParameter("log_lp_power requires finite p >= 1");
  if (v.size() == 0) return -kInfinity;
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return -kInfinity;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / top, p);
  return p * std::log(top) + std::log(acc);
}

namespace {

void check_sample(const SampleSet& sample, std::size_t rows, std::size_t b_len) {
  if (sample.indices.size() != sample.scales.size())
    throw InvalidInput("sample indices and scales differ in length");
  if (rows != b_len) throw InvalidInput("matrix rows and b length differ");
  for (std::size_t idx : sample.indices)
    if (idx >= rows)
      throw InvalidInput("sample index " + std::to_string(idx) + " out of range");
}

}  // namespace

std::pair<DenseMatrix, DenseVector> apply_sample(const SampleSet& sample,
                                                 const DenseMatrix& a,
                                                 const DenseVector& b) {
  check_sample(sample, static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.size()));
  DenseMatrix sa(sample.size(), a.cols());
  DenseVector sb(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    sa.row(j) = sample.scales[j] * a.row(sample.indices[j]);
    sb[j] = sample.scales[j] * b[sample.indices[j]];
  }
  return {std::move(sa), std::move(sb)};
}

std::pair<DenseMatrix, DenseVector> apply_sample(const SampleSet& sample,
                                                 const VandermondeSpec& a,
                                                 const DenseVector& b) {
  check_sample(sample, a.rows(), static_cast<std::size_t>(b.size()));
  DenseMatrix sa = materialize_rows(a, sample.indices);
  DenseVector sb(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    sa.row(j) *= sample.scales[j];
    sb[j] = sample.scales[j] * b[sample.indices[j]];
  }
  return {std::move(sa), std::move(sb)};
}

SpdFactor::SpdFactor(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols()) throw InvalidInput("SPD solve needs a square matrix");
  const auto d = gram.rows();
  if (d == 0) throw InvalidInput("SPD solve on an empty matrix");
  if (!gram.allFinite()) throw NumericalFailure("non-finite entries in Gram matrix");

  const double lambda = 1e-12 * gram.trace() / static_cast<double>(d);
  llt_.compute(gram);
  bool ok = llt_.info() == Eigen::Success;
  if (ok) {
    const double min_pivot = llt_.matrixLLT().diagonal().cwiseAbs().minCoeff();
    ok = min_pivot * min_pivot > lambda;
  }
  if (ok) return;

  if (!(lambda > 0.0))
    throw NumericalFailure("matrix is not positive definite and has no ridge rescue");
  Eigen::MatrixXd shifted = gram;
  shifted.diagonal().array() += lambda;
  llt_.compute(shifted);
  if (llt_.info() != Eigen::Success)
    throw NumericalFailure("matrix is indefinite beyond ridge rescue");
  ridged_ = true;
  ridge_ = lambda;
}

Eigen::VectorXd SpdFactor::solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

void SpdFactor::solve_lower_in_place(Eigen::MatrixXd& rhs) const {
  llt_.matrixL().solveInPlace(rhs);
}

DenseVector solve_spd(const DenseMatrix& g, const DenseVector& rhs) {
  if (g.rows() != g.cols()) throw InvalidInput("SPD solve needs a square matrix");
  if (g.rows() != rhs.size()) throw InvalidInput("SPD solve dimension mismatch");
  const SpdFactor factor(g);
  DenseVector z = factor.solve(rhs);
  if (!z.allFinite()) throw NumericalFailure("SPD solve produced non-finite values");
  return z;
}

}  // namespace lpcoreset
