#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lpcoreset/error.hpp"

namespace lpcoreset {

using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Implicit n x degree Vandermonde matrix; row i is [1, t_i, ..., t_i^{degree-1}].
struct VandermondeSpec {
  std::vector<double> nodes;
  std::size_t degree = 1;

  std::size_t rows() const { return nodes.size(); }
  std::size_t cols() const { return degree; }
};

/// Row-sampling-and-rescaling operator. Row j of S A is scales[j] * A[indices[j]].
/// Indices may repeat.
struct SampleSet {
  std::vector<std::size_t> indices;
  std::vector<double> scales;

  std::size_t size() const { return indices.size(); }

  static SampleSet identity(std::size_t n);
};

DenseMatrix materialize(const VandermondeSpec& spec);

/// Materializes only the listed rows of the Vandermonde matrix.
DenseMatrix materialize_rows(const VandermondeSpec& spec,
                             std::span<const std::size_t> rows);

/// (sum |v_i|^p)^{1/p}; p = kInfinity gives max |v_i|. Computed with max-scaling
/// so large p does not overflow.
double lp_norm(const DenseVector& v, double p);

/// sum |v_i|^p, returned as its natural log to survive large p. Returns -inf for v = 0.
double log_lp_power(const DenseVector& v, double p);

std::pair<DenseMatrix, DenseVector> apply_sample(const SampleSet& sample,
                                                 const DenseMatrix& a,
                                                 const DenseVector& b);

std::pair<DenseMatrix, DenseVector> apply_sample(const SampleSet& sample,
                                                 const VandermondeSpec& a,
                                                 const DenseVector& b);

/// Cholesky factor of a symmetric positive (semi)definite matrix. When the plain
/// factorization fails, or a pivot falls below the ridge level, the matrix is
/// refactored as G + lambda I with lambda = 1e-12 * trace(G) / d.
class SpdFactor {
 public:
  explicit SpdFactor(const Eigen::MatrixXd& gram);

  bool ridged() const { return ridged_; }
  double ridge() const { return ridge_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// Overwrites `rhs` (d x k) with L^{-1} rhs.
  void solve_lower_in_place(Eigen::MatrixXd& rhs) const;

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  bool ridged_ = false;
  double ridge_ = 0.0;
};

DenseVector solve_spd(const DenseMatrix& g, const DenseVector& rhs);

}  // namespace lpcoreset
