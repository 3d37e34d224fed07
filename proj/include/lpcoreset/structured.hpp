#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lpcoreset/linalg.hpp"
#include "lpcoreset/sampling_pipeline.hpp"

namespace lpcoreset {

struct SparseEntry {
  std::size_t col = 0;
  double value = 0.0;
};

/// A = left * right + S with S holding at most `sparsity` entries per row.
struct LowRankPlusSparse {
  DenseMatrix left;   // n x k
  DenseMatrix right;  // k x d
  std::vector<std::vector<SparseEntry>> sparse_rows;
  std::size_t sparsity = 0;

  std::size_t rows() const { return static_cast<std::size_t>(left.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(right.cols()); }
  std::size_t rank() const { return static_cast<std::size_t>(right.rows()); }

  /// Throws InvalidInput on shape mismatch or a row with too many entries.
  void validate() const;
  DenseMatrix dense() const;
};

/// General p >= 4: 2^{r+1} <= p < 2^{r+2}, q = p / 2^r in [2, 4), width d^{2^r}.
struct TensorPlan {
  int r = 0;
  double q = 2.0;
  std::size_t width = 1;
};

TensorPlan plan_tensor(std::size_t d, double p);

/// Row i is a_i^{(x) 2^r}, flattened with the first factor most significant.
DenseMatrix extend_tensor(const DenseMatrix& a, const TensorPlan& plan);

/// x^{(x) 2^r} in the same index order as extend_tensor.
DenseVector tensor_power(const DenseVector& x, int r);

/// One column of the low-rank + sparse extension: a multiset of basis elements,
/// stored as (basis id, multiplicity) sorted by id. Ids 0..k-1 are the right
/// factor rows v_j, k..k+d-1 the coordinate vectors e_c, and k+d the constant.
using Monomial = std::vector<std::pair<std::size_t, int>>;

struct ExtendedMatrix {
  DenseMatrix m;
  std::vector<Monomial> columns;
};

/// Linearizes <a_i, x>^{2^r} over multisets of the row's basis elements, each
/// entry being the multinomial coefficient times the product of coefficients.
/// With an offset t the row is a_i - t (a constant basis element appended), so
/// (<a_i, x> - t)^{2^r} is linear in the features.
ExtendedMatrix extend_lowrank_sparse(const LowRankPlusSparse& ops, int r);
ExtendedMatrix extend_lowrank_sparse_rows(const LowRankPlusSparse& ops, int r,
                                          std::span<const std::size_t> rows,
                                          std::optional<double> offset);

/// y(x): for each column, the product of <v_j, x>, x_c and 1 with its multiplicities.
DenseVector monomial_features(const LowRankPlusSparse& ops, const std::vector<Monomial>& columns,
                              const DenseVector& x);

PipelineResult solve_lowrank_sparse_lp(const LowRankPlusSparse& ops, const DenseVector& b,
                                       double p, double eps, std::uint64_t seed,
                                       const PipelineOptions& options = {});

/// Zero m1 selects min(n, ceil(10 d^{p/2} ln d)). Requires p >= 4.
PipelineResult solve_general_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                                std::uint64_t seed, const PipelineOptions& options = {});

/// Lewis sampling on A itself at q = p, for 1 <= p < 4.
PipelineResult solve_direct_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                               std::uint64_t seed, const PipelineOptions& options = {});

/// solve_general_lp for p >= 4, solve_direct_lp below.
PipelineResult solve_dense_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                              std::uint64_t seed, const PipelineOptions& options = {});

}  // namespace lpcoreset
