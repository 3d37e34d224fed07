#pragma once

#include <cstdint>
#include <vector>

#include "lpcoreset/linalg.hpp"

namespace lpcoreset {

/// Approximate l_q Lewis weights of a matrix together with the exponent and the
/// number of fixed-point iterations that produced them.
struct LewisWeights {
  DenseVector weights;
  double q = 2.0;
  int iterations = 0;
  /// Rows whose weight hit the floor because the row is identically zero.
  std::vector<std::size_t> floored_rows;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

inline constexpr double kWeightFloor = 1e-300;
inline constexpr int kDefaultLewisIterations = 30;

/// tau_i = a_i^T (A^T W^{1-2/q} A)^{-1} a_i, computed exactly from the R factor of
/// a Householder QR of W^{1/2-1/q} A (columns are equilibrated first; tau is
/// invariant under column scaling). When a pivot satisfies R_jj^2 <= lambda with
/// lambda = 1e-12 * trace(G) / d, the Gram matrix is ridged to G + lambda I.
DenseVector compute_tau(const DenseMatrix& a, const LewisWeights& w);

/// One fixed-point step: w_i <- tau_i^{q/2}.
LewisWeights lewis_iterate(const DenseMatrix& a, double q, const LewisWeights& w);

/// T fixed-point steps from the all-ones start. Requires 1 <= q < 4.
LewisWeights approx_lewis_weights(const DenseMatrix& a, double q,
                                  int iterations = kDefaultLewisIterations);

/// max_i |tau_i^{q/2} / w_i - 1| for the supplied weights.
double fixed_point_residual(const DenseMatrix& a, const LewisWeights& w);

/// Draws m rows i.i.d. with probability w_i / sum(w) and scale (1/(m q_i))^{1/p}.
SampleSet build_sampler(const LewisWeights& w, std::size_t m, double p,
                        std::uint64_t seed);

/// Same draw from an arbitrary nonnegative weight vector.
SampleSet sample_by_weights(const DenseVector& weights, std::size_t m, double p,
                            std::uint64_t seed);

/// m rows uniformly with replacement, scale (n/m)^{1/p}.
SampleSet uniform_sampler(std::size_t n, std::size_t m, double p, std::uint64_t seed);

}  // namespace lpcoreset
