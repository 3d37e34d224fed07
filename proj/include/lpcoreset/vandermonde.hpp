#pragma once

#include <cstdint>

#include "lpcoreset/linalg.hpp"
#include "lpcoreset/sampling_pipeline.hpp"

namespace lpcoreset {

/// Widest extended matrix any pipeline will materialize.
inline constexpr std::size_t kMaxExtendedWidth = 4096;

/// 2^r <= p < 2^{r+1}, q = p / 2^r in [1, 2), d' = 2^r (d-1) + 1 extended columns.
/// d'' is the per-group width: d' by default, 2^{2r}(d-1)+1 with wide groups.
struct ExtensionPlan {
  int r = 0;
  double q = 1.0;
  std::size_t d_prime = 1;
  std::size_t d_dprime = 1;
};

ExtensionPlan plan_extension(std::size_t d, double p, bool wide_groups = false);

/// Same nodes, degree d'. Row i linearizes <a_i, x>^{2^r} against poly_power_coeffs(x, r).
VandermondeSpec extend_vandermonde(const VandermondeSpec& spec, const ExtensionPlan& plan);

/// Coefficients of (sum_j x_j z^j)^{2^r} in z, by r rounds of self-convolution.
DenseVector poly_power_coeffs(const DenseVector& x, int r);

struct VanderOptions : PipelineOptions {
  bool wide_groups = false;
};

PipelineResult solve_vandermonde_lp(const VandermondeSpec& spec, const DenseVector& b, double p,
                                    double eps, std::uint64_t seed,
                                    const VanderOptions& options = {});

/// l_inf fit through the l_p pipeline at p = linf_exponent(n, eps).
/// `value` in the result is the l_inf residual.
PipelineResult solve_vandermonde_linf(const VandermondeSpec& spec, const DenseVector& b,
                                      double eps, std::uint64_t seed,
                                      const VanderOptions& options = {});

}  // namespace lpcoreset
