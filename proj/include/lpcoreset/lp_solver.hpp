#pragma once

#include <vector>

#include "lpcoreset/linalg.hpp"

namespace lpcoreset {

struct LpFit {
  DenseVector x;
  /// ||A x - b||_p at the returned x.
  double value = 0.0;
  int iterations = 0;
  /// False when the iteration cap was hit; x is then the best iterate seen.
  bool converged = true;
};

/// Per-iteration record of the smoothed objective, for descent diagnostics.
struct IrlsStep {
  double delta;
  double log_objective;  // log of sum (r_i^2 + delta)^{p/2}
  double step;           // accepted damping factor, 0 if no decrease was found
};

struct LpSolveOptions {
  int max_iterations = 500;
  std::vector<IrlsStep>* trace = nullptr;
};

/// Least squares via column-pivoted QR on the equilibrated matrix.
DenseVector solve_l2(const DenseMatrix& a, const DenseVector& b);

/// argmin sum_i w_i (a_i x - b_i)^2 for nonnegative w.
DenseVector solve_weighted_l2(const DenseMatrix& a, const DenseVector& b,
                              const DenseVector& w);

/// (1+tol)-approximate min ||Ax - b||_p by damped, smoothed IRLS.
LpFit solve_lp(const DenseMatrix& a, const DenseVector& b, double p, double tol,
               const LpSolveOptions& options = {});

/// Exponent used to approximate l_inf by l_p on n rows: ceil(3 ln n / eps), capped.
double linf_exponent(std::size_t n, double eps, bool* capped = nullptr);

inline constexpr double kMaxLinfExponent = 128.0;

/// min ||Ax - b||_inf through solve_lp at p = linf_exponent(n, eps).
/// `value` in the result is the l_inf residual.
LpFit solve_linf(const DenseMatrix& a, const DenseVector& b, double eps);

/// sum (r_i^2 + delta)^{p/2} with r = Ax - b, and its gradient in x.
double smoothed_objective(const DenseMatrix& a, const DenseVector& b,
                          const DenseVector& x, double p, double delta);
DenseVector smoothed_gradient(const DenseMatrix& a, const DenseVector& b,
                              const DenseVector& x, double p, double delta);

}  // namespace lpcoreset
