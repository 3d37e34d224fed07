#pragma once

#include <functional>

#include "lpcoreset/lp_solver.hpp"

namespace lpcoreset {

/// Golden-section minimization of a convex function of one variable. The
/// bracket is grown outward from `center` in doubling steps until the function
/// rises on both sides.
double golden_section_min(const std::function<double(double)>& f, double center,
                          double rel_tol = 1e-10);

/// Brute-force global minimizer of ||Ax - b||_p for at most three columns.
/// Nested golden-section search: the outer coordinate is minimized over the
/// partial minimum of the inner ones, which stays convex. Independent of IRLS.
LpFit oracle_solve(const DenseMatrix& a, const DenseVector& b, double p);

}  // namespace lpcoreset
