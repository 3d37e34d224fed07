#include "lpcoreset/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace lpcoreset {

namespace {

// Pivots below this fraction of the largest one are treated as zero, so rank
// deficient problems get a basic solution instead of amplified round-off.
constexpr double kRankTolerance = 1e-12;

}  // namespace

DenseVector solve_l2(const DenseMatrix& a, const DenseVector& b) {
  if (a.rows() != b.size()) throw InvalidInput("matrix rows and b length differ");
  if (a.cols() == 0) return DenseVector(0);
  Eigen::ArrayXd scale = a.colwise().norm().transpose().array();
  for (Eigen::Index j = 0; j < scale.size(); ++j) scale[j] = scale[j] > 0.0 ? 1.0 / scale[j] : 1.0;
  const Eigen::MatrixXd scaled = a * scale.matrix().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled.rows(), scaled.cols());
  qr.setThreshold(kRankTolerance);
  qr.compute(scaled);

  // Basic solution on the leading rank x rank block of R; free variables are zero.
  const Eigen::Index rank = qr.rank();
  const Eigen::VectorXd c = qr.householderQ().adjoint() * b;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  z.head(rank) = qr.matrixQR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>().solve(c.head(rank));
  DenseVector x = ((qr.colsPermutation() * z).array() * scale).matrix();
  if (!x.allFinite()) throw NumericalFailure("least-squares solve produced non-finite values");
  return x;
}

DenseVector solve_weighted_l2(const DenseMatrix& a, const DenseVector& b,
                              const DenseVector& w) {
  if (w.size() != a.rows() || b.size() != a.rows())
    throw InvalidInput("weighted least squares dimension mismatch");
  const Eigen::ArrayXd root = w.array().max(0.0).sqrt();
  const DenseMatrix wa = root.matrix().asDiagonal() * a;
  const DenseVector wb = (root * b.array()).matrix();
  return solve_l2(wa, wb);
}

namespace {

// log sum (r_i^2 + delta)^{p/2}, max-scaled.
double log_smoothed(const DenseVector& r, double p, double delta) {
  const Eigen::ArrayXd s = r.array().square() + delta;
  const double top = s.maxCoeff();
  if (!(top > 0.0)) return -kInfinity;
  return 0.5 * p * std::log(top) + std::log((s / top).pow(0.5 * p).sum());
}

}  // namespace

double smoothed_objective(const DenseMatrix& a, const DenseVector& b,
                          const DenseVector& x, double p, double delta) {
  const DenseVector r = a * x - b;
  return (r.array().square() + delta).pow(0.5 * p).sum();
}

DenseVector smoothed_gradient(const DenseMatrix& a, const DenseVector& b,
                              const DenseVector& x, double p, double delta) {
  const DenseVector r = a * x - b;
  const Eigen::ArrayXd coef = p * (r.array().square() + delta).pow(0.5 * p - 1.0) * r.array();
  return a.transpose() * coef.matrix();
}

LpFit solve_lp(const DenseMatrix& a, const DenseVector& b, double p, double tol,
               const LpSolveOptions& options) {
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("solve_lp requires finite p >= 1");
  if (!(tol > 0.0 && tol <= 0.5)) throw InvalidParameter("solve_lp tolerance must lie in (0, 1/2]");
  if (a.rows() != b.size()) throw InvalidInput("matrix rows and b length differ");
  if (a.rows() == 0) throw InvalidInput("empty regression problem");

  const auto n = static_cast<double>(a.rows());
  LpFit fit;
  fit.x = solve_l2(a, b);
  DenseVector r = a * fit.x - b;
  fit.value = lp_norm(r, p);
  if (p == 2.0) return fit;

  const double exact_floor = 1e-15 * std::max(lp_norm(b, p), 1e-300);
  if (fit.value <= exact_floor) return fit;

  DenseVector x = fit.x;
  double delta = r.squaredNorm() / n;
  double log_f = log_smoothed(r, p, delta);
  const double stall_level = tol * tol / 8.0;
  int stalled = 0;
  fit.converged = false;

  for (int it = 1; it <= options.max_iterations; ++it) {
    fit.iterations = it;

    const Eigen::ArrayXd s = r.array().square() + delta;
    const Eigen::ArrayXd log_s = s.log();
    const double shift = (0.5 * p - 1.0) * (0.5 * p - 1.0 >= 0.0 ? log_s.maxCoeff() : log_s.minCoeff());
    const DenseVector w = ((0.5 * p - 1.0) * log_s - shift).exp().matrix();

    const DenseVector direction = solve_weighted_l2(a, b, w) - x;
    const DenseVector a_dir = a * direction;

    // Backtrack from eta = 1 to the first decrease, then keep halving while it improves.
    double eta = 1.0;
    double accepted = 0.0;
    double log_new = log_f;
    for (int k = 0; k < 60; ++k, eta *= 0.5) {
      const double trial = log_smoothed(r + eta * a_dir, p, delta);
      if (trial < log_new) {
        log_new = trial;
        accepted = eta;
      } else if (accepted > 0.0) {
        break;
      }
    }

    double decrease = 0.0;
    if (accepted > 0.0) {
      x += accepted * direction;
      r += accepted * a_dir;
      decrease = -std::expm1(log_new - log_f);
      log_f = log_new;
    }
    if (options.trace) options.trace->push_back({delta, log_f, accepted});

    const double value = lp_norm(r, p);
    if (value < fit.value) {
      fit.value = value;
      fit.x = x;
    }
    if (fit.value <= exact_floor) {
      fit.converged = true;
      break;
    }

    stalled = decrease < stall_level ? stalled + 1 : 0;
    if (stalled >= 3) {
      const double target = tol * tol * r.squaredNorm() / n;
      if (delta <= target) {
        fit.converged = true;
        break;
      }
      delta = std::max(delta / 10.0, target);
      log_f = log_smoothed(r, p, delta);
      stalled = 0;
    }
  }
  return fit;
}

double linf_exponent(std::size_t n, double eps, bool* capped) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("l_inf accuracy eps must lie in (0, 1)");
  double p = std::ceil(3.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 1))) / eps);
  p = std::max(p, 2.0);
  const bool hit = p > kMaxLinfExponent;
  if (capped) *capped = hit;
  return std::min(p, kMaxLinfExponent);
}

LpFit solve_linf(const DenseMatrix& a, const DenseVector& b, double eps) {
  bool capped = false;
  const double p = linf_exponent(static_cast<std::size_t>(a.rows()), eps, &capped);
  if (capped)
    std::cerr << "warning: l_inf exponent capped at p = " << kMaxLinfExponent << "\n";
  LpFit fit = solve_lp(a, b, p, 1e-4);
  fit.value = (a * fit.x - b).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace lpcoreset
