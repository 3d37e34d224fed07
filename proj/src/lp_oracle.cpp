#include "lpcoreset/lp_oracle.hpp"

#include <cmath>

namespace lpcoreset {

double golden_section_min(const std::function<double(double)>& f, double center,
                          double rel_tol) {
  const double h0 = 0.1 * (1.0 + std::abs(center));
  double c = center;
  double fc = f(c);

  double h = h0;
  while (f(c + h) < fc) {
    c += h;
    fc = f(c);
    h *= 2.0;
  }
  double hi = c + h;
  h = h0;
  while (f(c - h) < fc) {
    c -= h;
    fc = f(c);
    h *= 2.0;
  }
  double lo = c - h;

  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > rel_tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

LpFit oracle_solve(const DenseMatrix& a, const DenseVector& b, double p) {
  if (a.cols() > 3) throw UnsupportedSize("oracle_solve supports at most 3 columns");
  if (a.cols() < 1) throw InvalidInput("oracle_solve needs at least one column");
  if (a.rows() != b.size()) throw InvalidInput("matrix rows and b length differ");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("oracle_solve requires finite p >= 1");

  const Eigen::Index d = a.cols();
  const DenseVector start = solve_l2(a, b);
  DenseVector x = start;

  auto objective = [&](const DenseVector& v) { return lp_norm(a * v - b, p); };

  // minimize over coordinate k given x[0..k-1]; inner coordinates are re-solved
  // for every probe, so the returned value is the partial minimum.
  std::function<double(Eigen::Index)> partial_min = [&](Eigen::Index k) -> double {
    auto along = [&](double t) {
      x[k] = t;
      return k + 1 == d ? objective(x) : partial_min(k + 1);
    };
    const double best = golden_section_min(along, start[k]);
    return along(best);
  };
  partial_min(0);

  LpFit fit;
  fit.x = x;
  fit.value = objective(x);
  return fit;
}

}  // namespace lpcoreset
