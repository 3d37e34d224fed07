#include "lpcoreset/vandermonde.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "lpcoreset/lp_solver.hpp"

namespace lpcoreset {

ExtensionPlan plan_extension(std::size_t d, double p, bool wide_groups) {
  if (d < 1) throw InvalidParameter("degree must be at least 1");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("p must be finite and >= 1");
  ExtensionPlan plan;
  double power = 1.0;
  while (2.0 * power <= p) {
    power *= 2.0;
    ++plan.r;
  }
  plan.q = p / power;
  const auto fold = static_cast<std::size_t>(power);
  plan.d_prime = fold * (d - 1) + 1;
  plan.d_dprime = wide_groups ? fold * fold * (d - 1) + 1 : plan.d_prime;
  return plan;
}

VandermondeSpec extend_vandermonde(const VandermondeSpec& spec, const ExtensionPlan& plan) {
  const ExtensionPlan expected = plan_extension(spec.degree, std::ldexp(plan.q, plan.r));
  if (expected.d_prime != plan.d_prime) throw InvalidParameter("extension plan does not match degree");
  return VandermondeSpec{spec.nodes, plan.d_prime};
}

DenseVector poly_power_coeffs(const DenseVector& x, int r) {
  if (r < 0) throw InvalidParameter("r must be nonnegative");
  if (x.size() == 0) throw InvalidInput("empty coefficient vector");
  DenseVector c = x;
  for (int round = 0; round < r; ++round) {
    const Eigen::Index len = c.size();
    DenseVector next = DenseVector::Zero(2 * len - 1);
    for (Eigen::Index i = 0; i < len; ++i)
      for (Eigen::Index j = 0; j < len; ++j) next[i + j] += c[i] * c[j];
    c = std::move(next);
  }
  return c;
}

namespace {

void check_width(std::size_t width) {
  if (width > kMaxExtendedWidth)
    throw UnsupportedSize("extended width " + std::to_string(width) + " exceeds cap " +
                          std::to_string(kMaxExtendedWidth));
}

// Nodes divided by max |t|. Scaling column j by c^j leaves Lewis weights unchanged
// and keeps high powers in range.
VandermondeSpec normalized(const VandermondeSpec& spec, std::size_t degree) {
  double top = 0.0;
  for (double t : spec.nodes) top = std::max(top, std::abs(t));
  VandermondeSpec out{spec.nodes, degree};
  if (top > 0.0)
    for (double& t : out.nodes) t /= top;
  return out;
}

}  // namespace

PipelineResult solve_vandermonde_lp(const VandermondeSpec& spec, const DenseVector& b, double p,
                                    double eps, std::uint64_t seed, const VanderOptions& options) {
  if (spec.rows() < spec.degree) throw InvalidInput("need at least as many nodes as the degree");
  if (static_cast<std::size_t>(b.size()) != spec.rows())
    throw InvalidInput("b length differs from the number of nodes");
  const ExtensionPlan plan = plan_extension(spec.degree, p, options.wide_groups);
  check_width(plan.d_prime);
  check_width(plan.d_dprime);

  const DenseMatrix a = materialize(spec);
  const VandermondeSpec stage1 = normalized(spec, plan.d_prime);
  const VandermondeSpec group = normalized(spec, plan.d_dprime);

  SamplingProblem problem;
  problem.a = &a;
  problem.b = &b;
  problem.p = p;
  problem.q = plan.q;
  problem.eps = eps;
  problem.seed = seed;
  problem.features = [&](std::span<const std::size_t> rows, std::optional<double> offset) {
    return materialize_rows(offset ? group : stage1, rows);
  };
  return run_sampling_pipeline(problem, options);
}

PipelineResult solve_vandermonde_linf(const VandermondeSpec& spec, const DenseVector& b,
                                      double eps, std::uint64_t seed,
                                      const VanderOptions& options) {
  bool capped = false;
  const double p = linf_exponent(spec.rows(), eps, &capped);
  if (capped)
    std::cerr << "warning: l_inf exponent capped at p = " << kMaxLinfExponent << "\n";
  PipelineResult result = solve_vandermonde_lp(spec, b, p, eps, seed, options);
  result.value = lp_norm(materialize(spec) * result.x - b, kInfinity);
  return result;
}

}  // namespace lpcoreset
