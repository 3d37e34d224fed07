#include "lpcoreset/sampling_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpcoreset/lp_solver.hpp"
#include "lpcoreset/random.hpp"
#include "lpcoreset/round_trunc.hpp"

namespace lpcoreset {

std::size_t default_stage1_samples(std::size_t width) {
  const double w = static_cast<double>(width);
  return static_cast<std::size_t>(std::ceil(10.0 * w * std::max(1.0, std::log(w))));
}

std::size_t default_group_samples(std::size_t width, double eps) {
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(default_stage1_samples(width)) / (eps * eps)));
}

SampleSet lewis_sample(const DenseMatrix& features, double q, int iterations,
                       std::size_t m, double p, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (m >= n) return SampleSet::identity(n);
  const LewisWeights w = approx_lewis_weights(features, q, iterations);
  return build_sampler(w, m, p, seed);
}

namespace {

enum : std::uint64_t { kStageOneTag = 1, kGroupTag = 1000 };

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

PipelineResult run_sampling_pipeline(const SamplingProblem& problem,
                                     const PipelineOptions& options) {
  const DenseMatrix& a = *problem.a;
  const DenseVector& b = *problem.b;
  const double p = problem.p;
  if (a.rows() != b.size()) throw InvalidInput("matrix rows and b length differ");
  if (!(problem.eps > 0.0 && problem.eps < 1.0)) throw InvalidParameter("eps must lie in (0, 1)");
  if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("p must be finite and >= 1");
  const auto n = static_cast<std::size_t>(a.rows());
  const double final_tol = std::min(options.final_tol, problem.eps);

  PipelineResult result;
  result.p = p;

  const std::vector<std::size_t> everything = all_rows(n);
  const DenseMatrix stage1_features = problem.features(everything, std::nullopt);
  const std::size_t m1 =
      options.m1 ? options.m1 : default_stage1_samples(static_cast<std::size_t>(stage1_features.cols()));
  const SampleSet first = lewis_sample(stage1_features, problem.q, options.lewis_iterations, m1, p,
                                       derive_seed(problem.seed, {kStageOneTag}));
  result.stage1_rows = first.size();

  if (!options.round) {
    const auto [sa, sb] = apply_sample(first, a, b);
    const LpFit fit = solve_lp(sa, sb, p, final_tol);
    result.x = fit.x;
    result.converged = fit.converged;
    result.value = lp_norm(a * result.x - b, p);
    return result;
  }

  // Constant-factor solution from the stage-one sample, then work in residual
  // coordinates b' = b - A x~.
  const auto [sa, sb] = apply_sample(first, a, b);
  const DenseVector x_rough = solve_lp(sa, sb, p, options.stage1_tol).x;
  const DenseVector residual = b - a * x_rough;

  const GroupPartition groups = partition_groups(round_trunc(residual, problem.eps));
  result.groups = groups.size();

  SampleSet stacked;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& rows = groups.groups[k];
    if (rows.empty()) continue;
    const DenseMatrix group_features = problem.features(rows, groups.values[k]);
    const std::size_t m2 = options.m2 ? options.m2
                                      : default_group_samples(static_cast<std::size_t>(group_features.cols()),
                                                              problem.eps);
    const SampleSet local = lewis_sample(group_features, problem.q, options.lewis_iterations, m2, p,
                                         derive_seed(problem.seed, {kGroupTag, k}));
    for (std::size_t j = 0; j < local.size(); ++j) {
      stacked.indices.push_back(rows[local.indices[j]]);
      stacked.scales.push_back(local.scales[j]);
    }
  }
  result.stage2_rows = stacked.size();

  const auto [ta, tb] = apply_sample(stacked, a, residual);
  const LpFit fit = solve_lp(ta, tb, p, final_tol);
  result.x = x_rough + fit.x;
  result.converged = fit.converged;
  result.value = lp_norm(a * result.x - b, p);
  return result;
}

}  // namespace lpcoreset
