#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "lpcoreset/lewis.hpp"
#include "lpcoreset/linalg.hpp"

namespace lpcoreset {

/// Caller knobs shared by every structured pipeline. Zero sample sizes select the
/// defaults 10 w ln w (stage one) and 10 w ln w / eps^2 (per group), where w is
/// the width of the extended matrix being sampled.
struct PipelineOptions {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  /// When false the residual rounding stage is skipped: the stage-one sample is
  /// solved directly to the final tolerance.
  bool round = true;
  int lewis_iterations = kDefaultLewisIterations;
  /// Constant-factor solve on the stage-one sample.
  double stage1_tol = 0.5;
  /// Final subsampled solve runs at min(final_tol, eps).
  double final_tol = 1e-4;
};

struct PipelineResult {
  DenseVector x;
  /// ||A x - b||_p on the full problem (l_inf residual for the l_inf wrappers).
  double value = 0.0;
  double p = 0.0;
  std::size_t stage1_rows = 0;
  std::size_t stage2_rows = 0;
  std::size_t groups = 0;
  bool converged = true;
};

/// Extended-feature builder for a subset of rows. `offset` is the common rounded
/// residual value t_k of the group, or nullopt for stage one.
using FeatureBuilder =
    std::function<DenseMatrix(std::span<const std::size_t> rows, std::optional<double> offset)>;

struct SamplingProblem {
  const DenseMatrix* a = nullptr;
  const DenseVector* b = nullptr;
  double p = 2.0;
  double q = 2.0;
  double eps = 0.25;
  std::uint64_t seed = 0;
  FeatureBuilder features;
};

std::size_t default_stage1_samples(std::size_t width);
std::size_t default_group_samples(std::size_t width, double eps);

/// Lewis-weight sample of m rows of `features` (identity when m >= rows).
SampleSet lewis_sample(const DenseMatrix& features, double q, int iterations,
                       std::size_t m, double p, std::uint64_t seed);

PipelineResult run_sampling_pipeline(const SamplingProblem& problem,
                                     const PipelineOptions& options);

}  // namespace lpcoreset
