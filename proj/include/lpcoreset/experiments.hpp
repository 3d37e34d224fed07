#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lpcoreset/linalg.hpp"

namespace lpcoreset {

enum class Method { Lewis, Uniform };

const char* method_name(Method m);

struct TrialRecord {
  std::string experiment;
  Method method = Method::Lewis;
  double p = 0.0;
  std::size_t m = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  /// (||A x - b||_p - OPT) / OPT; NaN for a failed trial.
  double eps_empirical = 0.0;
  double wall_time_s = 0.0;

  bool failed() const;
};

struct QuantileSummary {
  std::string experiment;
  Method method = Method::Lewis;
  double key = 0.0;  // p for vander-p, m otherwise
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  std::size_t count = 0;
  std::size_t failed = 0;
};

/// Linear interpolation between order statistics: position prob * (n - 1).
double quantile(std::vector<double> values, double prob);

/// Nodes i.i.d. N(0,1), optionally clipped to |t| <= clip (clip <= 0 disables),
/// b_i = t_i^target_power + N(0, noise_sd^2).
std::pair<VandermondeSpec, DenseVector> gen_vander_experiment(std::size_t n, std::size_t d,
                                                              double noise_sd, std::uint64_t seed,
                                                              int target_power, double clip = 0.0);

/// Block-diagonal [G1 0; 0 G2] with G1 100 x 6 and G2 (n-100) x 4 standard normal,
/// x* with sd 100 on the first six entries and sd 1 on the last four, b = A x* + z.
std::pair<DenseMatrix, DenseVector> gen_unstructured_experiment(std::size_t n, std::uint64_t seed);

struct SweepConfig {
  std::string experiment = "vander-p";  // vander-p | vander-m | unstructured
  std::string scale = "desk";
  std::size_t n = 5000;
  std::size_t d = 10;
  int target_power = 5;
  double noise_sd = 316.22776601683796;
  double clip = 6.0;
  std::vector<double> p_grid{2, 4, 8, 16};
  std::vector<std::size_t> m_grid{800};
  std::size_t trials = 15;
  std::uint64_t seed = 1;
  double eps = 0.1;
  bool round = false;
  int lewis_iterations = 30;
  double opt_tol = 1e-6;
  double solve_tol = 1e-6;
  /// When false wall times are written as 0 so output is byte-reproducible.
  bool timing = true;
  /// 0 selects hardware concurrency, further capped by LPCORESET_THREADS.
  unsigned threads = 0;
};

/// Desk- or paper-scale defaults for one of the three experiments. For the paper
/// Vandermonde presets, `noise_is_sd` reads the noise level 1e10 as a standard
/// deviation rather than a variance.
SweepConfig preset(const std::string& experiment, const std::string& scale,
                   bool noise_is_sd = false);

std::vector<TrialRecord> run_vander_sweep(const SweepConfig& config);
std::vector<TrialRecord> run_unstructured_sweep(const SweepConfig& config);
std::vector<TrialRecord> run_experiment(const SweepConfig& config);

/// Groups by (experiment, method, key) in sorted key order; failed trials are
/// counted but excluded from the quantiles.
std::vector<QuantileSummary> aggregate(const std::vector<TrialRecord>& records);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Resolved configuration as ordered key=value pairs.
std::vector<std::pair<std::string, std::string>> describe(const SweepConfig& config);

void write_trials_csv(std::ostream& out, const SweepConfig& config,
                      const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& out, const SweepConfig& config,
                       const std::vector<QuantileSummary>& summary);
/// Log-scale plot of median eps_empirical with quartile bars, one series per method.
void write_svg(std::ostream& out, const SweepConfig& config,
               const std::vector<QuantileSummary>& summary);

/// Worker count: min(requested or hardware concurrency, LPCORESET_THREADS), at least 1.
unsigned worker_count(unsigned requested);

}  // namespace lpcoreset
