#include "lpcoreset/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>

#include "lpcoreset/lewis.hpp"
#include "lpcoreset/lp_solver.hpp"
#include "lpcoreset/random.hpp"
#include "lpcoreset/structured.hpp"
#include "lpcoreset/vandermonde.hpp"

namespace lpcoreset {

const char* method_name(Method m) { return m == Method::Lewis ? "lewis" : "uniform"; }

bool TrialRecord::failed() const { return std::isnan(eps_empirical); }

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::pair<VandermondeSpec, DenseVector> gen_vander_experiment(std::size_t n, std::size_t d,
                                                              double noise_sd, std::uint64_t seed,
                                                              int target_power, double clip) {
  if (n < d) throw InvalidParameter("need at least d nodes");
  if (noise_sd < 0.0) throw InvalidParameter("noise_sd must be nonnegative");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VandermondeSpec spec{std::vector<double>(n), d};
  DenseVector b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double t = normal(rng);
    if (clip > 0.0) t = std::clamp(t, -clip, clip);
    spec.nodes[i] = t;
  }
  for (std::size_t i = 0; i < n; ++i)
    b[static_cast<Eigen::Index>(i)] = std::pow(spec.nodes[i], target_power) + noise_sd * normal(rng);
  return {std::move(spec), std::move(b)};
}

std::pair<DenseMatrix, DenseVector> gen_unstructured_experiment(std::size_t n, std::uint64_t seed) {
  if (n < 200) throw InvalidParameter("unstructured construction needs n >= 200");
  constexpr Eigen::Index kTop = 100;
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(n);
  DenseMatrix a = DenseMatrix::Zero(rows, 10);
  for (Eigen::Index i = 0; i < kTop; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) a(i, j) = normal(rng);
  for (Eigen::Index i = kTop; i < rows; ++i)
    for (Eigen::Index j = 6; j < 10; ++j) a(i, j) = normal(rng);
  DenseVector x(10);
  for (Eigen::Index j = 0; j < 10; ++j) x[j] = (j < 6 ? 100.0 : 1.0) * normal(rng);
  DenseVector b = a * x;
  for (Eigen::Index i = 0; i < rows; ++i) b[i] += normal(rng);
  return {std::move(a), std::move(b)};
}

SweepConfig preset(const std::string& experiment, const std::string& scale, bool noise_is_sd) {
  if (experiment != "vander-p" && experiment != "vander-m" && experiment != "unstructured")
    throw InvalidParameter("unknown experiment '" + experiment + "'");
  if (scale != "desk" && scale != "paper") throw InvalidParameter("unknown scale '" + scale + "'");
  SweepConfig c;
  c.experiment = experiment;
  c.scale = scale;
  const bool paper = scale == "paper";
  if (experiment == "unstructured") {
    c.n = paper ? 25000 : 5000;
    c.d = 10;
    c.target_power = 0;
    c.noise_sd = 1.0;
    c.clip = 0.0;
    c.p_grid = {6};
    c.m_grid = paper ? std::vector<std::size_t>{10, 25, 50, 100, 250, 500, 1000}
                     : std::vector<std::size_t>{25, 50, 100, 250, 500};
    c.trials = 50;
    return c;
  }
  if (paper) {
    c.n = 25000;
    c.d = 20;
    c.target_power = 10;
    c.noise_sd = noise_is_sd ? 1e10 : 1e5;
    c.clip = 0.0;
    c.trials = 30;
  }
  if (experiment == "vander-p") {
    if (paper) {
      c.p_grid.clear();
      for (int p = 2; p <= 25; ++p) c.p_grid.push_back(p);
      c.m_grid = {1000};
    }
  } else {
    c.p_grid = {6};
    c.m_grid = paper ? std::vector<std::size_t>{100, 250, 500, 1000, 2000, 3000}
                     : std::vector<std::size_t>{100, 200, 400, 800, 1600, 3000};
  }
  return c;
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LPCORESET_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

namespace {

// Runs job(i) for i in [0, count) on a small pool; results are indexed by i so
// the schedule never affects the output.
template <typename Job>
void run_jobs(std::size_t count, unsigned threads, const Job& job) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) job(i);
  };
  const unsigned pool = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
  std::vector<std::thread> workers;
  for (unsigned t = 1; t < pool; ++t) workers.emplace_back(worker);
  worker();
  for (auto& w : workers) w.join();
}

double relative_error(double value, double opt, double b_norm) {
  const double denom = opt > 1e-12 * b_norm ? opt : b_norm;
  return (value - opt) / denom;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SampleSet uniform_or_all(std::size_t n, std::size_t m, double p, std::uint64_t seed) {
  return m >= n ? SampleSet::identity(n) : uniform_sampler(n, m, p, seed);
}

double subsample_value(const DenseMatrix& a, const DenseVector& b, const SampleSet& s, double p,
                       double tol) {
  const auto [sa, sb] = apply_sample(s, a, b);
  const LpFit fit = solve_lp(sa, sb, p, tol);
  return lp_norm(a * fit.x - b, p);
}

void check_config(const SweepConfig& c) {
  if (c.p_grid.empty() || c.m_grid.empty()) throw InvalidParameter("empty sweep grid");
  if (c.trials == 0) throw InvalidParameter("trials must be positive");
  for (std::size_t m : c.m_grid)
    if (m == 0) throw InvalidParameter("sample sizes must be positive");
  for (double p : c.p_grid)
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidParameter("sweep p must be finite and >= 1");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<TrialRecord> run_vander_sweep(const SweepConfig& config) {
  check_config(config);
  const bool over_p = config.experiment == "vander-p";
  const std::size_t grid = over_p ? config.p_grid.size() : config.m_grid.size();
  const std::size_t jobs = grid * config.trials;
  std::vector<TrialRecord> records(2 * jobs);

  run_jobs(jobs, worker_count(config.threads), [&](std::size_t job) {
    const std::size_t g = job / config.trials;
    const std::size_t t = job % config.trials;
    const double p = over_p ? config.p_grid[g] : config.p_grid.front();
    const std::size_t m = over_p ? config.m_grid.front() : config.m_grid[g];
    // Data depends on the trial only, so every grid point sees the same instances.
    const std::uint64_t data_seed = derive_seed(config.seed, {0, t});
    const std::uint64_t trial_seed = derive_seed(config.seed, {g + 1, t});

    TrialRecord lewis{config.experiment, Method::Lewis, p, m, t, trial_seed, kNaN, 0.0};
    TrialRecord uniform{config.experiment, Method::Uniform, p, m, t, trial_seed, kNaN, 0.0};
    try {
      const auto [spec, b] = gen_vander_experiment(config.n, config.d, config.noise_sd, data_seed,
                                                   config.target_power, config.clip);
      const DenseMatrix a = materialize(spec);
      const double opt = solve_lp(a, b, p, config.opt_tol).value;
      const double b_norm = lp_norm(b, p);

      auto start = std::chrono::steady_clock::now();
      VanderOptions options;
      options.m1 = m;
      options.m2 = m;
      options.round = config.round;
      options.lewis_iterations = config.lewis_iterations;
      options.final_tol = config.solve_tol;
      const PipelineResult fit =
          solve_vandermonde_lp(spec, b, p, config.eps, derive_seed(trial_seed, {1}), options);
      lewis.eps_empirical = relative_error(fit.value, opt, b_norm);
      lewis.wall_time_s = seconds_since(start);

      start = std::chrono::steady_clock::now();
      const SampleSet s = uniform_or_all(config.n, m, p, derive_seed(trial_seed, {2}));
      uniform.eps_empirical = relative_error(subsample_value(a, b, s, p, config.solve_tol), opt, b_norm);
      uniform.wall_time_s = seconds_since(start);
    } catch (const Error& e) {
      std::cerr << "warning: trial " << t << " at grid point " << g << " failed: " << e.what() << "\n";
    }
    if (!config.timing) lewis.wall_time_s = uniform.wall_time_s = 0.0;
    records[2 * job] = std::move(lewis);
    records[2 * job + 1] = std::move(uniform);
  });
  return records;
}

std::vector<TrialRecord> run_unstructured_sweep(const SweepConfig& config) {
  check_config(config);
  const double p = config.p_grid.front();
  const auto instance = gen_unstructured_experiment(config.n, derive_seed(config.seed, {0}));
  const DenseMatrix& a = instance.first;
  const DenseVector& b = instance.second;
  const double opt = solve_lp(a, b, p, config.opt_tol).value;
  const double b_norm = lp_norm(b, p);

  // One instance for the whole experiment, so the stage-one Lewis weights are
  // computed once and only the draws vary between trials.
  LewisWeights weights;
  if (!config.round) {
    if (p >= 4.0) {
      const TensorPlan plan = plan_tensor(static_cast<std::size_t>(a.cols()), p);
      weights = approx_lewis_weights(extend_tensor(a, plan), plan.q, config.lewis_iterations);
    } else {
      weights = approx_lewis_weights(a, p, config.lewis_iterations);
    }
  }

  const std::size_t jobs = config.m_grid.size() * config.trials;
  std::vector<TrialRecord> records(2 * jobs);
  run_jobs(jobs, worker_count(config.threads), [&](std::size_t job) {
    const std::size_t g = job / config.trials;
    const std::size_t t = job % config.trials;
    const std::size_t m = config.m_grid[g];
    const std::uint64_t trial_seed = derive_seed(config.seed, {g + 1, t});

    TrialRecord lewis{config.experiment, Method::Lewis, p, m, t, trial_seed, kNaN, 0.0};
    TrialRecord uniform{config.experiment, Method::Uniform, p, m, t, trial_seed, kNaN, 0.0};
    try {
      auto start = std::chrono::steady_clock::now();
      const std::uint64_t lewis_seed = derive_seed(trial_seed, {1});
      double value = 0.0;
      if (config.round) {
        PipelineOptions options;
        options.m1 = m;
        options.m2 = m;
        options.lewis_iterations = config.lewis_iterations;
        options.final_tol = config.solve_tol;
        value = solve_dense_lp(a, b, p, config.eps, lewis_seed, options).value;
      } else {
        const SampleSet s = m >= config.n ? SampleSet::identity(config.n)
                                          : build_sampler(weights, m, p, lewis_seed);
        value = subsample_value(a, b, s, p, config.solve_tol);
      }
      lewis.eps_empirical = relative_error(value, opt, b_norm);
      lewis.wall_time_s = seconds_since(start);

      start = std::chrono::steady_clock::now();
      const SampleSet s = uniform_or_all(config.n, m, p, derive_seed(trial_seed, {2}));
      uniform.eps_empirical = relative_error(subsample_value(a, b, s, p, config.solve_tol), opt, b_norm);
      uniform.wall_time_s = seconds_since(start);
    } catch (const Error& e) {
      std::cerr << "warning: trial " << t << " at m = " << m << " failed: " << e.what() << "\n";
    }
    if (!config.timing) lewis.wall_time_s = uniform.wall_time_s = 0.0;
    records[2 * job] = std::move(lewis);
    records[2 * job + 1] = std::move(uniform);
  });
  return records;
}

std::vector<TrialRecord> run_experiment(const SweepConfig& config) {
  if (config.experiment == "unstructured") return run_unstructured_sweep(config);
  if (config.experiment == "vander-p" || config.experiment == "vander-m") return run_vander_sweep(config);
  throw InvalidParameter("unknown experiment '" + config.experiment + "'");
}

std::vector<QuantileSummary> aggregate(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<std::string, int, double>;
  std::map<Key, std::pair<std::vector<double>, std::size_t>> groups;
  for (const auto& r : records) {
    const double key = r.experiment == "vander-p" ? r.p : static_cast<double>(r.m);
    auto& slot = groups[{r.experiment, static_cast<int>(r.method), key}];
    if (r.failed())
      ++slot.second;
    else
      slot.first.push_back(r.eps_empirical);
  }
  std::vector<QuantileSummary> out;
  for (const auto& [key, slot] : groups) {
    const auto& [experiment, method, k] = key;
    if (slot.first.empty()) {
      std::cerr << "warning: no successful trials for " << experiment << " key " << k << "\n";
      continue;
    }
    QuantileSummary s;
    s.experiment = experiment;
    s.method = static_cast<Method>(method);
    s.key = k;
    s.median = quantile(slot.first, 0.5);
    s.q25 = quantile(slot.first, 0.25);
    s.q75 = quantile(slot.first, 0.75);
    s.count = slot.first.size();
    s.failed = slot.second;
    out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const QuantileSummary& x, const QuantileSummary& y) {
    return std::tie(x.experiment, x.key, x.method) < std::tie(y.experiment, y.key, y.method);
  });
  return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt("%.10g", static_cast<double>(v[i]));
  }
  return s;
}

void write_header(std::ostream& out, const SweepConfig& config) {
  for (const auto& [k, v] : describe(config)) out << "# " << k << '=' << v << '\n';
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("spearman needs two equal samples of size >= 2");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::pair<std::string, std::string>> describe(const SweepConfig& c) {
  return {
      {"experiment", c.experiment},
      {"scale", c.scale},
      {"n", std::to_string(c.n)},
      {"d", std::to_string(c.d)},
      {"target_power", std::to_string(c.target_power)},
      {"noise_sd", fmt("%.10g", c.noise_sd)},
      {"clip", fmt("%.10g", c.clip)},
      {"p_grid", join(c.p_grid)},
      {"m_grid", join(c.m_grid)},
      {"trials", std::to_string(c.trials)},
      {"seed", std::to_string(c.seed)},
      {"eps", fmt("%.10g", c.eps)},
      {"round", c.round ? "true" : "false"},
      {"lewis_iterations", std::to_string(c.lewis_iterations)},
      {"opt_tol", fmt("%.10g", c.opt_tol)},
      {"solve_tol", fmt("%.10g", c.solve_tol)},
      {"timing", c.timing ? "true" : "false"},
  };
}

void write_trials_csv(std::ostream& out, const SweepConfig& config,
                      const std::vector<TrialRecord>& records) {
  write_header(out, config);
  out << "experiment,method,p,m,trial,seed,eps_empirical,wall_time_s\n";
  for (const auto& r : records) {
    out << r.experiment << ',' << method_name(r.method) << ',' << fmt("%.10g", r.p) << ',' << r.m
        << ',' << r.trial << ',' << r.seed << ',' << (r.failed() ? "nan" : fmt("%.12g", r.eps_empirical))
        << ',' << fmt("%.6f", r.wall_time_s) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SweepConfig& config,
                       const std::vector<QuantileSummary>& summary) {
  write_header(out, config);
  out << "experiment,method,key,median,q25,q75,count\n";
  for (const auto& s : summary) {
    out << s.experiment << ',' << method_name(s.method) << ',' << fmt("%.10g", s.key) << ','
        << fmt("%.12g", s.median) << ',' << fmt("%.12g", s.q25) << ',' << fmt("%.12g", s.q75) << ','
        << s.count << '\n';
  }
}

void write_svg(std::ostream& out, const SweepConfig& config,
               const std::vector<QuantileSummary>& summary) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
  const double kFloor = 1e-12;
  auto ly = [=](double v) { return std::log10(std::max(v, kFloor)); };

  double xmin = kInfinity, xmax = -kInfinity, ymin = kInfinity, ymax = -kInfinity;
  for (const auto& s : summary) {
    xmin = std::min(xmin, s.key);
    xmax = std::max(xmax, s.key);
    ymin = std::min(ymin, ly(s.q25));
    ymax = std::max(ymax, ly(s.q75));
  }
  if (summary.empty()) xmin = ymin = 0.0, xmax = ymax = 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1.0);
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - ymin) / (ymax - ymin) * (kH - kTop - kBottom); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << config.experiment
      << " (" << config.scale << ")</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"black\"/>\n";
  for (double e = ymin; e <= ymax; e += 1.0)
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e"
        << e << "</text>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << (config.experiment == "vander-p" ? "p" : "m") << " (" << fmt("%g", xmin) << " to "
      << fmt("%g", xmax) << ")</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728"};
  for (Method method : {Method::Lewis, Method::Uniform}) {
    const char* color = colors[static_cast<int>(method)];
    std::string points;
    for (const auto& s : summary) {
      if (s.method != method) continue;
      points += fmt("%.2f", px(s.key)) + "," + fmt("%.2f", py(ly(s.median))) + " ";
      out << "<line x1=\"" << px(s.key) << "\" y1=\"" << py(ly(s.q25)) << "\" x2=\"" << px(s.key)
          << "\" y2=\"" << py(ly(s.q75)) << "\" stroke=\"" << color << "\"/>\n";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << points
        << "\"/>\n";
    out << "<text x=\"" << kW - kRight - 80 << "\" y=\"" << (method == Method::Lewis ? 40 : 56)
        << "\" fill=\"" << color << "\" font-size=\"12\">" << method_name(method) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lpcoreset
