#include "lpcoreset/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lpcoreset/csv_io.hpp"
#include "lpcoreset/experiments.hpp"
#include "lpcoreset/lp_solver.hpp"
#include "lpcoreset/random.hpp"
#include "lpcoreset/structured.hpp"
#include "lpcoreset/vandermonde.hpp"

namespace lpcoreset {

namespace {

struct SolveArgs {
  std::string matrix, vandermonde, left, right, sparse, b, out;
  std::string p = "2";
  std::string structure = "auto";
  std::size_t degree = 0;
  std::size_t sparsity = 0;
  std::size_t m1 = 0, m2 = 0;
  std::size_t repeat = 1;
  double eps = 0.25;
  std::uint64_t seed = 0;
  int lewis_iterations = kDefaultLewisIterations;
  bool no_round = false;
  bool wide_groups = false;
};

struct ExperimentArgs {
  std::string name, scale = "desk", out, summary, svg, noise = "variance";
  std::string p_grid, m_grid;
  std::size_t trials = 0, n = 0;
  std::uint64_t seed = 1;
  int lewis_iterations = 0;
  bool no_timing = false;
  bool round = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_p(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return kInfinity;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("cannot parse p = '" + text + "'");
  }
  if (used != text.size() || !(p >= 1.0) || std::isinf(p))
    throw InvalidParameter("p must be a number >= 1 or 'inf'");
  return p;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<T>(std::stod(item)));
    } catch (const std::exception&) {
      throw InvalidParameter("cannot parse list entry '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidParameter("empty list");
  return out;
}

std::vector<double> to_std(const DenseVector& v) { return {v.data(), v.data() + v.size()}; }

std::string resolve_structure(const SolveArgs& a) {
  const int sources = !a.matrix.empty() + !a.vandermonde.empty() + !a.left.empty();
  if (sources != 1) throw InvalidParameter("give exactly one of --matrix, --vandermonde, --left/--right");
  std::string inferred = !a.vandermonde.empty() ? "vandermonde" : !a.left.empty() ? "lowrank+sparse" : "general";
  if (a.structure != "auto" && a.structure != inferred)
    throw InvalidParameter("--structure " + a.structure + " does not match the supplied inputs");
  return inferred;
}

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  const std::string structure = resolve_structure(args);
  const double p = parse_p(args.p);
  if (args.repeat == 0) throw InvalidParameter("--repeat must be positive");
  const DenseVector b = read_vector(args.b);

  VanderOptions options;
  options.m1 = args.m1;
  options.m2 = args.m2;
  options.round = !args.no_round;
  options.lewis_iterations = args.lewis_iterations;
  options.wide_groups = args.wide_groups;

  std::vector<std::pair<std::string, std::string>> config{
      {"structure", structure}, {"p", std::isinf(p) ? "inf" : fmt(p)}, {"eps", fmt(args.eps)},
      {"seed", std::to_string(args.seed)}, {"m1", args.m1 ? std::to_string(args.m1) : "auto"},
      {"m2", args.m2 ? std::to_string(args.m2) : "auto"}, {"round", options.round ? "true" : "false"},
      {"lewis_iterations", std::to_string(args.lewis_iterations)},
      {"repeat", std::to_string(args.repeat)}};

  std::function<PipelineResult(std::uint64_t)> run;
  VandermondeSpec spec;
  DenseMatrix a;
  LowRankPlusSparse ops;
  if (structure == "vandermonde") {
    if (args.degree == 0) throw InvalidParameter("--vandermonde needs --degree");
    spec = VandermondeSpec{to_std(read_vector(args.vandermonde)), args.degree};
    if (spec.rows() != static_cast<std::size_t>(b.size())) throw InvalidInput("b length differs from node count");
    config.emplace_back("degree", std::to_string(args.degree));
    config.emplace_back("wide_groups", args.wide_groups ? "true" : "false");
    run = [&](std::uint64_t seed) {
      return std::isinf(p) ? solve_vandermonde_linf(spec, b, args.eps, seed, options)
                           : solve_vandermonde_lp(spec, b, p, args.eps, seed, options);
    };
  } else if (structure == "lowrank+sparse") {
    if (args.right.empty()) throw InvalidParameter("--left needs --right");
    ops.left = read_matrix_csv(args.left);
    ops.right = read_matrix_csv(args.right);
    ops.sparse_rows.assign(ops.rows(), {});
    if (!args.sparse.empty()) ops.sparse_rows = read_sparse_triplets(args.sparse, ops.rows(), ops.cols());
    ops.sparsity = args.sparsity;
    for (const auto& row : ops.sparse_rows) ops.sparsity = std::max(ops.sparsity, row.size());
    config.emplace_back("sparsity", std::to_string(ops.sparsity));
    run = [&](std::uint64_t seed) {
      const double pp = std::isinf(p) ? linf_exponent(ops.rows(), args.eps) : p;
      PipelineResult r = solve_lowrank_sparse_lp(ops, b, pp, args.eps, seed, options);
      if (std::isinf(p)) r.value = lp_norm(ops.dense() * r.x - b, kInfinity);
      return r;
    };
  } else {
    a = read_matrix_csv(args.matrix);
    run = [&](std::uint64_t seed) {
      if (!std::isinf(p)) return solve_dense_lp(a, b, p, args.eps, seed, options);
      const LpFit fit = solve_linf(a, b, args.eps);
      PipelineResult r;
      r.x = fit.x;
      r.value = fit.value;
      r.p = kInfinity;
      r.stage1_rows = static_cast<std::size_t>(a.rows());
      r.converged = fit.converged;
      return r;
    };
  }

  PipelineResult best;
  bool have = false;
  for (std::size_t rep = 0; rep < args.repeat; ++rep) {
    const std::uint64_t seed = rep == 0 ? args.seed : derive_seed(args.seed, {rep});
    PipelineResult r = run(seed);
    if (!have || r.value < best.value) {
      best = std::move(r);
      have = true;
    }
  }

  out << "structure=" << structure << "\n"
      << "p=" << (std::isinf(p) ? std::string("inf") : fmt(p)) << "\n"
      << "exponent=" << fmt(best.p) << "\n"
      << "value=" << fmt(best.value) << "\n"
      << "stage1_rows=" << best.stage1_rows << "\n"
      << "stage2_rows=" << best.stage2_rows << "\n"
      << "groups=" << best.groups << "\n"
      << "converged=" << (best.converged ? "true" : "false") << "\n";
  config.emplace_back("value", fmt(best.value));
  if (args.out.empty()) {
    write_vector(out, best.x, config);
  } else {
    std::ofstream file(args.out);
    if (!file) throw InvalidInput("cannot write '" + args.out + "'");
    write_vector(file, best.x, config);
  }
  return kExitOk;
}

std::string default_summary_path(const std::string& trials_path) {
  const auto dot = trials_path.rfind('.');
  const auto slash = trials_path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return trials_path + "_summary.csv";
  return trials_path.substr(0, dot) + "_summary" + trials_path.substr(dot);
}

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  if (args.noise != "variance" && args.noise != "sd") throw InvalidParameter("--noise must be variance or sd");
  SweepConfig config = preset(args.name, args.scale, args.noise == "sd");
  if (args.trials) config.trials = args.trials;
  if (args.n) config.n = args.n;
  if (!args.p_grid.empty()) config.p_grid = parse_list<double>(args.p_grid);
  if (!args.m_grid.empty()) config.m_grid = parse_list<std::size_t>(args.m_grid);
  if (args.lewis_iterations) config.lewis_iterations = args.lewis_iterations;
  config.seed = args.seed;
  config.round = args.round;
  config.timing = !args.no_timing;

  const std::vector<TrialRecord> records = run_experiment(config);
  const std::vector<QuantileSummary> summary = aggregate(records);

  std::ofstream trials(args.out);
  if (!trials) throw InvalidInput("cannot write '" + args.out + "'");
  write_trials_csv(trials, config, records);
  const std::string summary_path = args.summary.empty() ? default_summary_path(args.out) : args.summary;
  std::ofstream summary_file(summary_path);
  if (!summary_file) throw InvalidInput("cannot write '" + summary_path + "'");
  write_summary_csv(summary_file, config, summary);
  if (!args.svg.empty()) {
    std::ofstream svg(args.svg);
    if (!svg) throw InvalidInput("cannot write '" + args.svg + "'");
    write_svg(svg, config, summary);
  }
  write_summary_csv(out, config, summary);
  return kExitOk;
}

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::NumericalFailure ? kExitSolverFailure : kExitBadInput;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lewis-weight coresets for structured l_p regression"};
  app.require_subcommand(1);

  SolveArgs s;
  CLI::App* solve = app.add_subcommand("solve", "Solve min ||Ax - b||_p on files");
  solve->add_option("--matrix", s.matrix, "Dense matrix, headerless CSV");
  solve->add_option("--vandermonde", s.vandermonde, "Vandermonde nodes, one per line");
  solve->add_option("--degree", s.degree, "Vandermonde column count");
  solve->add_option("--left", s.left, "Low-rank left factor (n x k CSV)");
  solve->add_option("--right", s.right, "Low-rank right factor (k x d CSV)");
  solve->add_option("--sparse", s.sparse, "Sparse part as row,col,value triplets");
  solve->add_option("--sparsity", s.sparsity, "Declared per-row sparsity (default: observed)");
  solve->add_option("--b", s.b, "Response vector, one value per line")->required();
  solve->add_option("--p", s.p, "Norm exponent >= 1 or 'inf'")->capture_default_str();
  solve->add_option("--eps", s.eps, "Accuracy parameter in (0, 1)")->capture_default_str();
  solve->add_option("--seed", s.seed, "Random seed")->capture_default_str();
  solve->add_option("--m1", s.m1, "Stage-one sample size (0 = default)");
  solve->add_option("--m2", s.m2, "Per-group sample size (0 = default)");
  solve->add_option("--lewis-iterations", s.lewis_iterations, "Fixed-point iterations")->capture_default_str();
  solve->add_option("--repeat", s.repeat, "Independent repetitions, best objective kept")->capture_default_str();
  solve->add_option("--structure", s.structure, "auto | vandermonde | lowrank+sparse | general")
      ->check(CLI::IsMember({"auto", "vandermonde", "lowrank+sparse", "general"}))
      ->capture_default_str();
  solve->add_option("--out", s.out, "Write the solution here instead of stdout");
  solve->add_flag("--no-round", s.no_round, "Skip the residual rounding stage");
  solve->add_flag("--wide-groups", s.wide_groups, "Per-group width 2^{2r}(d-1)+1");

  ExperimentArgs e;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a sampling experiment sweep");
  experiment->add_option("name", e.name, "vander-p | vander-m | unstructured")
      ->required()
      ->check(CLI::IsMember({"vander-p", "vander-m", "unstructured"}));
  experiment->add_option("--scale", e.scale, "desk | paper")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  experiment->add_option("--trials", e.trials, "Trials per grid point (0 = preset)");
  experiment->add_option("--seed", e.seed, "Experiment seed")->capture_default_str();
  experiment->add_option("--out", e.out, "Trial CSV path")->required();
  experiment->add_option("--summary", e.summary, "Summary CSV path (default: <out>_summary.csv)");
  experiment->add_option("--svg", e.svg, "Write a log-scale error plot");
  experiment->add_option("--n", e.n, "Override the row count");
  experiment->add_option("--p-grid", e.p_grid, "Comma-separated p values");
  experiment->add_option("--m-grid", e.m_grid, "Comma-separated sample sizes");
  experiment->add_option("--lewis-iterations", e.lewis_iterations, "Fixed-point iterations (0 = preset)");
  experiment->add_option("--noise", e.noise, "Paper-scale noise level read as variance or sd")
      ->capture_default_str();
  experiment->add_flag("--round", e.round, "Enable the residual rounding stage");
  experiment->add_flag("--no-timing", e.no_timing, "Write zero wall times for byte-reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(s, out);
    return cmd_experiment(e, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_code_for(ex);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitSolverFailure;
  }
}

}  // namespace lpcoreset
