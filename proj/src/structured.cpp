#include "lpcoreset/structured.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "lpcoreset/vandermonde.hpp"

namespace lpcoreset {

void LowRankPlusSparse::validate() const {
  if (left.cols() != right.rows()) throw InvalidInput("left and right factors disagree on rank");
  if (sparse_rows.size() != rows()) throw InvalidInput("sparse part must list every row");
  for (const auto& row : sparse_rows) {
    if (row.size() > sparsity) throw InvalidInput("sparse row exceeds the declared sparsity");
    for (const auto& e : row)
      if (e.col >= cols()) throw InvalidInput("sparse column index out of range");
  }
}

DenseMatrix LowRankPlusSparse::dense() const {
  validate();
  DenseMatrix a = left * right;
  for (std::size_t i = 0; i < sparse_rows.size(); ++i)
    for (const auto& e : sparse_rows[i]) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) += e.value;
  return a;
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exponent) {
  const double w = std::pow(static_cast<double>(base), static_cast<double>(exponent));
  if (w > static_cast<double>(kMaxExtendedWidth))
    throw UnsupportedSize("tensor extension exceeds width cap " + std::to_string(kMaxExtendedWidth));
  return static_cast<std::size_t>(w);
}

DenseVector kron_self(const DenseVector& v) {
  const Eigen::Index len = v.size();
  DenseVector out(len * len);
  for (Eigen::Index i = 0; i < len; ++i) out.segment(i * len, len) = v[i] * v;
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t j = 1; j <= k; ++j) c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

struct Term {
  std::size_t id;
  double coef;
};

// Row i in the shared basis: left(i, j) on v_j, sparse values on e_c, -t on the constant.
std::vector<Term> row_terms(const LowRankPlusSparse& ops, std::size_t i, std::optional<double> offset) {
  const std::size_t k = ops.rank();
  std::map<std::size_t, double> coef;
  for (std::size_t j = 0; j < k; ++j) {
    const double alpha = ops.left(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (alpha != 0.0) coef[j] += alpha;
  }
  for (const auto& e : ops.sparse_rows[i])
    if (e.value != 0.0) coef[k + e.col] += e.value;
  if (offset && *offset != 0.0) coef[k + ops.cols()] = -*offset;
  std::vector<Term> terms;
  for (const auto& [id, c] : coef) terms.push_back({id, c});
  return terms;
}

// Every multiset of size `remaining` over terms[at..], emitted with its
// multinomial coefficient times the product of coefficients.
void enumerate(const std::vector<Term>& terms, std::size_t at, int remaining, Monomial& current,
               double product, double denominator, double numerator,
               const std::function<void(const Monomial&, double)>& emit) {
  if (at + 1 == terms.size()) {
    if (remaining > 0) current.emplace_back(terms[at].id, remaining);
    emit(current, numerator / (denominator * factorial(remaining)) * product *
                      std::pow(terms[at].coef, remaining));
    if (remaining > 0) current.pop_back();
    return;
  }
  for (int mult = remaining; mult >= 0; --mult) {
    if (mult > 0) current.emplace_back(terms[at].id, mult);
    enumerate(terms, at + 1, remaining - mult, current, product * std::pow(terms[at].coef, mult),
              denominator * factorial(mult), numerator, emit);
    if (mult > 0) current.pop_back();
  }
}

void check_lowrank_guards(const LowRankPlusSparse& ops, int r) {
  ops.validate();
  if (r < 0) throw InvalidParameter("r must be nonnegative");
  const std::size_t k = ops.rank();
  const std::size_t s = ops.sparsity;
  if (k + s > 6) throw UnsupportedSize("rank plus sparsity exceeds 6");
  if (r > 3) throw UnsupportedSize("tensor power 2^r exceeds 8");
  const double bound = binomial(ops.cols(), std::min(s, ops.cols())) * std::pow(static_cast<double>(k + s), std::ldexp(1.0, r));
  if (bound > static_cast<double>(kMaxExtendedWidth))
    throw UnsupportedSize("low-rank plus sparse extension exceeds width cap " +
                          std::to_string(kMaxExtendedWidth));
}

}  // namespace

TensorPlan plan_tensor(std::size_t d, double p) {
  if (d < 1) throw InvalidParameter("matrix needs at least one column");
  if (!(p >= 4.0) || std::isinf(p)) throw InvalidParameter("tensor extension requires finite p >= 4");
  TensorPlan plan;
  double power = 1.0;
  while (4.0 * power <= p) {
    power *= 2.0;
    ++plan.r;
  }
  plan.q = p / power;
  plan.width = checked_power(d, static_cast<std::size_t>(power));
  return plan;
}

DenseVector tensor_power(const DenseVector& x, int r) {
  DenseVector v = x;
  for (int j = 0; j < r; ++j) v = kron_self(v);
  return v;
}

DenseMatrix extend_tensor(const DenseMatrix& a, const TensorPlan& plan) {
  const auto fold = static_cast<std::size_t>(std::ldexp(1.0, plan.r));
  const std::size_t width = checked_power(static_cast<std::size_t>(a.cols()), fold);
  DenseMatrix m(a.rows(), static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    m.row(i) = tensor_power(a.row(i).transpose(), plan.r).transpose();
  return m;
}

ExtendedMatrix extend_lowrank_sparse_rows(const LowRankPlusSparse& ops, int r,
                                          std::span<const std::size_t> rows,
                                          std::optional<double> offset) {
  check_lowrank_guards(ops, r);
  const int power = 1 << r;

  std::map<Monomial, std::size_t> index;
  ExtendedMatrix out;
  std::vector<std::vector<std::pair<std::size_t, double>>> entries(rows.size());
  for (std::size_t local = 0; local < rows.size(); ++local) {
    const std::vector<Term> terms = row_terms(ops, rows[local], offset);
    if (terms.empty()) continue;
    Monomial current;
    enumerate(terms, 0, power, current, 1.0, 1.0, factorial(power),
              [&](const Monomial& mono, double value) {
                auto [it, inserted] = index.emplace(mono, out.columns.size());
                if (inserted) out.columns.push_back(mono);
                entries[local].emplace_back(it->second, value);
              });
  }

  const double bound = binomial(ops.cols(), std::min(ops.sparsity, ops.cols())) *
                       std::pow(static_cast<double>(ops.rank() + ops.sparsity + 1), power);
  if (static_cast<double>(out.columns.size()) > bound)
    throw NumericalFailure("extension width exceeds its combinatorial bound");

  out.m = DenseMatrix::Zero(static_cast<Eigen::Index>(rows.size()),
                            static_cast<Eigen::Index>(std::max<std::size_t>(out.columns.size(), 1)));
  for (std::size_t local = 0; local < rows.size(); ++local)
    for (const auto& [col, value] : entries[local])
      out.m(static_cast<Eigen::Index>(local), static_cast<Eigen::Index>(col)) += value;
  return out;
}

ExtendedMatrix extend_lowrank_sparse(const LowRankPlusSparse& ops, int r) {
  std::vector<std::size_t> rows(ops.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return extend_lowrank_sparse_rows(ops, r, rows, std::nullopt);
}

DenseVector monomial_features(const LowRankPlusSparse& ops, const std::vector<Monomial>& columns,
                              const DenseVector& x) {
  if (static_cast<std::size_t>(x.size()) != ops.cols()) throw InvalidInput("x has the wrong length");
  const std::size_t k = ops.rank();
  const DenseVector projections = ops.right * x;
  DenseVector y(static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    double value = 1.0;
    for (const auto& [id, mult] : columns[c]) {
      double base = 1.0;
      if (id < k)
        base = projections[static_cast<Eigen::Index>(id)];
      else if (id < k + ops.cols())
        base = x[static_cast<Eigen::Index>(id - k)];
      value *= std::pow(base, mult);
    }
    y[static_cast<Eigen::Index>(c)] = value;
  }
  return y;
}

PipelineResult solve_lowrank_sparse_lp(const LowRankPlusSparse& ops, const DenseVector& b,
                                       double p, double eps, std::uint64_t seed,
                                       const PipelineOptions& options) {
  const ExtensionPlan plan = plan_extension(ops.cols(), p);
  check_lowrank_guards(ops, plan.r);
  const DenseMatrix a = ops.dense();

  SamplingProblem problem;
  problem.a = &a;
  problem.b = &b;
  problem.p = p;
  problem.q = plan.q;
  problem.eps = eps;
  problem.seed = seed;
  problem.features = [&](std::span<const std::size_t> rows, std::optional<double> offset) {
    return extend_lowrank_sparse_rows(ops, plan.r, rows, offset).m;
  };
  return run_sampling_pipeline(problem, options);
}

namespace {

PipelineResult tensor_pipeline(const DenseMatrix& a, const DenseVector& b, double p, double q,
                               int r, double eps, std::uint64_t seed, PipelineOptions options) {
  const auto fold = static_cast<std::size_t>(std::ldexp(1.0, r));
  const auto d = static_cast<std::size_t>(a.cols());
  checked_power(d + 1, fold);

  SamplingProblem problem;
  problem.a = &a;
  problem.b = &b;
  problem.p = p;
  problem.q = q;
  problem.eps = eps;
  problem.seed = seed;
  problem.features = [&](std::span<const std::size_t> rows, std::optional<double> offset) {
    const bool shifted = offset && *offset != 0.0;
    DenseMatrix base(static_cast<Eigen::Index>(rows.size()), a.cols() + (shifted ? 1 : 0));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const auto row = static_cast<Eigen::Index>(rows[j]);
      base.row(static_cast<Eigen::Index>(j)).head(a.cols()) = a.row(row);
      if (shifted) base(static_cast<Eigen::Index>(j), a.cols()) = -*offset;
    }
    return extend_tensor(base, TensorPlan{r, q, 0});
  };
  return run_sampling_pipeline(problem, options);
}

}  // namespace

PipelineResult solve_general_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                                std::uint64_t seed, const PipelineOptions& options) {
  const auto d = static_cast<std::size_t>(a.cols());
  const TensorPlan plan = plan_tensor(d, p);
  PipelineOptions resolved = options;
  if (resolved.m1 == 0) {
    const double want = std::ceil(10.0 * std::pow(static_cast<double>(d), p / 2.0) *
                                  std::max(1.0, std::log(static_cast<double>(d))));
    resolved.m1 = want >= static_cast<double>(a.rows()) ? static_cast<std::size_t>(a.rows())
                                                        : static_cast<std::size_t>(want);
  }
  return tensor_pipeline(a, b, p, plan.q, plan.r, eps, seed, resolved);
}

PipelineResult solve_direct_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                               std::uint64_t seed, const PipelineOptions& options) {
  if (!(p >= 1.0 && p < 4.0)) throw InvalidParameter("direct Lewis sampling requires 1 <= p < 4");
  return tensor_pipeline(a, b, p, p, 0, eps, seed, options);
}

PipelineResult solve_dense_lp(const DenseMatrix& a, const DenseVector& b, double p, double eps,
                              std::uint64_t seed, const PipelineOptions& options) {
  return p >= 4.0 ? solve_general_lp(a, b, p, eps, seed, options)
                  : solve_direct_lp(a, b, p, eps, seed, options);
}

}  // namespace lpcoreset
