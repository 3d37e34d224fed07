#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lpcoreset/experiments.hpp"

using namespace lpcoreset;

namespace {

TrialRecord record(const std::string& experiment, Method method, double p, std::size_t m, double eps) {
  TrialRecord r;
  r.experiment = experiment;
  r.method = method;
  r.p = p;
  r.m = m;
  r.eps_empirical = eps;
  return r;
}

SweepConfig tiny_vander(const std::string& experiment) {
  SweepConfig c = preset(experiment, "desk");
  c.n = 400;
  c.d = 4;
  c.target_power = 2;
  c.noise_sd = 3.0;
  c.trials = 2;
  c.p_grid = {2, 4};
  c.m_grid = {60};
  if (experiment == "vander-m") {
    c.p_grid = {3};
    c.m_grid = {40, 80};
  }
  c.timing = false;
  return c;
}

}  // namespace

TEST_CASE("quantile examples") {
  CHECK(quantile({1, 2, 3}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3}, 0.25) == 1.5);
  CHECK(quantile({3, 1, 2}, 0.75) == 2.5);
  CHECK(quantile({4.5}, 0.25) == 4.5);
  CHECK(quantile({4.5}, 0.75) == 4.5);
  CHECK(quantile({2, 2, 2, 2}, 0.25) == quantile({2, 2, 2, 2}, 0.75));
  CHECK_THROWS_AS(quantile({}, 0.5), InvalidInput);
}

TEST_CASE("aggregate groups by key and skips failed trials") {
  std::vector<TrialRecord> records{
      record("vander-p", Method::Lewis, 4, 10, 3.0), record("vander-p", Method::Lewis, 2, 10, 1.0),
      record("vander-p", Method::Lewis, 2, 10, 2.0), record("vander-p", Method::Lewis, 2, 10, 3.0),
      record("vander-p", Method::Uniform, 2, 10, NAN), record("vander-p", Method::Uniform, 2, 10, 7.0)};
  const auto summary = aggregate(records);
  REQUIRE(summary.size() == 3);
  CHECK(summary[0].method == Method::Lewis);
  CHECK(summary[0].key == 2.0);
  CHECK(summary[0].median == 2.0);
  CHECK(summary[0].q25 == 1.5);
  CHECK(summary[0].q75 == 2.5);
  CHECK(summary[0].count == 3);
  CHECK(summary[1].method == Method::Uniform);
  CHECK(summary[1].key == 2.0);
  CHECK(summary[1].count == 1);
  CHECK(summary[1].failed == 1);
  CHECK(summary[2].key == 4.0);
  for (const auto& s : summary) {
    CHECK(s.q25 <= s.median);
    CHECK(s.median <= s.q75);
  }

  // Keys are sample sizes outside the p sweep.
  const auto by_m = aggregate({record("vander-m", Method::Lewis, 6, 50, 1.0),
                               record("vander-m", Method::Lewis, 6, 20, 2.0)});
  REQUIRE(by_m.size() == 2);
  CHECK(by_m[0].key == 20.0);
  CHECK(by_m[1].key == 50.0);
}

TEST_CASE("spearman examples") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {9, 5, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3}, {1, 1, 2}) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("Vandermonde generator structure") {
  const auto [spec, b] = gen_vander_experiment(300, 5, 0.0, 7, 3, 2.0);
  CHECK(spec.rows() == 300);
  CHECK(spec.degree == 5);
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(std::abs(spec.nodes[i]) <= 2.0);
    CHECK(b[static_cast<Eigen::Index>(i)] == doctest::Approx(std::pow(spec.nodes[i], 3)));
  }
  const auto again = gen_vander_experiment(300, 5, 0.0, 7, 3, 2.0);
  CHECK(again.first.nodes == spec.nodes);
}

TEST_CASE("unstructured generator block structure") {
  const auto [a, b] = gen_unstructured_experiment(500, 3);
  CHECK(a.rows() == 500);
  CHECK(a.cols() == 10);
  CHECK(a.topRightCorner(100, 4).isZero(0.0));
  CHECK(a.bottomLeftCorner(400, 6).isZero(0.0));
  CHECK(b.size() == 500);
  CHECK_THROWS_AS(gen_unstructured_experiment(199, 3), InvalidParameter);
}

TEST_CASE("noise-free Vandermonde sweep has near-zero error") {
  SweepConfig c = tiny_vander("vander-p");
  c.noise_sd = 0.0;
  for (const auto& r : run_vander_sweep(c)) {
    REQUIRE_FALSE(r.failed());
    if (r.method == Method::Lewis) CHECK(std::abs(r.eps_empirical) < 1e-6);
  }
}

TEST_CASE("full sampling reaches solver tolerance") {
  SweepConfig c = preset("unstructured", "desk");
  c.n = 300;
  c.m_grid = {300, 1000};
  c.trials = 2;
  c.timing = false;
  for (const auto& r : run_unstructured_sweep(c)) {
    REQUIRE_FALSE(r.failed());
    CHECK(std::abs(r.eps_empirical) < 1e-5);
  }
}

TEST_CASE("sweeps are reproducible and schedule independent") {
  for (const std::string experiment : {"vander-p", "vander-m", "unstructured"}) {
    SweepConfig c = experiment == "unstructured" ? preset(experiment, "desk") : tiny_vander(experiment);
    if (experiment == "unstructured") {
      c.n = 400;
      c.m_grid = {30, 60};
      c.trials = 3;
      c.timing = false;
    }
    c.threads = 1;
    std::ostringstream one, many;
    write_trials_csv(one, c, run_experiment(c));
    c.threads = 4;
    write_trials_csv(many, c, run_experiment(c));
    CHECK(one.str() == many.str());
    for (const auto& r : run_experiment(c)) CHECK(r.eps_empirical >= -1e-6);
  }
}

TEST_CASE("CSV layout and embedded configuration") {
  SweepConfig c = tiny_vander("vander-p");
  c.trials = 1;
  const auto records = run_vander_sweep(c);
  std::ostringstream trials, summary;
  write_trials_csv(trials, c, records);
  write_summary_csv(summary, c, aggregate(records));
  const std::string t = trials.str();
  CHECK(t.find("# experiment=vander-p") != std::string::npos);
  CHECK(t.find("# n=400") != std::string::npos);
  CHECK(t.find("experiment,method,p,m,trial,seed,eps_empirical,wall_time_s\n") != std::string::npos);
  CHECK(summary.str().find("experiment,method,key,median,q25,q75,count") != std::string::npos);

  std::ostringstream svg;
  write_svg(svg, c, aggregate(records));
  CHECK(svg.str().rfind("<svg", 0) == 0);
}

TEST_CASE("paper presets") {
  const SweepConfig p = preset("vander-p", "paper");
  CHECK(p.n == 25000);
  CHECK(p.d == 20);
  CHECK(p.target_power == 10);
  CHECK(p.noise_sd == 1e5);
  CHECK(p.p_grid.size() == 24);
  CHECK(p.m_grid == std::vector<std::size_t>{1000});
  CHECK(p.trials == 30);
  CHECK(preset("vander-p", "paper", true).noise_sd == 1e10);
  CHECK(preset("vander-m", "paper").m_grid.back() == 3000);
  CHECK(preset("unstructured", "paper").n == 25000);
  CHECK_THROWS_AS(preset("nope", "desk"), InvalidParameter);
  CHECK_THROWS_AS(preset("vander-p", "huge"), InvalidParameter);
}
