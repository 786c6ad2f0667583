#include <doctest.h>

#include <cmath>
#include <vector>

#include "ftcollapse/errors.hpp"
#include "ftcollapse/statistics.hpp"

using namespace ftcollapse;

namespace {

QuantumSystem desk() {
  const std::vector<double> e{0.0, 1.0};
  const std::vector<Complex> a{std::sqrt(0.3), std::sqrt(0.7)};
  return build_system(e, a);
}

QuantumSystem single() {
  const std::vector<double> e{1.5};
  const std::vector<Complex> a{1.0};
  return build_system(e, a);
}

// A flat two-level summary: every mean sits on its initial value.
EnsembleSummary synthetic(std::size_t n_times, std::size_t n_paths) {
  EnsembleSummary s;
  s.n_paths = n_paths;
  s.grid = make_grid(1.0, n_times - 1, GridScheme::kUniformT, 1e-3);
  s.route = Route::kSde;
  s.sigma = 1.0;
  s.born_weights = {0.3, 0.7};
  s.level_energies = {0.0, 1.0};
  s.mean_energy.assign(n_times, 0.7);
  s.se_energy.assign(n_times, 0.004);
  s.mean_variance.assign(n_times, 0.21);
  s.se_variance.assign(n_times, 0.002);
  for (std::size_t k = 0; k < n_times; ++k) s.mean_variance[k] = 0.21 / (1.0 + 5.0 * k);
  s.mean_variance[0] = 0.21;
  s.mean_probability.assign(n_times, {0.3, 0.7});
  s.se_probability.assign(n_times, {0.004, 0.004});
  s.terminal_frequencies = {0.3, 0.7};
  s.terminal_counts = {3 * n_paths / 10, 7 * n_paths / 10};
  return s;
}

bool passed(const std::vector<TestEntry>& entries) {
  for (const TestEntry& e : entries)
    if (!e.passed) return false;
  return true;
}

}  // namespace

TEST_CASE("entries and reports") {
  CHECK(make_entry("a", 4.0, 4.0).passed);
  CHECK_FALSE(make_entry("a", 4.0, 4.0, true).passed);
  CHECK(make_entry("a", -1.0, 0.0, true).passed);
  TestReport r;
  r.entries.push_back(make_entry("ok", 0.0, 1.0));
  CHECK(r.all_passed());
  r.append({make_entry("bad", 2.0, 1.0)});
  CHECK_FALSE(r.all_passed());
  const nlohmann::json j = r.to_json();
  CHECK(j["tests"].size() == 2);
  CHECK(j["all_passed"] == false);
}

TEST_CASE("route tags") {
  CHECK(route_from_string("sde") == Route::kSde);
  CHECK(to_string(Route::kExact) == "exact");
  CHECK_THROWS_AS(route_from_string("euler"), ConfigError);
}

TEST_CASE("Born test on synthetic frequencies") {
  const QuantumSystem s = desk();
  EnsembleSummary sum = synthetic(11, 10000);
  CHECK(born_test(sum, s).passed);
  const double se = std::sqrt(0.21 / 10000.0);
  sum.terminal_frequencies = {0.3 - 10.0 * se, 0.7 + 10.0 * se};
  CHECK_FALSE(born_test(sum, s).passed);

  EnsembleSummary one = synthetic(11, 100);
  one.terminal_frequencies = {1.0};
  CHECK(born_test(one, single()).passed);
}

TEST_CASE("martingale test on synthetic summaries") {
  EnsembleSummary sum = synthetic(101, 10000);
  CHECK(passed(martingale_test(sum)));
  for (std::size_t k = 0; k < sum.mean_energy.size(); ++k)
    sum.mean_energy[k] += 10.0 * sum.se_energy[k] * k / (sum.mean_energy.size() - 1.0);
  const auto entries = martingale_test(sum);
  CHECK_FALSE(entries[0].passed);
  CHECK(entries[1].passed);
}

TEST_CASE("variance test on synthetic summaries") {
  EnsembleSummary sum = synthetic(101, 10000);
  CHECK(passed(variance_decay_test(sum, 1.0, 1.0)));
  sum.mean_variance[50] = 0.21 + 10.0 * 0.002;
  CHECK_FALSE(passed(variance_decay_test(sum, 1.0, 1.0)));
}

TEST_CASE("single-level ensemble is degenerate") {
  const QuantumSystem s = single();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 64, GridScheme::kUniformT, 1e-3);
  for (Route route : {Route::kExact, Route::kSde}) {
    EnsembleOptions opt;
    if (route == Route::kExact) opt.probe_times = {0.5};
    const EnsembleSummary sum = run_ensemble(s, sched, g, 1, 5, route, opt);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(sum.mean_energy[k] == 1.5);
      CHECK(sum.mean_variance[k] == 0.0);
    }
    CHECK(passed(martingale_test(sum)));
    CHECK(passed(variance_decay_test(sum, 1.0, 1.0)));
  }
}

TEST_CASE("single-level independence: zero covariance") {
  const QuantumSystem s = single();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 64, GridScheme::kUniformT, 1e-3);
  EnsembleOptions opt;
  opt.probe_times = {0.5};
  const EnsembleSummary sum = run_ensemble(s, sched, g, 2000, 5, Route::kExact, opt);
  const auto entries = independence_test(sum, opt.probe_times);
  CHECK(entries[0].statistic == 0.0);
  CHECK_THROWS_AS(independence_test(sum, {0.25}), ConfigError);
}

TEST_CASE("ensemble invariants") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 128, GridScheme::kUniformT, 1e-3);
  for (Route route : {Route::kExact, Route::kSde}) {
    const EnsembleSummary sum = run_ensemble(s, sched, g, 1500, 77, route);
    for (const auto& row : sum.mean_probability) CHECK(row[0] + row[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(sum.terminal_frequencies[0] + sum.terminal_frequencies[1] == 1.0);
    CHECK(sum.terminal_counts[0] + sum.terminal_counts[1] == 1500);
    CHECK(sum.mean_energy.front() == doctest::Approx(0.7).epsilon(1e-14));
  }
  CHECK_THROWS_AS(run_ensemble(s, sched, g, 0, 1, Route::kExact), ConfigError);
}

TEST_CASE("parallel ensemble matches the serial reference") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 256, GridScheme::kUniformT, 1e-3);
  for (Route route : {Route::kExact, Route::kSde}) {
    EnsembleOptions one, four;
    one.threads = 1;
    four.threads = 4;
    const EnsembleSummary a = run_ensemble(s, sched, g, 3000, 9, route, one);
    const EnsembleSummary b = run_ensemble(s, sched, g, 3000, 9, route, four);
    const EnsembleSummary c = run_ensemble_serial(s, sched, g, 3000, 9, route);
    CHECK(a.mean_energy == b.mean_energy);
    CHECK(a.se_energy == b.se_energy);
    CHECK(a.mean_probability == b.mean_probability);
    CHECK(a.terminal_counts == c.terminal_counts);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(std::abs(a.mean_energy[k] - c.mean_energy[k]) <= 1e-12);
      CHECK(std::abs(a.se_energy[k] - c.se_energy[k]) <= 1e-12);
      CHECK(std::abs(a.mean_variance[k] - c.mean_variance[k]) <= 1e-12);
    }
  }
}

TEST_CASE("convergence study preconditions and the single-level case") {
  const ReductionSchedule sched(1.0, 1.0);
  CHECK_THROWS_AS(convergence_study(single(), sched, {64, 48}, 2, 1, GridScheme::kUniformT, 1e-3), ConfigError);
  CHECK_THROWS_AS(convergence_study(single(), sched, {64, 96}, 2, 1, GridScheme::kUniformT, 1e-3), ConfigError);
  const ConvergenceStudy st = convergence_study(single(), sched, {64, 128, 256}, 4, 1, GridScheme::kUniformT, 1e-3);
  for (double gap : st.rms_energy_gap) CHECK(gap == 0.0);
}
