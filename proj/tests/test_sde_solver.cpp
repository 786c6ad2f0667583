#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftcollapse/errors.hpp"
#include "ftcollapse/sde_solver.hpp"
#include "oracles.hpp"

using namespace ftcollapse;

namespace {

QuantumSystem desk() {
  const std::vector<double> e{0.0, 1.0};
  const std::vector<Complex> a{std::sqrt(0.3), std::sqrt(0.7)};
  return build_system(e, a);
}

double max_gap(const Amplitudes& a, const Amplitudes& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST_CASE("Euler step matches the scalar recomputation") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const Amplitudes psi0 = s.initial().amplitudes;
  for (double t : {0.0, 0.3, 0.9}) {
    const Amplitudes got = euler_step(psi0, t, 1e-4, 0.01, s, sched, true);
    const auto want = oracle::scalar_euler(psi0, {0.0, 1.0}, t, 1e-4, 0.01, 1.0, 1.0);
    CHECK(max_gap(got, want) <= 1e-15);
  }
}

TEST_CASE("Euler step simple cases") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const Amplitudes psi0 = s.initial().amplitudes;
  CHECK(max_gap(euler_step(psi0, 0.2, 0.0, 0.0, s, sched, true), psi0) <= 1e-15);
  CHECK_THROWS_AS(euler_step(psi0, 0.5, 0.5, 0.0, s, sched, true), DomainError);

  const std::vector<double> e{2.0};
  const std::vector<Complex> a{Complex(0.6, 0.8)};
  const QuantumSystem one = build_system(e, a);
  const Amplitudes next = euler_step(one.initial().amplitudes, 0.1, 1e-3, 0.37, one, sched, false);
  // Only the -iE dt term survives: psi (1 - 2i dt).
  CHECK(std::abs(next[0] - one.initial().amplitudes[0] * Complex(1.0, -2e-3)) < 1e-15);
}

TEST_CASE("zero noise on a single level is pure phase") {
  const std::vector<double> e{3.0};
  const std::vector<Complex> a{1.0};
  const QuantumSystem s = build_system(e, a);
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 128, GridScheme::kUniformT, 1e-3);
  const ReductionPath r = integrate_sde(s, NoisePath{g, std::vector<double>(g.size(), 0.0)}, {g, sched, true, true});
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(r.probabilities[k][0] == 1.0);
    CHECK(r.energy[k] == 3.0);
    CHECK(r.variance[k] == 0.0);
    CHECK(std::abs(r.norm[k] - 1.0) <= 1e-15);
  }
}

TEST_CASE("renormalized integration keeps unit norm") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid g = make_grid(1.0, 1024, GridScheme::kUniformT, 1e-3);
  const NoisePath w = sample_brownian(g, {12, 0});
  const ReductionPath r = integrate_sde(s, w, {g, sched, true, false});
  for (double n : r.norm) CHECK(std::abs(n - 1.0) <= 1e-12);
  for (const auto& p : r.probabilities) CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.amplitudes.empty());

  const TimeGrid other = make_grid(1.0, 512, GridScheme::kUniformT, 1e-3);
  CHECK_THROWS_AS(integrate_sde(s, w, {other, sched, true, false}), DomainError);
  CHECK_THROWS_AS(integrate_sde(s, w, {g.with_sentinel(), sched, true, false}), DomainError);
}

TEST_CASE("integral form simple cases") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  TimeGrid point{1.0, {0.0}, GridScheme::kUniformT, 1e-3};
  const std::vector<double> h0{0.7};
  const IntegralFormState at0 = integral_form_state(NoisePath{point, {0.0}}, h0, s, sched);
  CHECK(max_gap(at0.amplitudes, s.initial().amplitudes) <= 1e-15);

  const std::vector<double> e{2.0};
  const std::vector<Complex> a{Complex(0.0, 1.0)};
  const QuantumSystem one = build_system(e, a);
  const TimeGrid g = make_grid(1.0, 64, GridScheme::kUniformT, 0.01);
  const std::vector<double> h(g.size(), 2.0);
  const IntegralFormState st = integral_form_state(sample_brownian(g, {3, 3}), h, one, sched);
  CHECK(std::abs(st.amplitudes[0] - Complex(0.0, 1.0) * std::exp(Complex(0.0, -2.0 * g.t_max()))) <= 1e-14);
}

TEST_CASE("integral form tracks the SDE as the grid refines") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  const TimeGrid fine = make_grid(1.0, 16384, GridScheme::kUniformT, 0.05);
  std::vector<NoisePath> paths;
  for (std::uint64_t p = 0; p < 10; ++p) paths.push_back(sample_brownian(fine, {44, p}));
  double previous = 1e300;
  for (std::size_t stride : {64, 8, 1}) {
    TimeGrid g = fine;
    g.times.clear();
    for (std::size_t k = 0; k < fine.size(); k += stride) g.times.push_back(fine.times[k]);
    double worst = 0.0;
    for (const NoisePath& full : paths) {
      NoisePath w{g, {}, NoiseKind::kBrownian};
      for (std::size_t k = 0; k < fine.size(); k += stride) w.values.push_back(full.values[k]);
      const ReductionPath r = integrate_sde(s, w, {g, sched, true, true});
      const IntegralFormState st = integral_form_state(w, r.energy, s, sched);
      worst = std::max(worst, max_gap(st.amplitudes, r.amplitudes.back()));
    }
    CHECK(worst < previous);
    previous = worst;
  }
  CHECK(previous < 1e-2);
}

TEST_CASE("information from noise approaches the generating xi as the grid refines") {
  const QuantumSystem s = desk();
  const ReductionSchedule sched(1.0, 1.0);
  double previous = 1e300;
  for (std::size_t n : {128, 1024, 8192}) {
    const TimeGrid g = make_grid(1.0, n, GridScheme::kUniformT, 1e-2);
    const std::size_t k = sample_terminal_energy(s, {6, 1});
    const InformationPath info = information_process(k, sample_bridge_exact(g, 1.0, {6, 1}), sched, s);
    const ReductionPath exact = solve_exact(info, s, sched, false);
    const std::vector<double> xi = information_from_noise(reconstruct_noise(info, exact, sched), exact.energy, sched);
    double gap = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) gap = std::max(gap, std::abs(xi[j] - info.xi[j]));
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 1e-2);
}
