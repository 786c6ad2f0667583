#include <doctest.h>

#include <cmath>
#include <vector>

#include "ftcollapse/errors.hpp"
#include "ftcollapse/quantum_system.hpp"

using namespace ftcollapse;

TEST_CASE("two-level system from real amplitudes") {
  const std::vector<double> e{0.0, 1.0};
  const std::vector<Complex> a{std::sqrt(0.3), std::sqrt(0.7)};
  const QuantumSystem s = build_system(e, a);
  REQUIRE(s.num_levels() == 2);
  CHECK(born_weights(s)[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(born_weights(s)[1] == doctest::Approx(0.7).epsilon(1e-15));
  const EnergyMoments m = energy_moments(s);
  CHECK(m.mean == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(m.variance == doctest::Approx(0.21).epsilon(1e-14));
}

TEST_CASE("degenerate eigenvalues merge into one level") {
  const std::vector<double> e{1.0, 1.0, 2.0};
  const std::vector<Complex> a{0.5, 0.5, 1.0 / std::sqrt(2.0)};
  const QuantumSystem s = build_system(e, a, 1e-9);
  REQUIRE(s.num_levels() == 2);
  CHECK(s.born_weights()[0] == doctest::Approx(0.5));
  CHECK(s.born_weights()[1] == doctest::Approx(0.5));
  const Amplitudes& phi = s.lueders_state(0);
  REQUIRE(phi.size() == 3);
  CHECK(std::abs(phi[0] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(phi[1] - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(phi[2]) == 0.0);
}

TEST_CASE("near-degenerate chain merges by linkage") {
  const std::vector<double> e{0.0, 0.6e-9, 1.2e-9, 5.0};
  const std::vector<Complex> a{1.0, 1.0, 1.0, 1.0};
  const QuantumSystem s = build_system(e, a, 1e-9);
  CHECK(s.num_levels() == 2);
  CHECK(s.energy(0) == doctest::Approx(0.6e-9));
  CHECK(s.born_weights()[0] == doctest::Approx(0.75));
}

TEST_CASE("single level") {
  const std::vector<double> e{5.0};
  const std::vector<Complex> a{1.0};
  const QuantumSystem s = build_system(e, a);
  CHECK(s.num_levels() == 1);
  CHECK(s.born_weights()[0] == 1.0);
  CHECK(energy_moments(s).variance == 0.0);
}

TEST_CASE("unnormalized amplitudes are normalized") {
  const std::vector<double> e{0.0, 1.0};
  const std::vector<Complex> a{1.0, 1.0};
  const QuantumSystem s = build_system(e, a);
  CHECK(s.born_weights()[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.born_weights()[1] == doctest::Approx(0.5).epsilon(1e-15));
  double n2 = 0.0;
  for (const Complex& c : s.initial().amplitudes) n2 += std::norm(c);
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("symmetric levels") {
  const std::vector<double> e{-1.0, 1.0};
  const std::vector<Complex> a{1.0, Complex(0.0, 1.0)};
  const EnergyMoments m = energy_moments(build_system(e, a));
  CHECK(std::abs(m.mean) < 1e-15);
  CHECK(m.variance == doctest::Approx(1.0));
}

TEST_CASE("zero-weight level has no Lueders state") {
  const std::vector<double> e{0.0, 1.0, 2.0};
  const std::vector<Complex> a{1.0, 0.0, 1.0};
  const QuantumSystem s = build_system(e, a);
  CHECK(s.has_lueders_state(0));
  CHECK_FALSE(s.has_lueders_state(1));
  CHECK(s.born_weights()[1] == 0.0);
}

TEST_CASE("invalid input") {
  const std::vector<double> none;
  const std::vector<Complex> no_amps;
  CHECK_THROWS_AS(build_system(none, no_amps), InvalidSystemError);
  const std::vector<double> e{0.0, 1.0};
  const std::vector<Complex> one{1.0};
  CHECK_THROWS_AS(build_system(e, one), InvalidSystemError);
  const std::vector<Complex> zeros{0.0, 0.0};
  CHECK_THROWS_AS(build_system(e, zeros), InvalidStateError);
}

TEST_CASE("reduction timescale") {
  CHECK(std::abs(reduction_timescale(2.8) - 1.0) <= 1e-15);
  CHECK(reduction_timescale(1.4) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(reduction_timescale(0.28) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK_THROWS_AS(reduction_timescale(0.0), DomainError);
  CHECK_THROWS_AS(reduction_timescale(-1.0), DomainError);
}

TEST_CASE("property: Born weights sum to one for random inputs") {
  std::vector<double> e;
  std::vector<Complex> a;
  for (int n = 1; n <= 12; ++n) {
    e.push_back(0.37 * (n % 5) - 0.9);
    a.emplace_back(std::sin(1.3 * n), std::cos(0.7 * n * n));
    const QuantumSystem s = build_system(e, a);
    double total = 0.0;
    for (double p : s.born_weights()) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i < s.num_levels(); ++i) CHECK(s.energy(i) > s.energy(i - 1));
  }
}
