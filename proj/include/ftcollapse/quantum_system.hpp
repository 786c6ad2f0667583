#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ftcollapse {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Distinct energy levels of a finite-dimensional Hamiltonian given in its
/// eigenbasis. Level i owns the eigenbasis indices `level_indices[i]`.
struct EnergySpectrum {
  std::vector<double> distinct_energies;
  std::vector<std::vector<std::size_t>> level_indices;
  /// level_of[j] is the level that eigenbasis index j belongs to.
  std::vector<std::size_t> level_of;

  std::size_t num_levels() const noexcept { return distinct_energies.size(); }
  std::size_t dimension() const noexcept { return level_of.size(); }
  double energy_of_index(std::size_t j) const { return distinct_energies[level_of[j]]; }
};

struct InitialState {
  Amplitudes amplitudes;  // unit norm
};

/// Immutable after construction; safe to share between threads.
class QuantumSystem {
 public:
  const EnergySpectrum& spectrum() const noexcept { return spectrum_; }
  const InitialState& initial() const noexcept { return initial_; }
  const std::vector<double>& born_weights() const noexcept { return born_weights_; }

  /// Normalized projection of the initial state onto level i. Empty for
  /// levels that carry zero Born weight.
  const Amplitudes& lueders_state(std::size_t level) const { return lueders_states_[level]; }
  bool has_lueders_state(std::size_t level) const { return !lueders_states_[level].empty(); }

  std::size_t num_levels() const noexcept { return spectrum_.num_levels(); }
  std::size_t dimension() const noexcept { return spectrum_.dimension(); }
  double energy(std::size_t level) const { return spectrum_.distinct_energies[level]; }

 private:
  friend QuantumSystem build_system(std::span<const double>, std::span<const Complex>, double);

  EnergySpectrum spectrum_;
  InitialState initial_;
  std::vector<double> born_weights_;
  std::vector<Amplitudes> lueders_states_;
};

/// Groups eigenvalues closer than `degeneracy_tolerance` (single-linkage on the
/// sorted values) into one level whose energy is the mean of its members, then
/// normalizes the amplitudes and derives Born weights and Lueders states.
///
/// Throws InvalidSystemError for empty or mismatched input and
/// InvalidStateError for a zero-norm amplitude vector.
QuantumSystem build_system(std::span<const double> energies, std::span<const Complex> amplitudes,
                           double degeneracy_tolerance = 1e-9);

const std::vector<double>& born_weights(const QuantumSystem& system);

struct EnergyMoments {
  double mean = 0.0;
  double variance = 0.0;
};

EnergyMoments energy_moments(const QuantumSystem& system);

/// Characteristic collapse time in seconds for an initial energy spread
/// `delta_h_mev` given in MeV: (2.8 MeV / dH)^2 s.
double reduction_timescale(double delta_h_mev);

}  // namespace ftcollapse
