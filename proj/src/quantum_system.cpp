#include "ftcollapse/quantum_system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

QuantumSystem build_system(std::span<const double> energies, std::span<const Complex> amplitudes,
                           double degeneracy_tolerance) {
  if (energies.empty()) throw InvalidSystemError("system has no energy eigenvalues");
  if (energies.size() != amplitudes.size())
    throw InvalidSystemError("energies and amplitudes differ in length");
  if (!(degeneracy_tolerance >= 0.0)) throw InvalidSystemError("degeneracy tolerance must be >= 0");
  for (double e : energies)
    if (!std::isfinite(e)) throw InvalidSystemError("energy eigenvalue is not finite");

  double norm2 = 0.0;
  for (const Complex& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw InvalidStateError("amplitude is not finite");
    norm2 += std::norm(a);
  }
  if (!(norm2 > 0.0)) throw InvalidStateError("initial amplitudes have zero norm");

  const std::size_t n = energies.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  QuantumSystem sys;
  EnergySpectrum& spec = sys.spectrum_;
  spec.level_of.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    if (k == 0 || energies[j] - energies[order[k - 1]] > degeneracy_tolerance)
      spec.level_indices.emplace_back();
    spec.level_indices.back().push_back(j);
    spec.level_of[j] = spec.level_indices.size() - 1;
  }
  for (auto& idx : spec.level_indices) {
    double sum = 0.0;
    for (std::size_t j : idx) sum += energies[j];
    spec.distinct_energies.push_back(sum / static_cast<double>(idx.size()));
    std::sort(idx.begin(), idx.end());
  }

  const double inv_norm = 1.0 / std::sqrt(norm2);
  sys.initial_.amplitudes.resize(n);
  for (std::size_t j = 0; j < n; ++j) sys.initial_.amplitudes[j] = amplitudes[j] * inv_norm;

  const std::size_t levels = spec.num_levels();
  sys.born_weights_.assign(levels, 0.0);
  sys.lueders_states_.assign(levels, Amplitudes{});
  for (std::size_t i = 0; i < levels; ++i) {
    double w = 0.0;
    for (std::size_t j : spec.level_indices[i]) w += std::norm(sys.initial_.amplitudes[j]);
    sys.born_weights_[i] = w;
  }
  // Summing per level and renormalizing keeps sum(pi) == 1 to rounding.
  const double total = std::accumulate(sys.born_weights_.begin(), sys.born_weights_.end(), 0.0);
  for (double& w : sys.born_weights_) w /= total;

  for (std::size_t i = 0; i < levels; ++i) {
    double level_norm2 = 0.0;
    for (std::size_t j : spec.level_indices[i]) level_norm2 += std::norm(sys.initial_.amplitudes[j]);
    if (level_norm2 <= 0.0) continue;
    Amplitudes phi(n, Complex{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(level_norm2);
    for (std::size_t j : spec.level_indices[i]) phi[j] = sys.initial_.amplitudes[j] * scale;
    sys.lueders_states_[i] = std::move(phi);
  }
  return sys;
}

const std::vector<double>& born_weights(const QuantumSystem& system) { return system.born_weights(); }

EnergyMoments energy_moments(const QuantumSystem& system) {
  EnergyMoments m;
  const auto& pi = system.born_weights();
  for (std::size_t i = 0; i < pi.size(); ++i) m.mean += pi[i] * system.energy(i);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double d = system.energy(i) - m.mean;
    m.variance += pi[i] * d * d;
  }
  return m;
}

double reduction_timescale(double delta_h_mev) {
  if (!(delta_h_mev > 0.0) || !std::isfinite(delta_h_mev))
    throw DomainError("energy uncertainty must be positive");
  const double ratio = 2.8 / delta_h_mev;
  return ratio * ratio;
}

}  // namespace ftcollapse
