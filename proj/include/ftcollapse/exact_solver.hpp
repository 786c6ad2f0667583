#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ftcollapse/quantum_system.hpp"
#include "ftcollapse/stochastic_kernels.hpp"

namespace ftcollapse {

/// Horizon T and volatility sigma; the effective volatility
/// sigma_t = sigma T / (T - t) diverges at T and is only defined for t < T.
class ReductionSchedule {
 public:
  /// Throws ConfigError unless T > 0 and sigma > 0.
  ReductionSchedule(double horizon, double sigma);

  double horizon() const noexcept { return horizon_; }
  double sigma() const noexcept { return sigma_; }

  /// sigma T / (T - t). Throws DomainError for t >= T.
  double sigma_at(double t) const;

  /// int_0^t sigma_s^2 ds = sigma^2 tT / (T - t), evaluated in closed form.
  double integrated_variance(double t) const;

 private:
  double horizon_;
  double sigma_;
};

struct InformationPath {
  TimeGrid grid;
  std::vector<double> xi;
  std::size_t terminal_level = 0;
  /// Brownian motion the bridge was built from, when the bridge came from
  /// bridge_from_bm. Required by the time-change equivalence check.
  std::optional<NoisePath> generating_bm;
};

struct ReductionPath {
  TimeGrid grid;
  std::vector<std::vector<double>> probabilities;  // [time][level]
  std::vector<double> energy;
  std::vector<double> variance;
  std::vector<Amplitudes> amplitudes;  // [time][basis index]; may be empty
  std::vector<double> norm;            // amplitude norm per time when amplitudes are kept
};

/// Draws H_T: level k with probability pi_k.
std::size_t sample_terminal_energy(const QuantumSystem& system, SeedSpec seed);

/// xi_t = sigma t E_k + beta_t on the bridge's grid.
InformationPath information_process(std::size_t terminal_level, const NoisePath& bridge,
                                    const ReductionSchedule& schedule, const QuantumSystem& system);

/// Conditional level probabilities given xi at time t < T, computed as a
/// log-domain softmax of log pi_i + (sigma xi E_i T - sigma^2 E_i^2 t T / 2) / (T - t).
/// Zero-weight levels stay exactly zero.
std::vector<double> conditional_probabilities(double xi, double t, const QuantumSystem& system,
                                              const ReductionSchedule& schedule);

/// Allocation-free variant; `out` must have one slot per level.
void conditional_probabilities_into(double xi, double t, const QuantumSystem& system,
                                    const ReductionSchedule& schedule, std::span<double> out);

EnergyMoments moments_from_probabilities(std::span<const double> probabilities, const QuantumSystem& system);

/// Closed-form state vector at t < T: level i carries the Lueders state scaled
/// by exp(-i E_i t + E_i sigma_t xi / 2 - E_i^2 int sigma^2 / 4), normalized.
Amplitudes state_vector(double xi, double t, const QuantumSystem& system, const ReductionSchedule& schedule);

/// The t = T limit: exp(-i E_k T) times the Lueders state of level k.
/// Throws DomainError if level k carries zero Born weight.
Amplitudes terminal_limit(std::size_t terminal_level, const QuantumSystem& system, double horizon);

/// Probabilities, energy and variance along an information path; amplitudes
/// are filled only when `with_amplitudes` is set. A sentinel point at T is
/// served by terminal_limit.
ReductionPath solve_exact(const InformationPath& info, const QuantumSystem& system,
                          const ReductionSchedule& schedule, bool with_amplitudes = true);

/// Rebuilds the driving Wiener path from xi and H by left-point quadrature:
/// W_t = xi_t + int_0^t (xi_s - sigma T H_s) / (T - s) ds.
NoisePath reconstruct_noise(const InformationPath& info, const ReductionPath& reduction,
                            const ReductionSchedule& schedule);

}  // namespace ftcollapse
