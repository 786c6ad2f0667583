#pragma once

#include <span>
#include <vector>

#include "ftcollapse/exact_solver.hpp"

namespace ftcollapse {

struct IntegratorConfig {
  TimeGrid grid;
  ReductionSchedule schedule;
  bool renormalize_each_step = true;
  bool record_amplitudes = true;
};

/// One explicit Euler-Maruyama step of
///   d psi = [-i H - sigma_t^2 (H - H_t)^2 / 8] psi dt + sigma_t (H - H_t) psi dW / 2
/// in the energy eigenbasis, with H_t taken from the pre-step amplitudes.
/// Throws DomainError if t + dt reaches T.
Amplitudes euler_step(std::span<const Complex> amplitudes, double t, double dt, double dw,
                      const QuantumSystem& system, const ReductionSchedule& schedule, bool renormalize);

/// Integrates the stochastic Schroedinger equation from the normalized initial
/// state along `driving_noise`, whose grid must equal `config.grid`.
ReductionPath integrate_sde(const QuantumSystem& system, const NoisePath& driving_noise,
                            const IntegratorConfig& config);

/// Accumulators of the integral (positive-operator) form of the solution.
struct IntegralFormState {
  double sigma_dw_star = 0.0;         // sum sigma_s (dW_s + sigma_s H_s ds)
  double sigma_squared_ds = 0.0;      // sum sigma_s^2 ds
  std::vector<double> log_weights;    // per level: E_i * sigma_dw_star - E_i^2 sigma_squared_ds / 2
  double log_normalization = 0.0;     // log Phi_t
  Amplitudes amplitudes;              // state at the last grid time
};

/// Evaluates psi_t = U_t M_t^{1/2} psi_0 at the last grid time, where the
/// stochastic integrals are left-point sums over W and the energy path.
IntegralFormState integral_form_state(const NoisePath& driving_noise, std::span<const double> energy_path,
                                      const QuantumSystem& system, const ReductionSchedule& schedule);

/// The information process recovered from a driving noise and its energy
/// path: xi_t = (T - t) int_0^t dW*_s / (T - s) with W* = W + int sigma_s H_s ds.
std::vector<double> information_from_noise(const NoisePath& driving_noise, std::span<const double> energy_path,
                                           const ReductionSchedule& schedule);

}  // namespace ftcollapse
