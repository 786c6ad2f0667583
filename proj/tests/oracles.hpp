// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical routines.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

/// Conditional level probabilities by Bayes' rule with explicit Gaussian
/// likelihoods: xi | H_T = E_i ~ N(sigma t E_i, t (T - t) / T). Long double,
/// no max-shift; callers keep exponents moderate.
inline std::vector<double> bayes_probabilities(double xi, double t, double horizon, double sigma,
                                               const std::vector<double>& energies, const std::vector<double>& prior) {
  using ld = long double;
  const ld var = static_cast<ld>(t) * (horizon - t) / horizon;
  const ld norm = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<ld> * var);
  std::vector<ld> joint(energies.size());
  ld total = 0.0L;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const ld d = static_cast<ld>(xi) - static_cast<ld>(sigma) * t * energies[i];
    joint[i] = prior[i] * norm * std::exp(-d * d / (2.0L * var));
    total += joint[i];
  }
  std::vector<double> out(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) out[i] = static_cast<double>(joint[i] / total);
  return out;
}

/// One Euler-Maruyama step for a state with one amplitude per level, written
/// out component by component.
inline std::vector<std::complex<double>> scalar_euler(const std::vector<std::complex<double>>& psi,
                                                      const std::vector<double>& energy_of_index, double t, double dt,
                                                      double dw, double horizon, double sigma) {
  const double sigma_t = sigma * horizon / (horizon - t);
  double n2 = 0.0, h = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double w = psi[j].real() * psi[j].real() + psi[j].imag() * psi[j].imag();
    n2 += w;
    h += w * energy_of_index[j];
  }
  h /= n2;
  std::vector<std::complex<double>> out(psi.size());
  double out_n2 = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double g = energy_of_index[j] - h;
    const double re_factor = 1.0 - sigma_t * sigma_t * g * g * dt / 8.0 + 0.5 * sigma_t * g * dw;
    const double im_factor = -energy_of_index[j] * dt;
    const double re = psi[j].real() * re_factor - psi[j].imag() * im_factor;
    const double im = psi[j].real() * im_factor + psi[j].imag() * re_factor;
    out[j] = {re, im};
    out_n2 += re * re + im * im;
  }
  const double s = 1.0 / std::sqrt(out_n2);
  for (auto& a : out) a *= s;
  return out;
}

/// Exact bridge covariance s (T - t) / T for s <= t.
inline double bridge_covariance(double s, double t, double horizon) { return s * (horizon - t) / horizon; }

}  // namespace oracle
