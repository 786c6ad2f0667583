#include "ftcollapse/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

ReductionSchedule::ReductionSchedule(double horizon, double sigma) : horizon_(horizon), sigma_(sigma) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive", "schedule.T");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("volatility must be positive", "schedule.sigma");
}

double ReductionSchedule::sigma_at(double t) const {
  if (!(t < horizon_)) throw DomainError("sigma_t is singular for t >= T");
  return sigma_ * horizon_ / (horizon_ - t);
}

double ReductionSchedule::integrated_variance(double t) const {
  if (!(t < horizon_)) throw DomainError("integrated variance diverges for t >= T");
  return sigma_ * sigma_ * t * horizon_ / (horizon_ - t);
}

std::size_t sample_terminal_energy(const QuantumSystem& system, SeedSpec seed) {
  RandomStream rng(seed, StreamPurpose::kTerminalLevel);
  const double u = rng.uniform();
  const auto& pi = system.born_weights();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] <= 0.0) continue;
    last_positive = i;
    cumulative += pi[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

InformationPath information_process(std::size_t terminal_level, const NoisePath& bridge,
                                    const ReductionSchedule& schedule, const QuantumSystem& system) {
  if (bridge.grid.horizon != schedule.horizon())
    throw DomainError("bridge horizon does not match schedule horizon");
  if (terminal_level >= system.num_levels()) throw DomainError("terminal level out of range");
  InformationPath info;
  info.grid = bridge.grid;
  info.terminal_level = terminal_level;
  info.xi.resize(bridge.values.size());
  const double drift = schedule.sigma() * system.energy(terminal_level);
  for (std::size_t k = 0; k < info.xi.size(); ++k)
    info.xi[k] = drift * bridge.grid.times[k] + bridge.values[k];
  return info;
}

void conditional_probabilities_into(double xi, double t, const QuantumSystem& system,
                                    const ReductionSchedule& schedule, std::span<double> out) {
  const double horizon = schedule.horizon();
  if (!(t >= 0.0 && t < horizon)) throw DomainError("conditional probabilities need 0 <= t < T");
  const double sigma = schedule.sigma();
  const auto& pi = system.born_weights();
  // xi_0 carries no information: every level predicts the same point mass at 0.
  if (t == 0.0) {
    std::copy(pi.begin(), pi.end(), out.begin());
    return;
  }
  const double scale = horizon / (horizon - t);

  double max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] <= 0.0) continue;
    const double e = system.energy(i);
    out[i] = std::log(pi[i]) + scale * (sigma * xi * e - 0.5 * sigma * sigma * e * e * t);
    max_exponent = std::max(max_exponent, out[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    out[i] = pi[i] > 0.0 ? std::exp(out[i] - max_exponent) : 0.0;
    total += out[i];
  }
  for (double& p : out) p /= total;
}

std::vector<double> conditional_probabilities(double xi, double t, const QuantumSystem& system,
                                              const ReductionSchedule& schedule) {
  std::vector<double> out(system.num_levels());
  conditional_probabilities_into(xi, t, system, schedule, out);
  return out;
}

EnergyMoments moments_from_probabilities(std::span<const double> probabilities, const QuantumSystem& system) {
  EnergyMoments m;
  for (std::size_t i = 0; i < probabilities.size(); ++i) m.mean += probabilities[i] * system.energy(i);
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double d = system.energy(i) - m.mean;
    m.variance += probabilities[i] * d * d;
  }
  return m;
}

Amplitudes state_vector(double xi, double t, const QuantumSystem& system, const ReductionSchedule& schedule) {
  const double horizon = schedule.horizon();
  if (!(t >= 0.0 && t < horizon)) throw DomainError("state vector formula needs 0 <= t < T; use terminal_limit");
  if (t == 0.0) return system.initial().amplitudes;
  const double sigma_t = schedule.sigma_at(t);
  const double accumulated = schedule.integrated_variance(t);
  const auto& pi = system.born_weights();
  const std::size_t levels = system.num_levels();

  // Half-log amplitude weights; normalizing them is the square root of the softmax.
  std::vector<double> half_log(levels, -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < levels; ++i) {
    if (pi[i] <= 0.0) continue;
    const double e = system.energy(i);
    half_log[i] = 0.5 * std::log(pi[i]) + 0.5 * e * sigma_t * xi - 0.25 * e * e * accumulated;
    max_log = std::max(max_log, half_log[i]);
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < levels; ++i)
    if (pi[i] > 0.0) norm2 += std::exp(2.0 * (half_log[i] - max_log));
  const double log_norm = max_log + 0.5 * std::log(norm2);

  Amplitudes psi(system.dimension(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < levels; ++i) {
    if (pi[i] <= 0.0) continue;
    const double modulus = std::exp(half_log[i] - log_norm);
    const Complex factor = std::polar(modulus, -system.energy(i) * t);
    const Amplitudes& phi = system.lueders_state(i);
    for (std::size_t j : system.spectrum().level_indices[i]) psi[j] = factor * phi[j];
  }
  return psi;
}

Amplitudes terminal_limit(std::size_t terminal_level, const QuantumSystem& system, double horizon) {
  if (terminal_level >= system.num_levels()) throw DomainError("terminal level out of range");
  if (!system.has_lueders_state(terminal_level))
    throw DomainError("terminal level carries zero Born weight");
  const Complex phase = std::polar(1.0, -system.energy(terminal_level) * horizon);
  Amplitudes psi = system.lueders_state(terminal_level);
  for (Complex& a : psi) a *= phase;
  return psi;
}

namespace {

double amplitude_norm(const Amplitudes& psi) {
  double s = 0.0;
  for (const Complex& a : psi) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace

ReductionPath solve_exact(const InformationPath& info, const QuantumSystem& system,
                          const ReductionSchedule& schedule, bool with_amplitudes) {
  if (info.grid.horizon != schedule.horizon()) throw DomainError("path horizon does not match schedule");
  const std::size_t n = info.grid.size();
  const std::size_t levels = system.num_levels();
  ReductionPath out;
  out.grid = info.grid;
  out.probabilities.assign(n, std::vector<double>(levels, 0.0));
  out.energy.resize(n);
  out.variance.resize(n);
  if (with_amplitudes) {
    out.amplitudes.resize(n);
    out.norm.resize(n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double t = info.grid.times[k];
    auto& p = out.probabilities[k];
    if (t >= schedule.horizon()) {
      p[info.terminal_level] = 1.0;
      out.energy[k] = system.energy(info.terminal_level);
      out.variance[k] = 0.0;
      if (with_amplitudes) out.amplitudes[k] = terminal_limit(info.terminal_level, system, schedule.horizon());
    } else {
      conditional_probabilities_into(info.xi[k], t, system, schedule, p);
      const EnergyMoments m = moments_from_probabilities(p, system);
      out.energy[k] = m.mean;
      out.variance[k] = m.variance;
      if (with_amplitudes) out.amplitudes[k] = state_vector(info.xi[k], t, system, schedule);
    }
    if (with_amplitudes) out.norm[k] = amplitude_norm(out.amplitudes[k]);
  }
  return out;
}

NoisePath reconstruct_noise(const InformationPath& info, const ReductionPath& reduction,
                            const ReductionSchedule& schedule) {
  if (info.grid.times != reduction.grid.times) throw DomainError("information and reduction paths use different grids");
  const auto& t = info.grid.times;
  const double horizon = schedule.horizon();
  const double sigma_horizon = schedule.sigma() * horizon;
  NoisePath w{info.grid, std::vector<double>(t.size(), 0.0), NoiseKind::kReconstructedW};
  double drift_integral = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    drift_integral += (info.xi[k - 1] - sigma_horizon * reduction.energy[k - 1]) / (horizon - t[k - 1]) *
                      (t[k] - t[k - 1]);
    w.values[k] = info.xi[k] + drift_integral;
  }
  return w;
}

}  // namespace ftcollapse
