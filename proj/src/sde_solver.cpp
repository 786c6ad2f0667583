#include "ftcollapse/sde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

namespace {

struct StateStats {
  double norm2 = 0.0;
  double mean_energy = 0.0;
};

StateStats state_stats(std::span<const Complex> psi, const QuantumSystem& system) {
  StateStats s;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double w = std::norm(psi[j]);
    s.norm2 += w;
    s.mean_energy += w * system.spectrum().energy_of_index(j);
  }
  s.mean_energy /= s.norm2;
  return s;
}

void record(ReductionPath& out, std::size_t k, std::span<const Complex> psi, const QuantumSystem& system,
            bool keep_amplitudes) {
  const auto& spec = system.spectrum();
  auto& p = out.probabilities[k];
  std::fill(p.begin(), p.end(), 0.0);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double w = std::norm(psi[j]);
    p[spec.level_of[j]] += w;
    norm2 += w;
  }
  for (double& x : p) x /= norm2;
  const EnergyMoments m = moments_from_probabilities(p, system);
  out.energy[k] = m.mean;
  out.variance[k] = m.variance;
  out.norm[k] = std::sqrt(norm2);
  if (keep_amplitudes) out.amplitudes[k].assign(psi.begin(), psi.end());
}

}  // namespace

Amplitudes euler_step(std::span<const Complex> amplitudes, double t, double dt, double dw,
                      const QuantumSystem& system, const ReductionSchedule& schedule, bool renormalize) {
  if (!(t + dt < schedule.horizon())) throw DomainError("Euler step reaches or crosses T");
  const double sigma_t = schedule.sigma_at(t);
  const StateStats stats = state_stats(amplitudes, system);
  Amplitudes next(amplitudes.size());
  double norm2 = 0.0;
  for (std::size_t j = 0; j < amplitudes.size(); ++j) {
    const double e = system.spectrum().energy_of_index(j);
    const double gap = e - stats.mean_energy;
    const Complex drift{-0.125 * sigma_t * sigma_t * gap * gap, -e};
    next[j] = amplitudes[j] + (drift * dt + 0.5 * sigma_t * gap * dw) * amplitudes[j];
    norm2 += std::norm(next[j]);
  }
  if (renormalize) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (Complex& a : next) a *= inv;
  }
  return next;
}

ReductionPath integrate_sde(const QuantumSystem& system, const NoisePath& driving_noise,
                            const IntegratorConfig& config) {
  const TimeGrid& grid = config.grid;
  if (grid.horizon != config.schedule.horizon()) throw DomainError("grid horizon does not match schedule");
  if (driving_noise.grid.times != grid.times) throw DomainError("driving noise is not on the integrator grid");
  if (grid.has_sentinel()) throw DomainError("cannot integrate up to the singular time T");

  const std::size_t n = grid.size();
  ReductionPath out;
  out.grid = grid;
  out.probabilities.assign(n, std::vector<double>(system.num_levels(), 0.0));
  out.energy.resize(n);
  out.variance.resize(n);
  out.norm.resize(n);
  if (config.record_amplitudes) out.amplitudes.resize(n);

  Amplitudes psi = system.initial().amplitudes;
  record(out, 0, psi, system, config.record_amplitudes);
  for (std::size_t k = 1; k < n; ++k) {
    const double t = grid.times[k - 1];
    psi = euler_step(psi, t, grid.times[k] - t, driving_noise.values[k] - driving_noise.values[k - 1], system,
                     config.schedule, config.renormalize_each_step);
    record(out, k, psi, system, config.record_amplitudes);
  }
  return out;
}

IntegralFormState integral_form_state(const NoisePath& driving_noise, std::span<const double> energy_path,
                                      const QuantumSystem& system, const ReductionSchedule& schedule) {
  const auto& t = driving_noise.grid.times;
  if (energy_path.size() != t.size()) throw DomainError("energy path and noise use different grids");
  if (driving_noise.grid.horizon != schedule.horizon()) throw DomainError("noise horizon does not match schedule");

  IntegralFormState st;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    const double sigma_s = schedule.sigma_at(t[k - 1]);
    const double dw_star = driving_noise.values[k] - driving_noise.values[k - 1] + sigma_s * energy_path[k - 1] * dt;
    st.sigma_dw_star += sigma_s * dw_star;
    st.sigma_squared_ds += sigma_s * sigma_s * dt;
  }

  const std::size_t levels = system.num_levels();
  const auto& pi = system.born_weights();
  st.log_weights.resize(levels);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < levels; ++i) {
    const double e = system.energy(i);
    st.log_weights[i] = e * st.sigma_dw_star - 0.5 * e * e * st.sigma_squared_ds;
    if (pi[i] > 0.0) max_log = std::max(max_log, st.log_weights[i] + std::log(pi[i]));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < levels; ++i)
    if (pi[i] > 0.0) sum += std::exp(st.log_weights[i] + std::log(pi[i]) - max_log);
  st.log_normalization = max_log + std::log(sum);

  const double t_end = t.back();
  const auto& psi0 = system.initial().amplitudes;
  st.amplitudes.resize(psi0.size());
  for (std::size_t j = 0; j < psi0.size(); ++j) {
    const std::size_t level = system.spectrum().level_of[j];
    const double modulus = std::exp(0.5 * (st.log_weights[level] - st.log_normalization));
    st.amplitudes[j] = std::polar(modulus, -system.energy(level) * t_end) * psi0[j];
  }
  return st;
}

std::vector<double> information_from_noise(const NoisePath& driving_noise, std::span<const double> energy_path,
                                           const ReductionSchedule& schedule) {
  const auto& t = driving_noise.grid.times;
  if (energy_path.size() != t.size()) throw DomainError("energy path and noise use different grids");
  const double horizon = schedule.horizon();
  std::vector<double> xi(t.size(), 0.0);
  double integral = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double dt = t[k] - t[k - 1];
    const double dw_star =
        driving_noise.values[k] - driving_noise.values[k - 1] + schedule.sigma_at(t[k - 1]) * energy_path[k - 1] * dt;
    integral += dw_star / (horizon - t[k - 1]);
    xi[k] = (horizon - t[k]) * integral;
  }
  return xi;
}

}  // namespace ftcollapse
