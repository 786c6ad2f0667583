#include "ftcollapse/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

double tau_of_t(double t, double horizon) {
  if (!(t >= 0.0 && t < horizon)) throw DomainError("tau(t) needs 0 <= t < T");
  return t * horizon / (horizon - t);
}

double t_of_tau(double tau, double horizon) {
  if (!(tau >= 0.0)) throw DomainError("t(tau) needs tau >= 0");
  if (std::isinf(tau)) return horizon;
  return tau * horizon / (tau + horizon);
}

AsymptoticPath fast_forward_bm(const NoisePath& bm, double horizon) {
  const auto& t = bm.grid.times;
  AsymptoticPath out;
  out.tau_grid.resize(t.size());
  out.bm_tilde.assign(t.size(), 0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    out.tau_grid[k] = tau_of_t(t[k], horizon);
    if (k == 0) continue;
    sum += horizon / (horizon - t[k - 1]) * (bm.values[k] - bm.values[k - 1]);
    out.bm_tilde[k] = sum;
  }
  return out;
}

AsymptoticPath asymptotic_information(std::size_t terminal_level, const AsymptoticPath& path, double sigma,
                                      const QuantumSystem& system) {
  if (path.bm_tilde.size() != path.tau_grid.size()) throw DomainError("tau grid and B~ values differ in length");
  AsymptoticPath out = path;
  const double drift = sigma * system.energy(terminal_level);
  out.eta.resize(path.tau_grid.size());
  for (std::size_t k = 0; k < out.eta.size(); ++k) out.eta[k] = drift * path.tau_grid[k] + path.bm_tilde[k];
  return out;
}

std::vector<double> asymptotic_probabilities(double eta, double tau, const QuantumSystem& system, double sigma) {
  if (!(tau >= 0.0)) throw DomainError("asymptotic clock must be >= 0");
  const auto& pi = system.born_weights();
  if (tau == 0.0) return pi;
  std::vector<double> out(pi.size(), 0.0);
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] <= 0.0) continue;
    const double e = system.energy(i);
    out[i] = std::log(pi[i]) + sigma * e * eta - 0.5 * sigma * sigma * e * e * tau;
    max_exponent = std::max(max_exponent, out[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    out[i] = pi[i] > 0.0 ? std::exp(out[i] - max_exponent) : 0.0;
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

EquivalenceReport equivalence_check(const InformationPath& info, const ReductionPath& reduction, double horizon,
                                    double sigma, const QuantumSystem& system) {
  if (!info.generating_bm) throw UnsupportedInputError("information path has no pathwise Brownian motion");
  if (reduction.grid.times != info.grid.times) throw DomainError("information and reduction paths use different grids");

  // The sentinel at T has no image on the tau axis.
  NoisePath bm = *info.generating_bm;
  std::size_t n = info.grid.size();
  if (info.grid.has_sentinel()) --n;
  bm.grid.times.resize(n);
  bm.values.resize(n);

  const AsymptoticPath asym =
      asymptotic_information(info.terminal_level, fast_forward_bm(bm, horizon), sigma, system);

  EquivalenceReport report;
  report.n_points = n;
  report.t_max = info.grid.times[n - 1];
  report.tau_max = asym.tau_grid[n - 1];
  report.scheme = std::string(to_string(info.grid.scheme));
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = asym.tau_grid[k];
    const double eta_from_xi = (1.0 + tau / horizon) * info.xi[k];
    report.max_eta_gap = std::max(report.max_eta_gap, std::abs(eta_from_xi - asym.eta[k]));

    const auto q = asymptotic_probabilities(asym.eta[k], tau, system, sigma);
    const auto& p = reduction.probabilities[k];
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      diff = std::max(diff, std::abs(p[i] - q[i]));
      scale = std::max(scale, std::abs(q[i]));
    }
    report.max_prob_gap = std::max(report.max_prob_gap, diff / scale);
  }
  return report;
}

}  // namespace ftcollapse
