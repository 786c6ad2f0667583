#include "ftcollapse/stochastic_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

std::string_view to_string(GridScheme scheme) {
  return scheme == GridScheme::kUniformT ? "uniform_t" : "uniform_tau";
}

GridScheme grid_scheme_from_string(std::string_view name) {
  if (name == "uniform_t") return GridScheme::kUniformT;
  if (name == "uniform_tau") return GridScheme::kUniformTau;
  throw ConfigError("unknown grid scheme '" + std::string(name) + "' (expected uniform_t or uniform_tau)",
                    "grid.scheme");
}

TimeGrid TimeGrid::with_sentinel() const {
  TimeGrid g = *this;
  if (!g.has_sentinel()) g.times.push_back(horizon);
  return g;
}

std::size_t TimeGrid::nearest_index(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  const auto k = static_cast<std::size_t>(it - times.begin());
  if (k > 0 && t - times[k - 1] <= *it - t) return k - 1;
  return k;
}

TimeGrid make_grid(double horizon, std::size_t n_steps, GridScheme scheme, double epsilon_fraction) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive", "schedule.T");
  if (n_steps < 2) throw ConfigError("need at least 2 steps", "grid.n_steps");
  if (!(epsilon_fraction > 0.0 && epsilon_fraction < 1.0))
    throw ConfigError("epsilon fraction must lie in (0, 1)", "grid.epsilon_fraction");

  TimeGrid grid;
  grid.horizon = horizon;
  grid.scheme = scheme;
  grid.epsilon_fraction = epsilon_fraction;
  grid.times.resize(n_steps + 1);
  const double t_end = horizon * (1.0 - epsilon_fraction);
  const auto n = static_cast<double>(n_steps);
  if (scheme == GridScheme::kUniformT) {
    const double dt = t_end / n;
    for (std::size_t k = 0; k <= n_steps; ++k) grid.times[k] = static_cast<double>(k) * dt;
  } else {
    const double tau_end = t_end * horizon / (horizon - t_end);
    for (std::size_t k = 0; k <= n_steps; ++k) {
      const double tau = tau_end * static_cast<double>(k) / n;
      grid.times[k] = tau * horizon / (tau + horizon);
    }
  }
  grid.times.back() = t_end;
  return grid;
}

NoisePath sample_brownian(const TimeGrid& grid, SeedSpec seed) {
  RandomStream rng(seed, StreamPurpose::kBrownian);
  NoisePath path{grid, std::vector<double>(grid.size(), 0.0), NoiseKind::kBrownian};
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dt = grid.times[k] - grid.times[k - 1];
    path.values[k] = path.values[k - 1] + std::sqrt(dt) * rng.normal();
  }
  return path;
}

NoisePath bridge_from_bm(const NoisePath& bm, double horizon) {
  if (bm.grid.horizon != horizon) throw DomainError("Brownian path horizon does not match bridge horizon");
  NoisePath bridge{bm.grid, std::vector<double>(bm.values.size(), 0.0), NoiseKind::kBridge};
  const auto& t = bm.grid.times;
  double integral = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    integral += (bm.values[k] - bm.values[k - 1]) / (horizon - t[k - 1]);
    bridge.values[k] = (horizon - t[k]) * integral;
  }
  return bridge;
}

NoisePath sample_bridge_exact(const TimeGrid& grid, double horizon, SeedSpec seed) {
  if (grid.horizon != horizon) throw DomainError("grid horizon does not match bridge horizon");
  RandomStream rng(seed, StreamPurpose::kBridge);
  NoisePath bridge{grid, std::vector<double>(grid.size(), 0.0), NoiseKind::kBridge};
  const auto& t = grid.times;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double remaining = horizon - t[k - 1];
    const double next_remaining = horizon - t[k];
    if (next_remaining <= 0.0) {
      bridge.values[k] = 0.0;
      continue;
    }
    const double mean = bridge.values[k - 1] * next_remaining / remaining;
    const double var = (t[k] - t[k - 1]) * next_remaining / remaining;
    bridge.values[k] = mean + std::sqrt(var) * rng.normal();
  }
  return bridge;
}

}  // namespace ftcollapse
