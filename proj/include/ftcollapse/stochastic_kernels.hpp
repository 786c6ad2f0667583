#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ftcollapse/random.hpp"

namespace ftcollapse {

enum class GridScheme {
  kUniformT,    // equal steps in t
  kUniformTau,  // equal steps in tau = tT/(T-t); clusters points near T
};

std::string_view to_string(GridScheme scheme);
GridScheme grid_scheme_from_string(std::string_view name);

/// Discretization of [0, T(1 - epsilon_fraction)]. A grid may carry one extra
/// sentinel point exactly at T, which only the exact-limit evaluation uses.
struct TimeGrid {
  double horizon = 1.0;
  std::vector<double> times;
  GridScheme scheme = GridScheme::kUniformT;
  double epsilon_fraction = 0.0;

  std::size_t size() const noexcept { return times.size(); }
  double t_max() const { return times.back(); }
  bool has_sentinel() const { return !times.empty() && times.back() == horizon; }

  /// Copy of the grid with the sentinel point T appended.
  TimeGrid with_sentinel() const;

  /// Grid index closest to time t.
  std::size_t nearest_index(double t) const;
};

/// Throws ConfigError unless T > 0, n_steps >= 2 and 0 < epsilon_fraction < 1.
TimeGrid make_grid(double horizon, std::size_t n_steps, GridScheme scheme, double epsilon_fraction);

enum class NoiseKind {
  kBrownian,        // B_t, or a directly sampled Wiener path W_t
  kBridge,          // beta_t
  kReconstructedW,  // W_t rebuilt from an information path
  kDriftedW,        // W*_t
  kFastForwarded,   // B~_tau, indexed by tau_of_t(grid.times)
};

struct NoisePath {
  TimeGrid grid;
  std::vector<double> values;
  NoiseKind kind = NoiseKind::kBrownian;
};

NoisePath sample_brownian(const TimeGrid& grid, SeedSpec seed);

/// Left-point discretization of beta_t = (T - t) * int_0^t dB_s / (T - s),
/// pathwise in the given Brownian motion.
NoisePath bridge_from_bm(const NoisePath& bm, double horizon);

/// Exact-in-law sequential bridge sampling from the Gaussian transition
/// beta_{t'} | beta_t ~ N(beta_t (T-t')/(T-t), (t'-t)(T-t')/(T-t)).
NoisePath sample_bridge_exact(const TimeGrid& grid, double horizon, SeedSpec seed);

}  // namespace ftcollapse
