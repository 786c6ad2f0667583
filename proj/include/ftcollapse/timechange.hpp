#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ftcollapse/exact_solver.hpp"

namespace ftcollapse {

/// Clock of the asymptotic model: tau = tT / (T - t), for 0 <= t < T.
double tau_of_t(double t, double horizon);

/// Inverse clock map t = tau T / (tau + T), for tau >= 0.
double t_of_tau(double tau, double horizon);

/// A path of the asymptotic-collapse model, indexed by the image of a finite
/// time grid under tau_of_t.
struct AsymptoticPath {
  std::vector<double> tau_grid;
  std::vector<double> eta;        // sigma tau H_T + B~_tau
  std::vector<double> bm_tilde;   // B~_tau
};

/// B~_{tau_k} = sum_{j<k} T / (T - t_j) dB_j, the fast-forwarded Brownian
/// motion on [0, tau_max]. Fills tau_grid and bm_tilde.
AsymptoticPath fast_forward_bm(const NoisePath& bm, double horizon);

/// eta_tau = sigma tau E_k + B~_tau. Returns a copy of `path` with eta filled.
AsymptoticPath asymptotic_information(std::size_t terminal_level, const AsymptoticPath& path, double sigma,
                                      const QuantumSystem& system);

/// Level probabilities of the asymptotic model: softmax of
/// log pi_i + sigma E_i eta - sigma^2 E_i^2 tau / 2.
std::vector<double> asymptotic_probabilities(double eta, double tau, const QuantumSystem& system, double sigma);

struct EquivalenceReport {
  double max_eta_gap = 0.0;   // max |(1 + tau/T) xi_t - (sigma tau H_T + B~_tau)|
  double max_prob_gap = 0.0;  // max over times of max_i |p_i - q_i| / max_i q_i
  std::size_t n_points = 0;
  double tau_max = 0.0;
  double t_max = 0.0;
  std::string scheme;
};

/// Compares the finite-time path against the asymptotic model evaluated on the
/// same Brownian increments. Throws UnsupportedInputError if `info` does not
/// carry the Brownian motion its bridge was built from.
EquivalenceReport equivalence_check(const InformationPath& info, const ReductionPath& reduction, double horizon,
                                    double sigma, const QuantumSystem& system);

}  // namespace ftcollapse
