#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ftcollapse/exact_solver.hpp"

namespace ftcollapse {

enum class Route { kExact, kSde };

std::string_view to_string(Route route);
Route route_from_string(std::string_view name);

struct EnsembleOptions {
  /// Worker threads; 0 means the OpenMP default.
  int threads = 0;
  /// Times at which (beta_t, H_T) pairs are recorded on the exact route.
  std::vector<double> probe_times;
};

/// Cross-path statistics of an ensemble, one row per grid time.
struct EnsembleSummary {
  std::size_t n_paths = 0;
  TimeGrid grid;
  Route route = Route::kExact;
  double sigma = 0.0;
  std::uint64_t master_seed = 0;

  std::vector<double> born_weights;
  std::vector<double> level_energies;

  std::vector<double> mean_energy, se_energy;
  std::vector<double> mean_variance, se_variance;
  std::vector<std::vector<double>> mean_probability, se_probability;  // [time][level]

  std::vector<std::size_t> terminal_counts;
  std::vector<double> terminal_frequencies;

  std::vector<std::size_t> probe_indices;
  /// covariance_samples[probe][path] = (beta_t, H_T); exact route only.
  std::vector<std::vector<std::pair<double, double>>> covariance_samples;

  /// Largest energy variance of the analytic t = T state over all paths
  /// (exact route only; negative when not evaluated).
  double sentinel_max_variance = -1.0;
};

/// OpenMP ensemble runner. Paths are processed in fixed-size blocks whose
/// partial moments are merged in block order, so the result is bitwise
/// independent of the thread count.
EnsembleSummary run_ensemble(const QuantumSystem& system, const ReductionSchedule& schedule, const TimeGrid& grid,
                             std::size_t n_paths, std::uint64_t master_seed, Route route,
                             const EnsembleOptions& options = {});

/// Single-threaded reference: plain sequential Welford accumulation over paths.
EnsembleSummary run_ensemble_serial(const QuantumSystem& system, const ReductionSchedule& schedule,
                                    const TimeGrid& grid, std::size_t n_paths, std::uint64_t master_seed, Route route,
                                    const EnsembleOptions& options = {});

struct TestEntry {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool strict = false;  // pass iff statistic < threshold (else <=)
  bool passed = false;
  nlohmann::json metadata = nlohmann::json::object();
};

TestEntry make_entry(std::string name, double statistic, double threshold, bool strict = false,
                     nlohmann::json metadata = nlohmann::json::object());

struct TestReport {
  std::vector<TestEntry> entries;

  bool all_passed() const;
  void append(const std::vector<TestEntry>& more);
  nlohmann::json to_json() const;
};

/// Deviation allowance, in units of standard errors, for every statistical check.
inline constexpr double kStandardErrorBand = 4.0;

/// Terminal frequencies against the Born weights, max z-score over levels.
TestEntry born_test(const EnsembleSummary& summary, const QuantumSystem& system);

/// Drift-free energy and level probabilities at every grid time.
std::vector<TestEntry> martingale_test(const EnsembleSummary& summary);

/// Ceiling, monotonicity, late-versus-mid decay, the integrated Jensen bound
/// V_t + sigma^2 tau(t) V_t^2 <= V_0, and zero variance at T (exact route).
std::vector<TestEntry> variance_decay_test(const EnsembleSummary& summary, double sigma, double horizon);

/// Zero covariance of beta_t and H_T and bridge variance t(T-t)/T at every probe time.
std::vector<TestEntry> independence_test(const EnsembleSummary& summary, const std::vector<double>& probe_times);

struct ConvergenceStudy {
  std::vector<std::size_t> step_counts;
  std::vector<double> rms_energy_gap;        // SDE vs exact H at t_max
  std::vector<double> max_renormalized_norm_error;
  std::vector<double> mean_raw_norm_drift;   // mean |norm_{k+1} - norm_k| without renormalization
  std::vector<double> rms_integral_form_gap; // max amplitude gap, integral form vs SDE
  std::vector<double> classification_agreement;
  std::size_t n_paths = 0;
};

/// Runs the exact route on the finest grid, reconstructs W, restricts it to
/// each coarser nested grid and integrates the SDE there. Throws ConfigError
/// for non-increasing or non-nested step counts.
ConvergenceStudy convergence_study(const QuantumSystem& system, const ReductionSchedule& schedule,
                                   const std::vector<std::size_t>& step_counts, std::size_t n_paths,
                                   std::uint64_t master_seed, GridScheme scheme, double epsilon_fraction,
                                   int threads = 0);

struct ConvergenceThresholds {
  double finest_energy_gap = 1e-2;
  double renormalized_norm = 1e-12;
  double integral_form_gap = 1e-2;
};

std::vector<TestEntry> convergence_test(const ConvergenceStudy& study, const ConvergenceThresholds& thresholds = {});

nlohmann::json to_json(const ConvergenceStudy& study);

}  // namespace ftcollapse
