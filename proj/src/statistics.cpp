#include "ftcollapse/statistics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ftcollapse/errors.hpp"
#include "ftcollapse/sde_solver.hpp"
#include "ftcollapse/timechange.hpp"

namespace ftcollapse {

std::string_view to_string(Route route) { return route == Route::kExact ? "exact" : "sde"; }

Route route_from_string(std::string_view name) {
  if (name == "exact") return Route::kExact;
  if (name == "sde") return Route::kSde;
  throw ConfigError("unknown route '" + std::string(name) + "' (expected exact or sde)", "route");
}

namespace {

constexpr std::size_t kBlockPaths = 512;
// Deviations below this are treated as rounding, not as statistical signal.
constexpr double kAbsoluteFloor = 1e-12;

struct Welford {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }

  void merge(const Welford& other) {
    if (other.count == 0.0) return;
    if (count == 0.0) {
      *this = other;
      return;
    }
    const double total = count + other.count;
    const double d = other.mean - mean;
    mean += d * other.count / total;
    m2 += other.m2 + d * d * count * other.count / total;
    count = total;
  }

  double standard_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

/// Accumulators for one grid: per time [H, V, pi_0 .. pi_{L-1}].
struct GridMoments {
  std::size_t width = 0;
  std::vector<Welford> cells;

  GridMoments(std::size_t n_times, std::size_t levels) : width(levels + 2), cells(n_times * (levels + 2)) {}

  void add(std::size_t k, double energy, double variance, std::span<const double> p) {
    Welford* row = &cells[k * width];
    row[0].add(energy);
    row[1].add(variance);
    for (std::size_t i = 0; i < p.size(); ++i) row[2 + i].add(p[i]);
  }

  void merge(const GridMoments& other) {
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c].merge(other.cells[c]);
  }
};

struct PathOutcome {
  std::size_t terminal_level = 0;
  double sentinel_variance = -1.0;
};

std::size_t argmax(std::span<const double> p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

/// Simulates one path and streams (k, H, V, pi) into `moments`.
PathOutcome run_path(const QuantumSystem& system, const ReductionSchedule& schedule, const TimeGrid& grid,
                     SeedSpec seed, Route route, const std::vector<std::size_t>& probe_indices,
                     std::vector<std::vector<std::pair<double, double>>>& covariance_samples, GridMoments& moments) {
  const std::size_t levels = system.num_levels();
  std::vector<double> p(levels);
  PathOutcome outcome;

  if (route == Route::kExact) {
    const std::size_t level = sample_terminal_energy(system, seed);
    const NoisePath bridge = sample_bridge_exact(grid, schedule.horizon(), seed);
    const InformationPath info = information_process(level, bridge, schedule, system);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      conditional_probabilities_into(info.xi[k], grid.times[k], system, schedule, p);
      const EnergyMoments m = moments_from_probabilities(p, system);
      moments.add(k, m.mean, m.variance, p);
    }
    const double terminal_energy = system.energy(level);
    for (std::size_t q = 0; q < probe_indices.size(); ++q) {
      const std::size_t k = probe_indices[q];
      const double beta = info.xi[k] - schedule.sigma() * grid.times[k] * terminal_energy;
      covariance_samples[q][seed.path_index] = {beta, terminal_energy};
    }
    // Energy variance of the analytic terminal state, from its level populations.
    const Amplitudes psi_t = terminal_limit(level, system, schedule.horizon());
    std::fill(p.begin(), p.end(), 0.0);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < psi_t.size(); ++j) {
      p[system.spectrum().level_of[j]] += std::norm(psi_t[j]);
      norm2 += std::norm(psi_t[j]);
    }
    for (double& x : p) x /= norm2;
    outcome.sentinel_variance = moments_from_probabilities(p, system).variance;
    outcome.terminal_level = level;
    return outcome;
  }

  const NoisePath w = sample_brownian(grid, seed);
  Amplitudes psi = system.initial().amplitudes;
  const auto push = [&](std::size_t k) {
    std::fill(p.begin(), p.end(), 0.0);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const double a = std::norm(psi[j]);
      p[system.spectrum().level_of[j]] += a;
      norm2 += a;
    }
    for (double& x : p) x /= norm2;
    const EnergyMoments m = moments_from_probabilities(p, system);
    moments.add(k, m.mean, m.variance, p);
  };
  push(0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double t = grid.times[k - 1];
    psi = euler_step(psi, t, grid.times[k] - t, w.values[k] - w.values[k - 1], system, schedule, true);
    push(k);
  }
  outcome.terminal_level = argmax(p);
  return outcome;
}

EnsembleSummary prepare_summary(const QuantumSystem& system, const ReductionSchedule& schedule, const TimeGrid& grid,
                                std::size_t n_paths, std::uint64_t master_seed, Route route,
                                const EnsembleOptions& options) {
  if (n_paths < 1) throw ConfigError("need at least one path", "ensemble.n_paths");
  if (grid.horizon != schedule.horizon()) throw ConfigError("grid horizon does not match schedule", "schedule.T");
  if (grid.has_sentinel()) throw ConfigError("ensemble grid must stop before T", "grid");
  EnsembleSummary s;
  s.n_paths = n_paths;
  s.grid = grid;
  s.route = route;
  s.sigma = schedule.sigma();
  s.master_seed = master_seed;
  s.born_weights = system.born_weights();
  s.level_energies = system.spectrum().distinct_energies;
  if (route == Route::kExact) {
    for (double t : options.probe_times) s.probe_indices.push_back(grid.nearest_index(t));
    s.covariance_samples.assign(s.probe_indices.size(), std::vector<std::pair<double, double>>(n_paths));
  }
  return s;
}

void finalize_summary(EnsembleSummary& s, const GridMoments& moments, const std::vector<PathOutcome>& outcomes,
                      std::size_t levels) {
  const std::size_t n = s.grid.size();
  s.mean_energy.resize(n);
  s.se_energy.resize(n);
  s.mean_variance.resize(n);
  s.se_variance.resize(n);
  s.mean_probability.assign(n, std::vector<double>(levels));
  s.se_probability.assign(n, std::vector<double>(levels));
  for (std::size_t k = 0; k < n; ++k) {
    const Welford* row = &moments.cells[k * moments.width];
    s.mean_energy[k] = row[0].mean;
    s.se_energy[k] = row[0].standard_error();
    s.mean_variance[k] = row[1].mean;
    s.se_variance[k] = row[1].standard_error();
    for (std::size_t i = 0; i < levels; ++i) {
      s.mean_probability[k][i] = row[2 + i].mean;
      s.se_probability[k][i] = row[2 + i].standard_error();
    }
  }
  s.terminal_counts.assign(levels, 0);
  double sentinel = -1.0;
  for (const PathOutcome& o : outcomes) {
    ++s.terminal_counts[o.terminal_level];
    sentinel = std::max(sentinel, o.sentinel_variance);
  }
  s.terminal_frequencies.resize(levels);
  for (std::size_t i = 0; i < levels; ++i)
    s.terminal_frequencies[i] = static_cast<double>(s.terminal_counts[i]) / static_cast<double>(s.n_paths);
  s.sentinel_max_variance = s.route == Route::kExact ? sentinel : -1.0;
}

}  // namespace

EnsembleSummary run_ensemble(const QuantumSystem& system, const ReductionSchedule& schedule, const TimeGrid& grid,
                             std::size_t n_paths, std::uint64_t master_seed, Route route,
                             const EnsembleOptions& options) {
  EnsembleSummary s = prepare_summary(system, schedule, grid, n_paths, master_seed, route, options);
  const std::size_t levels = system.num_levels();
  const std::size_t n_blocks = (n_paths + kBlockPaths - 1) / kBlockPaths;
  std::vector<GridMoments> blocks(n_blocks, GridMoments(grid.size(), levels));
  std::vector<PathOutcome> outcomes(n_paths);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t b = 0; b < n_blocks; ++b) {
    const std::size_t end = std::min(n_paths, (b + 1) * kBlockPaths);
    for (std::size_t path = b * kBlockPaths; path < end; ++path)
      outcomes[path] = run_path(system, schedule, grid, SeedSpec{master_seed, path}, route, s.probe_indices,
                                s.covariance_samples, blocks[b]);
  }

  GridMoments total(grid.size(), levels);
  for (const GridMoments& block : blocks) total.merge(block);
  finalize_summary(s, total, outcomes, levels);
  return s;
}

EnsembleSummary run_ensemble_serial(const QuantumSystem& system, const ReductionSchedule& schedule,
                                    const TimeGrid& grid, std::size_t n_paths, std::uint64_t master_seed, Route route,
                                    const EnsembleOptions& options) {
  EnsembleSummary s = prepare_summary(system, schedule, grid, n_paths, master_seed, route, options);
  const std::size_t levels = system.num_levels();
  GridMoments total(grid.size(), levels);
  std::vector<PathOutcome> outcomes(n_paths);
  for (std::size_t path = 0; path < n_paths; ++path)
    outcomes[path] = run_path(system, schedule, grid, SeedSpec{master_seed, path}, route, s.probe_indices,
                              s.covariance_samples, total);
  finalize_summary(s, total, outcomes, levels);
  return s;
}

// ---------------------------------------------------------------------------
// Verdicts

TestEntry make_entry(std::string name, double statistic, double threshold, bool strict, nlohmann::json metadata) {
  TestEntry e;
  e.name = std::move(name);
  e.statistic = statistic;
  e.threshold = threshold;
  e.strict = strict;
  e.passed = strict ? statistic < threshold : statistic <= threshold;
  e.metadata = std::move(metadata);
  return e;
}

bool TestReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const TestEntry& e) { return e.passed; });
}

void TestReport::append(const std::vector<TestEntry>& more) { entries.insert(entries.end(), more.begin(), more.end()); }

nlohmann::json TestReport::to_json() const {
  nlohmann::json tests = nlohmann::json::array();
  for (const TestEntry& e : entries) {
    nlohmann::json j;
    j["name"] = e.name;
    j["statistic"] = e.statistic;  // inf serializes as null
    j["threshold"] = e.threshold;
    j["comparison"] = e.strict ? "<" : "<=";
    j["verdict"] = e.passed ? "pass" : "fail";
    j["metadata"] = e.metadata;
    tests.push_back(std::move(j));
  }
  return {{"all_passed", all_passed()}, {"tests", std::move(tests)}};
}

namespace {

/// Excess deviation in standard errors; zero when within the rounding floor.
double z_score(double deviation, double standard_error) {
  const double excess = std::abs(deviation) - kAbsoluteFloor;
  if (excess <= 0.0) return 0.0;
  if (standard_error <= 0.0) return std::numeric_limits<double>::infinity();
  return excess / standard_error;
}

double one_sided_z(double excess_value, double standard_error) {
  return excess_value <= 0.0 ? 0.0 : z_score(excess_value, standard_error);
}

}  // namespace

TestEntry born_test(const EnsembleSummary& summary, const QuantumSystem& system) {
  const auto& pi = system.born_weights();
  const double n = static_cast<double>(summary.n_paths);
  double worst = 0.0;
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] <= 0.0) continue;
    const double se = std::sqrt(pi[i] * (1.0 - pi[i]) / n);
    const double z = z_score(summary.terminal_frequencies[i] - pi[i], se);
    worst = std::max(worst, z);
    levels.push_back({{"level", i}, {"born", pi[i]}, {"frequency", summary.terminal_frequencies[i]}, {"z", z}});
  }
  return make_entry("born_law", worst, kStandardErrorBand, false, {{"levels", levels}, {"n_paths", summary.n_paths}});
}

std::vector<TestEntry> martingale_test(const EnsembleSummary& summary) {
  const std::size_t n = summary.mean_energy.size();
  const double h0 = summary.mean_energy.front();
  double worst_h = 0.0;
  std::size_t worst_h_index = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double z = z_score(summary.mean_energy[k] - h0, summary.se_energy[k]);
    if (z > worst_h) {
      worst_h = z;
      worst_h_index = k;
    }
  }
  const auto& p0 = summary.mean_probability.front();
  double worst_p = 0.0;
  std::size_t worst_p_index = 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < p0.size(); ++i) {
      const double z = z_score(summary.mean_probability[k][i] - p0[i], summary.se_probability[k][i]);
      if (z > worst_p) {
        worst_p = z;
        worst_p_index = k;
      }
    }
  return {
      make_entry("energy_martingale", worst_h, kStandardErrorBand, false,
                 {{"probe_times", n}, {"initial_energy", h0}, {"worst_time", summary.grid.times[worst_h_index]}}),
      make_entry("probability_martingale", worst_p, kStandardErrorBand, false,
                 {{"probe_times", n}, {"worst_time", summary.grid.times[worst_p_index]}}),
  };
}

std::vector<TestEntry> variance_decay_test(const EnsembleSummary& summary, double sigma, double horizon) {
  const auto& v = summary.mean_variance;
  const auto& se = summary.se_variance;
  const auto& t = summary.grid.times;
  const double v0 = v.front();
  std::vector<TestEntry> out;

  double ceiling = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) ceiling = std::max(ceiling, one_sided_z(v[k] - v0, se[k]));
  out.push_back(make_entry("variance_ceiling", ceiling, kStandardErrorBand, false, {{"initial_variance", v0}}));

  double monotone = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k)
    monotone = std::max(monotone, one_sided_z(v[k] - v[k - 1], std::max(se[k], se[k - 1])));
  out.push_back(make_entry("variance_nonincreasing", monotone, kStandardErrorBand));

  const std::size_t mid = summary.grid.nearest_index(0.5 * summary.grid.t_max());
  const std::size_t late = summary.grid.nearest_index(0.999 * summary.grid.t_max());
  // A pure initial state has nothing to decay; equality is then the expected outcome.
  out.push_back(make_entry("variance_late_below_mid", v[late] - v[mid], 0.0, v0 > 0.0,
                           {{"mid_time", t[mid]}, {"mid_variance", v[mid]}, {"late_time", t[late]},
                            {"late_variance", v[late]}}));

  // Integrated form of dV/dt <= -sigma_t^2 V^2 with V_s >= V_t for s <= t.
  double jensen = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (t[k] >= horizon) continue;
    const double clock = sigma * sigma * tau_of_t(t[k], horizon);
    const double lhs = v[k] + clock * v[k] * v[k];
    jensen = std::max(jensen, one_sided_z(lhs - v0, (1.0 + 2.0 * clock * v[k]) * se[k]));
  }
  out.push_back(make_entry("variance_integrated_bound", jensen, kStandardErrorBand));

  if (summary.route == Route::kExact) {
    double e_max = 0.0;
    for (double e : summary.level_energies) e_max = std::max(e_max, std::abs(e));
    const double machine = std::numeric_limits<double>::epsilon() * (1.0 + e_max * e_max);
    out.push_back(make_entry("variance_zero_at_T", summary.sentinel_max_variance, machine));
  }
  return out;
}

std::vector<TestEntry> independence_test(const EnsembleSummary& summary, const std::vector<double>& probe_times) {
  const double horizon = summary.grid.horizon;
  double worst_cov = 0.0;
  double worst_var = 0.0;
  nlohmann::json probes = nlohmann::json::array();
  for (double probe : probe_times) {
    const std::size_t k = summary.grid.nearest_index(probe);
    const auto it = std::find(summary.probe_indices.begin(), summary.probe_indices.end(), k);
    if (it == summary.probe_indices.end())
      throw ConfigError("no (beta, H_T) samples recorded at probe time " + std::to_string(probe), "verify.probe_times");
    const auto& samples = summary.covariance_samples[static_cast<std::size_t>(it - summary.probe_indices.begin())];
    const double n = static_cast<double>(samples.size());
    Welford beta, energy;
    for (const auto& [b, h] : samples) {
      beta.add(b);
      energy.add(h);
    }
    Welford product;
    for (const auto& [b, h] : samples) product.add((b - beta.mean) * (h - energy.mean));
    const double cov = product.mean * n / std::max(1.0, n - 1.0);
    const double z = z_score(cov, product.standard_error());
    const double t = summary.grid.times[k];
    const double expected_var = t * (horizon - t) / horizon;
    const double sample_var = n > 1.0 ? beta.m2 / (n - 1.0) : 0.0;
    const double rel = expected_var > 0.0 ? std::abs(sample_var - expected_var) / expected_var : 0.0;
    worst_cov = std::max(worst_cov, z);
    worst_var = std::max(worst_var, rel);
    probes.push_back({{"t", t},
                      {"covariance", cov},
                      {"covariance_se", product.standard_error()},
                      {"beta_variance", sample_var},
                      {"expected_variance", expected_var}});
  }
  return {
      make_entry("independence_beta_terminal_energy", worst_cov, kStandardErrorBand, false, {{"probes", probes}}),
      make_entry("bridge_variance", worst_var, 0.05, false, {{"probes", probes}}),
  };
}

// ---------------------------------------------------------------------------
// Convergence of the SDE route towards the closed-form route

namespace {

struct PathConvergence {
  std::vector<double> energy_gap;
  std::vector<double> norm_error;
  std::vector<double> raw_drift;
  std::vector<double> integral_gap;
  std::vector<int> agrees;
};

NoisePath restrict_noise(const NoisePath& fine, std::size_t stride) {
  NoisePath coarse;
  coarse.grid = fine.grid;
  coarse.kind = fine.kind;
  coarse.grid.times.clear();
  for (std::size_t k = 0; k < fine.values.size(); k += stride) {
    coarse.grid.times.push_back(fine.grid.times[k]);
    coarse.values.push_back(fine.values[k]);
  }
  return coarse;
}

}  // namespace

ConvergenceStudy convergence_study(const QuantumSystem& system, const ReductionSchedule& schedule,
                                   const std::vector<std::size_t>& step_counts, std::size_t n_paths,
                                   std::uint64_t master_seed, GridScheme scheme, double epsilon_fraction,
                                   int threads) {
  if (step_counts.empty()) throw ConfigError("no step counts given", "verify.convergence_steps");
  if (n_paths < 1) throw ConfigError("need at least one path", "verify.convergence_paths");
  for (std::size_t i = 1; i < step_counts.size(); ++i)
    if (step_counts[i] <= step_counts[i - 1])
      throw ConfigError("step counts must be strictly increasing", "verify.convergence_steps");
  const std::size_t finest = step_counts.back();
  for (std::size_t n : step_counts)
    if (n < 2 || finest % n != 0) throw ConfigError("step counts must be nested refinements", "verify.convergence_steps");

  const TimeGrid fine_grid = make_grid(schedule.horizon(), finest, scheme, epsilon_fraction);
  const std::size_t levels_n = step_counts.size();
  std::vector<PathConvergence> per_path(n_paths);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
  for (std::size_t path = 0; path < n_paths; ++path) {
    const SeedSpec seed{master_seed, path};
    const std::size_t level = sample_terminal_energy(system, seed);
    const NoisePath bridge = sample_bridge_exact(fine_grid, schedule.horizon(), seed);
    const InformationPath info = information_process(level, bridge, schedule, system);
    const ReductionPath exact = solve_exact(info, system, schedule, false);
    const NoisePath w_fine = reconstruct_noise(info, exact, schedule);
    const double exact_energy = exact.energy.back();
    const std::size_t exact_class = argmax(exact.probabilities.back());

    PathConvergence& r = per_path[path];
    for (std::size_t n : step_counts) {
      const NoisePath w = restrict_noise(w_fine, finest / n);
      IntegratorConfig cfg{w.grid, schedule, true, true};
      const ReductionPath sde = integrate_sde(system, w, cfg);
      r.energy_gap.push_back(sde.energy.back() - exact_energy);
      r.agrees.push_back(argmax(sde.probabilities.back()) == exact_class ? 1 : 0);
      double norm_err = 0.0;
      for (double x : sde.norm) norm_err = std::max(norm_err, std::abs(x - 1.0));
      r.norm_error.push_back(norm_err);

      const IntegralFormState integral = integral_form_state(w, sde.energy, system, schedule);
      double amp_gap = 0.0;
      for (std::size_t j = 0; j < integral.amplitudes.size(); ++j)
        amp_gap = std::max(amp_gap, std::abs(integral.amplitudes[j] - sde.amplitudes.back()[j]));
      r.integral_gap.push_back(amp_gap);

      cfg.renormalize_each_step = false;
      cfg.record_amplitudes = false;
      const ReductionPath raw = integrate_sde(system, w, cfg);
      double drift = 0.0;
      for (std::size_t k = 1; k < raw.norm.size(); ++k) drift += std::abs(raw.norm[k] - raw.norm[k - 1]);
      r.raw_drift.push_back(drift / static_cast<double>(raw.norm.size() - 1));
    }
  }

  ConvergenceStudy study;
  study.step_counts = step_counts;
  study.n_paths = n_paths;
  const double n = static_cast<double>(n_paths);
  for (std::size_t c = 0; c < levels_n; ++c) {
    double sq_gap = 0.0, sq_int = 0.0, norm_err = 0.0, drift = 0.0, agree = 0.0;
    for (const PathConvergence& r : per_path) {
      sq_gap += r.energy_gap[c] * r.energy_gap[c];
      sq_int += r.integral_gap[c] * r.integral_gap[c];
      norm_err = std::max(norm_err, r.norm_error[c]);
      drift += r.raw_drift[c];
      agree += r.agrees[c];
    }
    study.rms_energy_gap.push_back(std::sqrt(sq_gap / n));
    study.rms_integral_form_gap.push_back(std::sqrt(sq_int / n));
    study.max_renormalized_norm_error.push_back(norm_err);
    study.mean_raw_norm_drift.push_back(drift / n);
    study.classification_agreement.push_back(agree / n);
  }
  return study;
}

namespace {

/// Largest successive ratio; a zero follower counts as full convergence.
double worst_ratio(const std::vector<double>& values) {
  double worst = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double r = values[i] == 0.0 ? 0.0 : values[i] / values[i - 1];
    worst = std::max(worst, r);
  }
  return worst;
}

std::vector<double> ratios(const std::vector<double>& values) {
  std::vector<double> out;
  for (std::size_t i = 1; i < values.size(); ++i) out.push_back(values[i - 1] / values[i]);
  return out;
}

}  // namespace

nlohmann::json to_json(const ConvergenceStudy& study) {
  return {{"step_counts", study.step_counts},
          {"n_paths", study.n_paths},
          {"rms_energy_gap", study.rms_energy_gap},
          {"energy_gap_decrement_ratios", ratios(study.rms_energy_gap)},
          {"max_renormalized_norm_error", study.max_renormalized_norm_error},
          {"mean_raw_norm_drift", study.mean_raw_norm_drift},
          {"rms_integral_form_gap", study.rms_integral_form_gap},
          {"classification_agreement", study.classification_agreement}};
}

std::vector<TestEntry> convergence_test(const ConvergenceStudy& study, const ConvergenceThresholds& thresholds) {
  const nlohmann::json meta = to_json(study);
  double norm_err = 0.0;
  for (double x : study.max_renormalized_norm_error) norm_err = std::max(norm_err, x);
  return {
      make_entry("convergence_gap_decreasing", worst_ratio(study.rms_energy_gap), 1.0, true, meta),
      make_entry("convergence_finest_gap", study.rms_energy_gap.back(), thresholds.finest_energy_gap, true, meta),
      make_entry("norm_renormalized", norm_err, thresholds.renormalized_norm),
      make_entry("norm_raw_drift_shrinks", worst_ratio(study.mean_raw_norm_drift), 1.0, true,
                 {{"mean_raw_norm_drift", study.mean_raw_norm_drift}}),
      make_entry("integral_form_agreement", study.rms_integral_form_gap.back(), thresholds.integral_form_gap, false,
                 {{"rms_integral_form_gap", study.rms_integral_form_gap}}),
      make_entry("route_classification_agreement", 1.0 - study.classification_agreement.back(), 0.01, false,
                 {{"classification_agreement", study.classification_agreement}}),
  };
}

}  // namespace ftcollapse
