#include "ftcollapse/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>

#include "ftcollapse/errors.hpp"
#include "ftcollapse/sde_solver.hpp"

namespace ftcollapse {

namespace fs = std::filesystem;

namespace {

constexpr double kEtaGapBound = 1e-10;
constexpr double kProbGapBound = 1e-12;

/// Maps the error taxonomy onto exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const UnsupportedInputError& e) {
    log << "unsupported input: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

RunManifest start_manifest(const std::string& command, const RunConfig& config) {
  RunManifest m;
  m.command = command;
  m.config = config.to_json();
  m.seed = config.master_seed;
  m.started_utc = utc_timestamp();
  return m;
}

void finish(const fs::path& dir, RunManifest manifest, const std::vector<std::string>& files) {
  manifest.finished_utc = utc_timestamp();
  write_manifest(dir, std::move(manifest), files);
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const fs::path dir = config.output_dir;
    ensure_output_dir(dir);
    RunManifest manifest = start_manifest("simulate", config);

    const QuantumSystem system = config.system();
    const ReductionSchedule schedule = config.schedule();
    const TimeGrid grid = config.grid();
    const SeedSpec seed{config.master_seed, 0};

    std::string csv;
    if (config.route == Route::kExact) {
      const std::size_t level = sample_terminal_energy(system, seed);
      const NoisePath bridge = config.zero_noise
                                   ? NoisePath{grid, std::vector<double>(grid.size(), 0.0), NoiseKind::kBridge}
                                   : sample_bridge_exact(grid, schedule.horizon(), seed);
      const InformationPath info = information_process(level, bridge, schedule, system);
      csv = path_csv(solve_exact(info, system, schedule, true), info.xi);
      log << "simulate: exact route, terminal level " << level + 1 << " (E = " << system.energy(level) << ")\n";
    } else {
      const NoisePath w = config.zero_noise ? NoisePath{grid, std::vector<double>(grid.size(), 0.0)}
                                            : sample_brownian(grid, seed);
      const ReductionPath path = integrate_sde(system, w, IntegratorConfig{grid, schedule, true, true});
      csv = path_csv(path, information_from_noise(w, path.energy, schedule));
      log << "simulate: sde route, H(t_max) = " << path.energy.back() << '\n';
    }
    write_text(dir, "path.csv", csv);
    finish(dir, std::move(manifest), {"path.csv"});
    return kExitOk;
  });
}

int cmd_ensemble(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const fs::path dir = config.output_dir;
    ensure_output_dir(dir);
    RunManifest manifest = start_manifest("ensemble", config);

    EnsembleOptions options;
    options.threads = config.threads;
    const EnsembleSummary summary = run_ensemble(config.system(), config.schedule(), config.grid(), config.n_paths,
                                                 config.master_seed, config.route, options);
    write_text(dir, "summary.csv", summary_csv(summary));
    write_text(dir, "summary.json", summary_json(summary).dump(2) + "\n");
    finish(dir, std::move(manifest), {"summary.csv", "summary.json"});
    log << "ensemble: " << summary.n_paths << " paths, " << to_string(summary.route) << " route\n";
    return kExitOk;
  });
}

EquivalenceReport equivalence_over_paths(const QuantumSystem& system, const ReductionSchedule& schedule,
                                         const TimeGrid& grid, std::size_t n_paths, std::uint64_t master_seed,
                                         bool zero_noise, int threads) {
  std::vector<EquivalenceReport> reports(n_paths);
  const int n_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
  for (std::size_t path = 0; path < n_paths; ++path) {
    const SeedSpec seed{master_seed, path};
    const std::size_t level = sample_terminal_energy(system, seed);
    const NoisePath bm =
        zero_noise ? NoisePath{grid, std::vector<double>(grid.size(), 0.0)} : sample_brownian(grid, seed);
    InformationPath info = information_process(level, bridge_from_bm(bm, schedule.horizon()), schedule, system);
    info.generating_bm = bm;
    const ReductionPath reduction = solve_exact(info, system, schedule, false);
    reports[path] = equivalence_check(info, reduction, schedule.horizon(), schedule.sigma(), system);
  }
  EquivalenceReport total = reports.front();
  for (const EquivalenceReport& r : reports) {
    total.max_eta_gap = std::max(total.max_eta_gap, r.max_eta_gap);
    total.max_prob_gap = std::max(total.max_prob_gap, r.max_prob_gap);
  }
  return total;
}

int cmd_timechange(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    if (config.route != Route::kExact)
      throw ConfigError("the time-change check needs the exact route with a pathwise Brownian motion", "route");
    const fs::path dir = config.output_dir;
    ensure_output_dir(dir);
    RunManifest manifest = start_manifest("timechange", config);

    const ReductionSchedule schedule = config.schedule();
    const std::size_t n_paths = config.verify.equivalence_paths;
    const EquivalenceReport report = equivalence_over_paths(config.system(), schedule, config.grid(), n_paths,
                                                            config.master_seed, config.zero_noise, config.threads);
    write_text(dir, "equivalence.json", equivalence_json(report, schedule.horizon(), n_paths).dump(2) + "\n");
    finish(dir, std::move(manifest), {"equivalence.json"});
    const bool ok = report.max_eta_gap <= kEtaGapBound && report.max_prob_gap <= kProbGapBound;
    log << "timechange: max eta gap " << report.max_eta_gap << ", max probability gap " << report.max_prob_gap
        << (ok ? " (ok)" : " (FAILED)") << '\n';
    return ok ? kExitOk : kExitVerificationFailed;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const fs::path dir = config.output_dir;
    ensure_output_dir(dir);
    RunManifest manifest = start_manifest("verify", config);

    const QuantumSystem system = config.system();
    const ReductionSchedule schedule = config.schedule();
    const TimeGrid grid = config.grid();
    TestReport report;

    const double timescale = reduction_timescale(2.8);
    report.entries.push_back(make_entry("reduction_timescale_formula", std::abs(timescale - 1.0), 1e-15, false,
                                        {{"delta_H_MeV", 2.8}, {"seconds", timescale}}));

    EnsembleOptions options;
    options.threads = config.threads;
    if (config.route == Route::kExact) options.probe_times = config.verify.probe_times;
    const EnsembleSummary summary =
        run_ensemble(system, schedule, grid, config.n_paths, config.master_seed, config.route, options);
    report.entries.push_back(born_test(summary, system));
    report.append(martingale_test(summary));
    report.append(variance_decay_test(summary, schedule.sigma(), schedule.horizon()));
    if (config.route == Route::kExact) report.append(independence_test(summary, config.verify.probe_times));

    const ConvergenceStudy study =
        convergence_study(system, schedule, config.verify.convergence_steps, config.verify.convergence_paths,
                          config.master_seed, config.scheme, config.epsilon_fraction, config.threads);
    ConvergenceThresholds thresholds;
    thresholds.finest_energy_gap = config.verify.convergence_bound;
    thresholds.integral_form_gap = config.verify.convergence_bound;
    report.append(convergence_test(study, thresholds));

    const EquivalenceReport eq = equivalence_over_paths(system, schedule, grid, config.verify.equivalence_paths,
                                                        config.master_seed, config.zero_noise, config.threads);
    const nlohmann::json eq_meta = equivalence_json(eq, schedule.horizon(), config.verify.equivalence_paths);
    report.entries.push_back(make_entry("timechange_eta_identity", eq.max_eta_gap, kEtaGapBound, false, eq_meta));
    report.entries.push_back(make_entry("timechange_probability_identity", eq.max_prob_gap, kProbGapBound, false, eq_meta));

    write_text(dir, "report.json", report.to_json().dump(2) + "\n");
    finish(dir, std::move(manifest), {"report.json"});
    for (const TestEntry& e : report.entries)
      log << (e.passed ? "PASS " : "FAIL ") << e.name << "  statistic=" << e.statistic << (e.strict ? " < " : " <= ")
          << e.threshold << '\n';
    return report.all_passed() ? kExitOk : kExitVerificationFailed;
  });
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-time energy-based state reduction: simulation and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> steps;
  std::optional<std::string> route;
  std::optional<int> threads;
  bool zero_noise = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Simulate one path and write path.csv"},
      {"ensemble", "Run an ensemble and write summary.csv / summary.json"},
      {"verify", "Run the verification suite and write report.json"},
      {"timechange", "Check the time-change identity and write equivalence.json"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--paths", paths, "Number of paths");
    sub->add_option("--steps", steps, "Grid steps");
    sub->add_option("--route", route, "exact or sde");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sub->add_flag("--zero-noise", zero_noise, "Replace all noise by zero (debugging)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunConfig config;
  const int load_status = guarded(err, [&] {
    config = load_config(config_path);
    if (out_dir) config.output_dir = *out_dir;
    if (seed) config.master_seed = *seed;
    if (paths) config.n_paths = *paths;
    if (steps) config.n_steps = *steps;
    if (route) config.route = route_from_string(*route);
    if (threads) config.threads = *threads;
    if (zero_noise) config.zero_noise = true;
    return kExitOk;
  });
  if (load_status != kExitOk) return load_status;

  if (command == "simulate") return cmd_simulate(config, out);
  if (command == "ensemble") return cmd_ensemble(config, out);
  if (command == "verify") return cmd_verify(config, out);
  return cmd_timechange(config, out);
}

}  // namespace ftcollapse
