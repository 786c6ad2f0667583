#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftcollapse/exact_solver.hpp"
#include "ftcollapse/statistics.hpp"
#include "ftcollapse/timechange.hpp"

namespace ftcollapse {

struct VerifySettings {
  std::vector<std::size_t> convergence_steps{1024, 4096, 16384};
  std::size_t convergence_paths = 100;
  double convergence_bound = 1e-2;
  std::vector<double> probe_times{0.25, 0.5, 0.75};
  std::size_t equivalence_paths = 100;
};

/// Everything a CLI run needs. Parsed from one JSON document; see
/// configs/desk.json for the layout.
struct RunConfig {
  std::vector<double> energies;
  std::vector<Complex> amplitudes;
  double degeneracy_tolerance = 1e-9;

  double horizon = 1.0;
  double sigma = 1.0;

  std::size_t n_steps = 1024;
  GridScheme scheme = GridScheme::kUniformT;
  double epsilon_fraction = 1e-3;

  std::size_t n_paths = 10000;
  std::uint64_t master_seed = 2718281828ULL;

  Route route = Route::kExact;
  std::string output_dir = "out";
  int threads = 0;
  bool zero_noise = false;

  VerifySettings verify;

  QuantumSystem system() const;
  ReductionSchedule schedule() const;
  TimeGrid grid() const;

  /// Checks every precondition of the modules the run touches. Throws
  /// ConfigError naming the field at fault.
  void validate() const;

  nlohmann::json to_json() const;
};

/// Throws ConfigError (with the parser's byte offset for malformed JSON, or the
/// dotted field name for bad values).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
std::string format_real(double x);

std::string path_csv(const ReductionPath& path, const std::vector<double>& xi);
std::string summary_csv(const EnsembleSummary& summary);
nlohmann::json summary_json(const EnsembleSummary& summary);
nlohmann::json equivalence_json(const EquivalenceReport& report, double horizon, std::size_t n_paths);

/// Writes `content` to dir/name; throws IoError on failure.
void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& content);

/// Creates `dir` if needed; throws IoError if it cannot be used for output.
void ensure_output_dir(const std::filesystem::path& dir);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct ManifestFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<ManifestFile> files;
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Hashes `file_names` in `dir` and writes manifest.json next to them.
void write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                    const std::vector<std::string>& file_names);

/// True iff every file listed in dir/manifest.json exists with matching checksum.
bool verify_manifest(const std::filesystem::path& dir);

std::string utc_timestamp();

}  // namespace ftcollapse
