#include "ftcollapse/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ftcollapse/errors.hpp"

namespace ftcollapse {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

QuantumSystem RunConfig::system() const {
  try {
    return build_system(energies, amplitudes, degeneracy_tolerance);
  } catch (const InvalidStateError& e) {
    throw ConfigError(e.what(), "system.amplitudes");
  } catch (const InvalidSystemError& e) {
    throw ConfigError(e.what(), "system.energies");
  }
}

ReductionSchedule RunConfig::schedule() const { return ReductionSchedule(horizon, sigma); }

TimeGrid RunConfig::grid() const { return make_grid(horizon, n_steps, scheme, epsilon_fraction); }

void RunConfig::validate() const {
  if (!(degeneracy_tolerance >= 0.0)) throw ConfigError("must be >= 0", "system.degeneracy_tolerance");
  (void)system();
  (void)schedule();
  const TimeGrid g = grid();
  if (n_paths < 1) throw ConfigError("need at least one path", "ensemble.n_paths");
  if (threads < 0) throw ConfigError("must be >= 0", "threads");

  const auto& steps = verify.convergence_steps;
  if (steps.empty()) throw ConfigError("no step counts given", "verify.convergence_steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] < 2) throw ConfigError("each step count must be >= 2", "verify.convergence_steps");
    if (i > 0 && steps[i] <= steps[i - 1])
      throw ConfigError("step counts must be strictly increasing", "verify.convergence_steps");
    if (steps.back() % steps[i] != 0)
      throw ConfigError("step counts must be nested refinements", "verify.convergence_steps");
  }
  if (verify.convergence_paths < 1) throw ConfigError("need at least one path", "verify.convergence_paths");
  if (!(verify.convergence_bound > 0.0)) throw ConfigError("must be positive", "verify.convergence_bound");
  if (verify.equivalence_paths < 1) throw ConfigError("need at least one path", "verify.equivalence_paths");
  for (double t : verify.probe_times)
    if (!(t > 0.0 && t <= g.t_max())) throw ConfigError("probe times must lie in (0, t_max]", "verify.probe_times");
}

json RunConfig::to_json() const {
  json amps = json::array();
  for (const Complex& a : amplitudes) amps.push_back({a.real(), a.imag()});
  return {
      {"system", {{"energies", energies}, {"amplitudes", amps}, {"degeneracy_tolerance", degeneracy_tolerance}}},
      {"schedule", {{"T", horizon}, {"sigma", sigma}}},
      {"grid", {{"n_steps", n_steps}, {"scheme", std::string(to_string(scheme))}, {"epsilon_fraction", epsilon_fraction}}},
      {"ensemble", {{"n_paths", n_paths}, {"master_seed", master_seed}}},
      {"route", std::string(to_string(route))},
      {"output_dir", output_dir},
      {"threads", threads},
      {"zero_noise", zero_noise},
      {"verify",
       {{"convergence_steps", verify.convergence_steps},
        {"convergence_paths", verify.convergence_paths},
        {"convergence_bound", verify.convergence_bound},
        {"probe_times", verify.probe_times},
        {"equivalence_paths", verify.equivalence_paths}}},
  };
}

namespace {

const json* child(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require_object(const json& obj, const char* key, const std::string& field) {
  const json* j = child(obj, key);
  if (j == nullptr) throw ConfigError("missing section", field);
  if (!j->is_object()) throw ConfigError("expected an object", field);
  return *j;
}

double read_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError("expected a number", field);
  return j.get<double>();
}

std::uint64_t read_unsigned(const json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ConfigError("must be non-negative", field);
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw ConfigError("expected a non-negative integer", field);
}

template <typename Fn>
void optional_field(const json& obj, const char* key, const std::string& prefix, Fn&& fn) {
  if (const json* j = child(obj, key)) fn(*j, prefix.empty() ? std::string(key) : prefix + "." + key);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), "<document>");
  }
  if (!doc.is_object()) throw ConfigError("top level must be an object", "<document>");

  RunConfig cfg;
  const json& sys = require_object(doc, "system", "system");
  const json* energies = child(sys, "energies");
  if (energies == nullptr || !energies->is_array()) throw ConfigError("expected an array of numbers", "system.energies");
  for (std::size_t i = 0; i < energies->size(); ++i)
    cfg.energies.push_back(read_number((*energies)[i], "system.energies[" + std::to_string(i) + "]"));
  const json* amps = child(sys, "amplitudes");
  if (amps == nullptr || !amps->is_array()) throw ConfigError("expected an array of [re, im] pairs", "system.amplitudes");
  for (std::size_t i = 0; i < amps->size(); ++i) {
    const std::string field = "system.amplitudes[" + std::to_string(i) + "]";
    const json& pair = (*amps)[i];
    if (!pair.is_array() || pair.size() != 2) throw ConfigError("expected [re, im]", field);
    cfg.amplitudes.emplace_back(read_number(pair[0], field), read_number(pair[1], field));
  }
  optional_field(sys, "degeneracy_tolerance", "system",
                 [&](const json& j, const std::string& f) { cfg.degeneracy_tolerance = read_number(j, f); });

  if (const json* s = child(doc, "schedule")) {
    if (!s->is_object()) throw ConfigError("expected an object", "schedule");
    optional_field(*s, "T", "schedule", [&](const json& j, const std::string& f) { cfg.horizon = read_number(j, f); });
    optional_field(*s, "sigma", "schedule", [&](const json& j, const std::string& f) { cfg.sigma = read_number(j, f); });
  }
  if (const json* g = child(doc, "grid")) {
    if (!g->is_object()) throw ConfigError("expected an object", "grid");
    optional_field(*g, "n_steps", "grid", [&](const json& j, const std::string& f) { cfg.n_steps = read_unsigned(j, f); });
    optional_field(*g, "scheme", "grid", [&](const json& j, const std::string& f) {
      if (!j.is_string()) throw ConfigError("expected a string", f);
      cfg.scheme = grid_scheme_from_string(j.get<std::string>());
    });
    optional_field(*g, "epsilon_fraction", "grid",
                   [&](const json& j, const std::string& f) { cfg.epsilon_fraction = read_number(j, f); });
  }
  if (const json* e = child(doc, "ensemble")) {
    if (!e->is_object()) throw ConfigError("expected an object", "ensemble");
    optional_field(*e, "n_paths", "ensemble", [&](const json& j, const std::string& f) { cfg.n_paths = read_unsigned(j, f); });
    optional_field(*e, "master_seed", "ensemble",
                   [&](const json& j, const std::string& f) { cfg.master_seed = read_unsigned(j, f); });
  }
  optional_field(doc, "route", "", [&](const json& j, const std::string& f) {
    if (!j.is_string()) throw ConfigError("expected a string", f);
    cfg.route = route_from_string(j.get<std::string>());
  });
  optional_field(doc, "output_dir", "", [&](const json& j, const std::string& f) {
    if (!j.is_string()) throw ConfigError("expected a string", f);
    cfg.output_dir = j.get<std::string>();
  });
  optional_field(doc, "threads", "", [&](const json& j, const std::string& f) {
    cfg.threads = static_cast<int>(read_unsigned(j, f));
  });
  optional_field(doc, "zero_noise", "", [&](const json& j, const std::string& f) {
    if (!j.is_boolean()) throw ConfigError("expected true or false", f);
    cfg.zero_noise = j.get<bool>();
  });
  if (const json* v = child(doc, "verify")) {
    if (!v->is_object()) throw ConfigError("expected an object", "verify");
    optional_field(*v, "convergence_steps", "verify", [&](const json& j, const std::string& f) {
      if (!j.is_array()) throw ConfigError("expected an array", f);
      cfg.verify.convergence_steps.clear();
      for (const json& x : j) cfg.verify.convergence_steps.push_back(read_unsigned(x, f));
    });
    optional_field(*v, "convergence_paths", "verify",
                   [&](const json& j, const std::string& f) { cfg.verify.convergence_paths = read_unsigned(j, f); });
    optional_field(*v, "convergence_bound", "verify",
                   [&](const json& j, const std::string& f) { cfg.verify.convergence_bound = read_number(j, f); });
    optional_field(*v, "probe_times", "verify", [&](const json& j, const std::string& f) {
      if (!j.is_array()) throw ConfigError("expected an array", f);
      cfg.verify.probe_times.clear();
      for (const json& x : j) cfg.verify.probe_times.push_back(read_number(x, f));
    });
    optional_field(*v, "equivalence_paths", "verify",
                   [&](const json& j, const std::string& f) { cfg.verify.equivalence_paths = read_unsigned(j, f); });
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string(), "--config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Tables

std::string format_real(double x) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string path_csv(const ReductionPath& path, const std::vector<double>& xi) {
  const std::size_t levels = path.probabilities.empty() ? 0 : path.probabilities.front().size();
  const std::size_t dim = path.amplitudes.empty() ? 0 : path.amplitudes.front().size();
  std::string out = "t,xi";
  for (std::size_t i = 1; i <= levels; ++i) out += ",pi_" + std::to_string(i);
  out += ",H,V";
  for (std::size_t j = 1; j <= dim; ++j) out += ",re_" + std::to_string(j) + ",im_" + std::to_string(j);
  out += '\n';
  for (std::size_t k = 0; k < path.grid.size(); ++k) {
    out += format_real(path.grid.times[k]);
    out += ',';
    out += k < xi.size() ? format_real(xi[k]) : "nan";
    for (double p : path.probabilities[k]) out += ',' + format_real(p);
    out += ',' + format_real(path.energy[k]) + ',' + format_real(path.variance[k]);
    if (!path.amplitudes.empty())
      for (const Complex& a : path.amplitudes[k]) out += ',' + format_real(a.real()) + ',' + format_real(a.imag());
    out += '\n';
  }
  return out;
}

std::string summary_csv(const EnsembleSummary& s) {
  const std::size_t levels = s.born_weights.size();
  std::string out = "t,mean_H,se_H,mean_V,se_V";
  for (std::size_t i = 1; i <= levels; ++i) out += ",mean_pi_" + std::to_string(i) + ",se_pi_" + std::to_string(i);
  out += '\n';
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    out += format_real(s.grid.times[k]) + ',' + format_real(s.mean_energy[k]) + ',' + format_real(s.se_energy[k]) +
           ',' + format_real(s.mean_variance[k]) + ',' + format_real(s.se_variance[k]);
    for (std::size_t i = 0; i < levels; ++i)
      out += ',' + format_real(s.mean_probability[k][i]) + ',' + format_real(s.se_probability[k][i]);
    out += '\n';
  }
  return out;
}

json summary_json(const EnsembleSummary& s) {
  json probes = json::array();
  for (std::size_t q = 0; q < s.probe_indices.size(); ++q) probes.push_back(s.grid.times[s.probe_indices[q]]);
  json j = {
      {"n_paths", s.n_paths},
      {"route", std::string(to_string(s.route))},
      {"master_seed", s.master_seed},
      {"sigma", s.sigma},
      {"grid",
       {{"T", s.grid.horizon},
        {"n_points", s.grid.size()},
        {"scheme", std::string(to_string(s.grid.scheme))},
        {"epsilon_fraction", s.grid.epsilon_fraction},
        {"t_max", s.grid.t_max()}}},
      {"level_energies", s.level_energies},
      {"born_weights", s.born_weights},
      {"terminal_counts", s.terminal_counts},
      {"terminal_frequencies", s.terminal_frequencies},
      {"probe_times", probes},
  };
  if (s.route == Route::kExact) j["sentinel_max_variance"] = s.sentinel_max_variance;
  return j;
}

json equivalence_json(const EquivalenceReport& r, double horizon, std::size_t n_paths) {
  return {{"max_eta_gap", r.max_eta_gap},
          {"max_prob_gap", r.max_prob_gap},
          {"n_paths", n_paths},
          {"grid_meta",
           {{"T", horizon}, {"n_points", r.n_points}, {"scheme", r.scheme}, {"t_max", r.t_max}, {"tau_max", r.tau_max}}}};
}

// ---------------------------------------------------------------------------
// Files

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_text(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path target = dir / name;
  std::ofstream out(target, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + target.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + target.string());
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 computation failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_manifest(const fs::path& dir, RunManifest manifest, const std::vector<std::string>& file_names) {
  manifest.files.clear();
  for (const std::string& name : file_names) {
    const fs::path p = dir / name;
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    if (ec) throw IoError("cannot stat " + p.string());
    manifest.files.push_back({name, sha256_file(p), size});
  }
  json files = json::array();
  for (const ManifestFile& f : manifest.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  const json doc = {{"tool", "ftcollapse"},
                    {"version", kToolVersion},
                    {"command", manifest.command},
                    {"seed", manifest.seed},
                    {"started_utc", manifest.started_utc},
                    {"finished_utc", manifest.finished_utc},
                    {"config", manifest.config},
                    {"files", files}};
  write_text(dir, "manifest.json", doc.dump(2) + "\n");
}

bool verify_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) return false;
  json doc;
  try {
    doc = json::parse(in);
    for (const json& f : doc.at("files")) {
      const fs::path p = dir / f.at("name").get<std::string>();
      if (!fs::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) return false;
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace ftcollapse
