#pragma once

// Run configuration: a JSON document with the six sections below.  Parsing
// is strict — unknown keys anywhere are rejected (so misspellings never
// fall back to defaults silently) and every violation found is reported,
// not just the first.  A canonical example lives in configs/.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbe {

struct GridConfig {
  int n = 32;        // points per axis; power of two >= 8
  double L = 6.283185307179586476925286766559;  // box edge (default 2 pi)
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct TimeConfig {
  double dt = 1e-3;
  double T = 1.0;                // must be an integer multiple of dt
  double record_interval = 1e-2; // likewise
  double cfl_safety = 0.5;
  friend bool operator==(const TimeConfig&, const TimeConfig&) = default;
};

struct ModelConfig {
  double xi = 0.0;
  double a = 1.0, b = 0.0, c = 1.0;
  bool linearized = false;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct InitConfig {
  std::string u_kind = "zero";  // zero | solenoidal_blob | taylor_green
  std::string q_kind = "zero";  // zero | gaussian_blob | random_smooth
  double amplitude_u = 0.0;
  double amplitude_q = 0.0;
  double width = 1.0;
  std::uint64_t seed = 1;
  friend bool operator==(const InitConfig&, const InitConfig&) = default;
};

struct OutputConfig {
  std::string csv_path;         // empty: no CSV
  std::string checkpoint_path;  // empty: no checkpoints
  double checkpoint_interval = 0.0;  // 0: never; else multiple of dt
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct AnalysisConfig {
  double beta = 0.46666666666666667;  // shell exponent 1/2 - eps/3 at eps = 0.1
  double epsilon = 0.1;
  double fit_t_lo = 0.0, fit_t_hi = 0.0;  // fit window; disabled when hi <= lo
  double contamination_time = -1.0;       // < 0: default to L^2/10
  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct RunConfig {
  GridConfig grid;
  TimeConfig time;
  ModelConfig model;
  InitConfig init;
  OutputConfig output;
  AnalysisConfig analysis;

  double contamination_time_or_default() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// carries every violation found, one "section.key: constraint" line each
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> v);
  std::vector<std::string> violations;
};

RunConfig parse_config(const std::string& text);       // throws ConfigError
RunConfig load_config_file(const std::string& path);   // throws ConfigError
std::string serialize_config(const RunConfig& cfg);    // canonical JSON

}  // namespace qbe
