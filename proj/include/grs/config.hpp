#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grs/errors.hpp"
#include "grs/level_set.hpp"
#include "grs/velocity_sets.hpp"

namespace grs::cli {

/// Malformed or invalid configuration. Maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parsed run configuration. See docs/config.md for the file schema.
struct RunConfig {
  // knowledge.*
  std::vector<double> f0;
  std::vector<std::vector<double>> G0;
  double Lf = 0.0;
  double LG = 0.0;

  // grid.*
  std::vector<double> grid_lower;
  std::vector<double> grid_upper;
  std::vector<int> grid_counts;

  // reach.*
  std::vector<double> horizons;
  std::vector<double> x0;  ///< empty means the origin
  bool union_horizons = false;

  // solver.*
  double cfl = 0.5;
  std::optional<double> seed_time;  ///< empty means 0.25 / (Lf + LG)

  // velocity.*
  std::vector<double> velocity_x;  ///< empty unless set
  int velocity_samples = 1000;
  int refute_samples = 200;
  int directions = 720;

  // run.*
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;

  KnowledgeBundle knowledge() const;
  bool has_grid() const { return !grid_counts.empty(); }
  /// Throws ConfigError when the grid keys are missing.
  Grid grid() const;
  Vector start_state() const;
};

/// Parses the key-value text. `source` names the input in error messages.
RunConfig parse_config(const std::string& text,
                       const std::string& source = "<config>");

RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Multiplies the number of grid intervals per axis by `scale`
/// (counts c -> round((c - 1) * scale) + 1), so spacing divides by `scale`.
void apply_grid_scale(RunConfig& config, double scale);

}  // namespace grs::cli
