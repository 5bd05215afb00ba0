#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "grs/config.hpp"

namespace grs::cli {

/// Files written by a command, relative to its output directory.
struct ExportBundle {
  std::filesystem::path output_dir;
  std::vector<std::string> files;
};

/// Guaranteed ball, optimistic boundary and refutation scatter at state x.
ExportBundle cmd_velocity_set(const RunConfig& config, const Vector& x,
                              std::ostream& log);

/// Level-set solve per horizon with interval/contour exports and grid dumps.
ExportBundle cmd_reach(const RunConfig& config, std::ostream& log);

struct BenchmarkOptions {
  std::filesystem::path output_dir;
  std::uint64_t seed = 1;
  double cfl = 0.5;
  double grid_scale = 1.0;
};

/// One row of a benchmark report. `relation` is "|c-e|<=tol", ">=" or "<=".
struct CheckRow {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;
  bool pass = false;
};

struct BenchmarkReport {
  ExportBundle exports;
  std::vector<CheckRow> checks;
  bool all_passed() const;
};

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"autoregulation", "aircraft"};
  return names;
}

/// Parameter sets of the two benchmarks (also shipped under configs/).
RunConfig autoregulation_config();
RunConfig aircraft_config();

/// Throws ConfigError for an unknown name.
BenchmarkReport cmd_benchmark(const std::string& name,
                              const BenchmarkOptions& options,
                              std::ostream& log);

void print_report(const BenchmarkReport& report, std::ostream& out);

}  // namespace grs::cli
