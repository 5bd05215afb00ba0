#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grs/commands.hpp"
#include "grs/config.hpp"
#include "grs/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kNumerical = 1, kUsage = 2 };

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> cfl;
  std::optional<double> grid_scale;
};

void apply(const Overrides& o, grs::cli::RunConfig& config) {
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.seed) config.seed = *o.seed;
  if (o.cfl) config.cfl = *o.cfl;
  if (o.grid_scale) grs::cli::apply_grid_scale(config, *o.grid_scale);
}

void print_exports(const grs::cli::ExportBundle& bundle) {
  std::cout << "wrote " << bundle.files.size() << " file(s) to "
            << bundle.output_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed reachability sets from local knowledge of control-affine dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GRS_VERSION);

  Overrides overrides;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--output-dir", overrides.output_dir, "Directory for exported files");
    cmd->add_option("--seed", overrides.seed, "Random seed for Monte Carlo sampling");
    cmd->add_option("--cfl", overrides.cfl, "CFL number of the level-set solver, in (0, 1]");
    cmd->add_option("--grid-scale", overrides.grid_scale,
                    "Multiplies the number of grid cells per axis");
  };

  std::string config_path;
  std::vector<double> state;
  auto* velocity = app.add_subcommand("velocity-set", "Guaranteed and optimistic velocity sets at a state");
  velocity->add_option("--config", config_path, "Configuration file")->required();
  velocity->add_option("--x", state, "State, e.g. --x 1 0 (defaults to velocity.x)");
  add_common(velocity);

  auto* reach = app.add_subcommand("reach", "Level-set solve of the guaranteed reach set");
  reach->add_option("--config", config_path, "Configuration file")->required();
  add_common(reach);

  std::string bench_name;
  auto* bench = app.add_subcommand("benchmark", "Run a built-in benchmark against its analytic solution");
  bench->add_option("name", bench_name, "autoregulation | aircraft")->required();
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (velocity->parsed()) {
      auto config = grs::cli::load_config(config_path);
      apply(overrides, config);
      if (state.empty()) state = config.velocity_x;
      if (state.empty()) throw grs::cli::ConfigError("no state given: pass --x or set velocity.x");
      const grs::Vector x = Eigen::Map<const grs::Vector>(
          state.data(), static_cast<Eigen::Index>(state.size()));
      print_exports(grs::cli::cmd_velocity_set(config, x, std::cout));
      return kOk;
    }
    if (reach->parsed()) {
      auto config = grs::cli::load_config(config_path);
      apply(overrides, config);
      print_exports(grs::cli::cmd_reach(config, std::cout));
      return kOk;
    }
    grs::cli::BenchmarkOptions options;
    options.output_dir = overrides.output_dir.value_or("out/" + bench_name);
    options.seed = overrides.seed.value_or(options.seed);
    options.cfl = overrides.cfl.value_or(options.cfl);
    options.grid_scale = overrides.grid_scale.value_or(options.grid_scale);
    const auto report = grs::cli::cmd_benchmark(bench_name, options, std::cout);
    grs::cli::print_report(report, std::cout);
    print_exports(report.exports);
    return report.all_passed() ? kOk : kNumerical;
  } catch (const grs::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const grs::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const grs::DegenerateKnowledgeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const grs::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}
