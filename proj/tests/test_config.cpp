#include <doctest.h>

#include <string>

#include "grs/commands.hpp"
#include "grs/config.hpp"

using namespace grs;
using namespace grs::cli;

namespace {

const std::string kMinimal =
    "knowledge.f0 = [0.2, 0]\n"
    "knowledge.G0 = [[1, 0], [0, 1]]\n"
    "knowledge.Lf = 0.1\n"
    "knowledge.LG = 0.2\n";

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& message, const std::string& part) {
  return message.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("bundled configurations load") {
  const std::string dir = GRS_CONFIG_DIR;

  const auto auto_cfg = load_config(dir + "/autoregulation.cfg");
  const auto kb = auto_cfg.knowledge();
  CHECK(kb.dim() == 1);
  CHECK(kb.G0(0, 0) == 0.5);
  CHECK(kb.lipschitz_sum() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(auto_cfg.horizons == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(auto_cfg.union_horizons);
  CHECK(auto_cfg.grid().size() == 2001);
  CHECK(auto_cfg.output_dir == "out/autoregulation");

  const auto fig = load_config(dir + "/anisotropic2d.cfg");
  CHECK(fig.velocity_x == std::vector<double>{1.0, 0.0});
  CHECK(fig.knowledge().dim() == 2);

  const auto iso = load_config(dir + "/isotropic2d.cfg");
  CHECK(iso.knowledge().G0 == Matrix::Identity(2, 2));
  CHECK(iso.grid_counts == std::vector<int>{201, 201});

  CHECK(load_config(dir + "/aircraft.cfg") == aircraft_config());
  CHECK_THROWS_AS(load_config(dir + "/missing.cfg"), ConfigError);
}

TEST_CASE("defaults for optional keys") {
  const auto c = parse_config(kMinimal);
  CHECK_FALSE(c.has_grid());
  CHECK(c.horizons.empty());
  CHECK(c.cfl == 0.5);
  CHECK_FALSE(c.seed_time.has_value());
  CHECK(c.seed == 1);
  CHECK(c.output_dir == "out");
  CHECK(c.start_state() == Vector::Zero(2));
  CHECK_THROWS_AS((void)c.grid(), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto c = parse_config("# header\n\n" + kMinimal + "run.seed = 7   # trailing\n");
  CHECK(c.seed == 7);
}

TEST_CASE("errors carry the source, line and column") {
  const auto unknown = error_of(kMinimal + "  reach.horizon = [1]\n");
  CHECK(mentions(unknown, "test.cfg:5:3"));
  CHECK(mentions(unknown, "unknown key 'reach.horizon'"));

  const auto duplicate = error_of(kMinimal + "knowledge.Lf = 0.3\n");
  CHECK(mentions(duplicate, "test.cfg:5:1"));
  CHECK(mentions(duplicate, "duplicate key"));

  const auto bad_number = error_of(kMinimal + "solver.cfl = 0.5x\n");
  CHECK(mentions(bad_number, "test.cfg:5:14"));
  CHECK(mentions(bad_number, "invalid value '0.5x'"));

  CHECK(mentions(error_of(kMinimal + "run.output_dir = \"out\n"), "unterminated string"));
  CHECK(mentions(error_of(kMinimal + "run.seed = 1 2\n"), "unexpected trailing characters"));
  CHECK(mentions(error_of(kMinimal + "reach.union = 1\n"), "expected true or false"));
  CHECK(mentions(error_of(kMinimal + "reach.union = yes\n"), "invalid value 'yes'"));
  CHECK(mentions(error_of(kMinimal + "grid.counts = [1.5]\n"), "expected an integer"));
}

TEST_CASE("semantic validation") {
  CHECK(mentions(error_of("knowledge.f0 = [0]\nknowledge.G0 = [[1]]\nknowledge.Lf = 0\n"),
                 "knowledge.LG: missing required key"));
  CHECK(mentions(error_of(kMinimal + "reach.horizons = []\n"), "at least one horizon"));
  CHECK(mentions(error_of(kMinimal + "reach.horizons = [1, 0.5]\n"), "ascending"));
  CHECK(mentions(error_of(kMinimal + "reach.horizons = [-1]\n"), "non-negative"));
  CHECK(mentions(error_of(kMinimal + "solver.cfl = 1.5\n"), "solver.cfl"));
  CHECK(mentions(error_of(kMinimal + "solver.seed_time = -0.1\n"), "solver.seed_time"));
  CHECK(mentions(error_of(kMinimal + "grid.lower = [0, 0]\n"), "go together"));
  CHECK(mentions(error_of(kMinimal + "reach.x0 = [1]\n"), "reach.x0: dimension mismatch"));
  CHECK(mentions(error_of(kMinimal + "velocity.directions = 4\n"), "velocity.directions"));
  CHECK(mentions(error_of("knowledge.f0 = [0, 0]\nknowledge.G0 = [[1, 0]]\n"
                          "knowledge.Lf = 0\nknowledge.LG = 0\n"),
                 "knowledge.G0"));
  CHECK(mentions(error_of(kMinimal + "knowledge.Lf = -1\n"), "duplicate"));
  CHECK(mentions(error_of("knowledge.f0 = [0]\nknowledge.G0 = [[1]]\nknowledge.Lf = -1\n"
                          "knowledge.LG = 0\n"),
                 "knowledge.Lf: must be >= 0"));
}

TEST_CASE("serialization round trip") {
  RunConfig c = aircraft_config();
  c.seed_time = 0.125;
  c.x0 = {0.1, -0.3};
  c.velocity_x = {1.0 / 3.0, 2.0};
  c.seed = 123456789012345ULL;
  c.output_dir = "some dir/out";
  c.cfl = 0.3;
  const auto text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
  CHECK(parse_config(serialize_config(autoregulation_config())) == autoregulation_config());
}

TEST_CASE("grid scale multiplies the number of intervals") {
  RunConfig c = autoregulation_config();
  apply_grid_scale(c, 2.0);
  CHECK(c.grid_counts == std::vector<int>{4001});
  CHECK(c.grid().spacing(0) == doctest::Approx(0.0005));
  apply_grid_scale(c, 0.25);
  CHECK(c.grid_counts == std::vector<int>{1001});
  CHECK_THROWS_AS(apply_grid_scale(c, 0.0), ConfigError);
  CHECK_THROWS_AS(apply_grid_scale(c, -1.0), ConfigError);
}
