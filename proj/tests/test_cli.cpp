#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "grs/commands.hpp"
#include "grs/config.hpp"

namespace fs = std::filesystem;
using namespace grs::cli;

namespace {

const std::string kBinary = GRS_BINARY;
const std::string kConfigs = GRS_CONFIG_DIR;

class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("grs_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kBinary + " " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  ScratchDir dir;
  const auto log = dir / "log.txt";
  CHECK(run("", log) == 2);
  CHECK(run("benchmark nonesuch --output-dir " + quoted(dir / "b"), log) == 2);
  CHECK(slurp(log).find("nonesuch") != std::string::npos);
  CHECK(run("reach --config " + quoted(dir / "missing.cfg"), log) == 2);
  CHECK(run("reach", log) == 2);
  CHECK(run("benchmark autoregulation --cfl 2 --output-dir " + quoted(dir / "b"), log) == 2);
  CHECK_FALSE(fs::exists(dir / "b"));

  write_file(dir / "bad.cfg", "knowledge.f0 = [0]\nknowledge.G0 = [[1]]\nknowledge.Lf = 0.1\n"
                              "knowledge.LG = 0.1\nknowledge.typo = 1\n");
  CHECK(run("reach --config " + quoted(dir / "bad.cfg"), log) == 2);
  CHECK(slurp(log).find("bad.cfg:5:1: unknown key 'knowledge.typo'") != std::string::npos);

  CHECK(run("velocity-set --config " + quoted(fs::path(kConfigs) / "anisotropic2d.cfg") + " --x 1 2 3 " +
                "--output-dir " + quoted(dir / "v"),
            log) == 2);
  CHECK_FALSE(fs::exists(dir / "v"));
}

TEST_CASE("version flag") {
  ScratchDir dir;
  CHECK(run("--version", dir / "log.txt") == 0);
  CHECK(slurp(dir / "log.txt").find(GRS_VERSION) != std::string::npos);
}

TEST_CASE("velocity-set exports the guaranteed ball") {
  ScratchDir dir;
  const auto out = dir / "vs";
  REQUIRE(run("velocity-set --config " + quoted(fs::path(kConfigs) / "anisotropic2d.cfg") +
                  " --output-dir " + quoted(out),
              dir / "log.txt") == 0);
  for (const char* name : {"velocity_ball.csv", "nominal_ellipsoid.csv", "optimistic_boundary.csv",
                           "guaranteed_boundary.csv", "extreme_ellipsoids.csv",
                           "refutation_samples.csv", "manifest.cfg", "timing.txt"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  std::istringstream ball(slurp(out / "velocity_ball.csv"));
  std::string header, row;
  std::getline(ball, header);
  std::getline(ball, row);
  CHECK(header == "empty,radius,c1,c2");
  CHECK(row.rfind("0,0.6,", 0) == 0);
}

TEST_CASE("velocity-set warns when nothing is guaranteed") {
  ScratchDir dir;
  REQUIRE(run("velocity-set --config " + quoted(fs::path(kConfigs) / "anisotropic2d.cfg") +
                  " --x 10 0 --output-dir " + quoted(dir / "vs"),
              dir / "log.txt") == 0);
  CHECK(slurp(dir / "log.txt").find("warning") != std::string::npos);
  CHECK(slurp(dir / "vs" / "velocity_ball.csv").find("\n1,") != std::string::npos);
}

TEST_CASE("reach manifest reproduces the effective configuration") {
  ScratchDir dir;
  const auto out = dir / "reach";
  REQUIRE(run("reach --config " + quoted(fs::path(kConfigs) / "autoregulation.cfg") +
                  " --grid-scale 0.25 --seed 99 --output-dir " + quoted(out),
              dir / "log.txt") == 0);
  auto expected = load_config(fs::path(kConfigs) / "autoregulation.cfg");
  apply_grid_scale(expected, 0.25);
  expected.seed = 99;
  expected.output_dir = out.string();
  CHECK(parse_config(slurp(out / "manifest.cfg")) == expected);
  for (const char* name : {"intervals.csv", "summary.csv", "value_0.grid", "value_2.grid"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  CHECK(slurp(out / "intervals.csv").find("0.5,") != std::string::npos);
}

TEST_CASE("a numerical failure leaves no partial output") {
  ScratchDir dir;
  write_file(dir / "small.cfg",
             "knowledge.f0 = [0]\nknowledge.G0 = [[0.5]]\nknowledge.Lf = 0.1\nknowledge.LG = 0.7\n"
             "grid.lower = [-0.3]\ngrid.upper = [0.3]\ngrid.counts = [301]\n"
             "reach.horizons = [0.2, 2]\n");
  const auto out = dir / "out";
  CHECK(run("reach --config " + quoted(dir / "small.cfg") + " --output-dir " + quoted(out),
            dir / "log.txt") == 1);
  CHECK(slurp(dir / "log.txt").find("numerical failure") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  fs::create_directories(out);
  write_file(out / "keep.txt", "mine");
  CHECK(run("reach --config " + quoted(dir / "small.cfg") + " --output-dir " + quoted(out),
            dir / "log.txt") == 1);
  CHECK(fs::exists(out / "keep.txt"));
  CHECK(std::distance(fs::directory_iterator(out), fs::directory_iterator()) == 1);
}

TEST_CASE("autoregulation benchmark passes") {
  ScratchDir dir;
  const auto out = dir / "bench";
  CHECK(run("benchmark autoregulation --output-dir " + quoted(out), dir / "log.txt") == 0);
  const auto log = slurp(dir / "log.txt");
  CHECK(log.find("FAIL") == std::string::npos);
  for (const char* name : {"intervals.csv", "control.csv", "analytic.csv", "manifest.cfg", "timing.txt"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
}
