#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "grs/contour.hpp"
#include "grs/errors.hpp"
#include "grs/grid_io.hpp"
#include "grs/level_set.hpp"

using namespace grs;
namespace fs = std::filesystem;

namespace {

LevelSetField linear_field(const Grid& g, const Vector& w, double c) {
  LevelSetField f{g, std::vector<double>(g.size()), 0.0};
  for (std::size_t k = 0; k < g.size(); ++k) f.values[k] = w.dot(g.point(k)) + c;
  return f;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "grs_level_set_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid({}, {}, {}), InvalidArgument);
  CHECK_THROWS_AS(Grid({0, 0, 0, 0}, {1, 1, 1, 1}, {16, 16, 16, 16}), InvalidArgument);
  CHECK_THROWS_AS(Grid({0}, {1}, {15}), InvalidArgument);
  CHECK_THROWS_AS(Grid({1}, {1}, {16}), InvalidArgument);
  CHECK_THROWS_AS(Grid({0, 0}, {1}, {16, 16}), InvalidArgument);
  CHECK_THROWS_AS(Grid({0}, {INFINITY}, {16}), InvalidArgument);
}

TEST_CASE("node-centered spacing and row-major layout") {
  const Grid g1({-1.0}, {1.0}, {2001});
  CHECK(g1.spacing(0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(g1.size() == 2001);
  CHECK(g1.point(0)(0) == -1.0);
  CHECK(g1.point(2000)(0) == doctest::Approx(1.0).epsilon(1e-15));

  const Grid g({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}, {16, 17, 18});
  CHECK(g.stride(2) == 1);
  CHECK(g.stride(1) == 18);
  CHECK(g.stride(0) == 17 * 18);
  CHECK(g.max_spacing() == doctest::Approx(3.0 / 17.0));
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{18}, std::size_t{999},
                        g.size() - 1}) {
    CHECK(g.flat(g.index(k)) == k);
  }
  const auto idx = g.index(18 + 2);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 1);
  CHECK(idx[2] == 2);
}

TEST_CASE("edge layers and box containment") {
  const Grid g({-1.0, -1.0}, {1.0, 1.0}, {21, 21});
  CHECK(g.near_edge(g.flat({0, 10, 0}), 2));
  CHECK(g.near_edge(g.flat({10, 19, 0}), 2));
  CHECK_FALSE(g.near_edge(g.flat({10, 10, 0}), 2));
  CHECK(g.near_edge(g.flat({2, 10, 0}), 2));
  CHECK_FALSE(g.near_edge(g.flat({3, 10, 0}), 2));
  CHECK(g.box_contains_ball(Vector::Zero(2), 1.0));
  CHECK_FALSE(g.box_contains_ball(Eigen::Vector2d(0.1, 0.0), 1.0));
}

TEST_CASE("distance field") {
  const Grid g({-1.0, -1.0}, {1.0, 1.0}, {21, 21});
  const Vector x0 = Eigen::Vector2d(0.2, -0.3);
  const auto f = distance_field(g, x0);
  CHECK(f.time == 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(f.values[k] == doctest::Approx((g.point(k) - x0).norm()).epsilon(1e-15));
  }
}

TEST_CASE("multilinear interpolation reproduces affine functions") {
  const Grid g({-1.0, 0.0, 2.0}, {1.0, 1.0, 3.0}, {16, 20, 17});
  const Vector w = Eigen::Vector3d(0.3, -1.2, 2.0);
  const auto f = linear_field(g, w, 0.5);
  for (const Vector& p : {Vector(Eigen::Vector3d(0.123, 0.456, 2.789)),
                          Vector(Eigen::Vector3d(-1.0, 1.0, 3.0)),
                          Vector(Eigen::Vector3d(0.0, 0.5, 2.5))}) {
    CHECK(interpolate(f, p) == doctest::Approx(w.dot(p) + 0.5).epsilon(1e-13));
    CHECK((interpolate_gradient(f, p) - w).norm() <= 1e-11);
  }
  // Outside points are clamped onto the box.
  const Vector outside = Eigen::Vector3d(5.0, 0.5, 2.5);
  const Vector clamped = Eigen::Vector3d(1.0, 0.5, 2.5);
  CHECK(interpolate(f, outside) == doctest::Approx(w.dot(clamped) + 0.5));
}

TEST_CASE("sublevel intervals of a 1-D field") {
  const Grid g({0.0}, {1.0}, {101});
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.point(k)(0);
    v[k] = std::min(std::abs(x - 0.2) - 0.105, std::abs(x - 0.7) - 0.055);
  }
  const auto ivs = sublevel_intervals(g, v);
  REQUIRE(ivs.size() == 2);
  CHECK(ivs[0].lo == doctest::Approx(0.095).epsilon(1e-12));
  CHECK(ivs[0].hi == doctest::Approx(0.305).epsilon(1e-12));
  CHECK(ivs[1].lo == doctest::Approx(0.645).epsilon(1e-12));
  CHECK(ivs[1].hi == doctest::Approx(0.755).epsilon(1e-12));

  std::vector<double> edge(g.size(), -1.0);
  const auto all = sublevel_intervals(g, edge);
  REQUIRE(all.size() == 1);
  CHECK(all[0].lo == 0.0);
  CHECK(all[0].hi == doctest::Approx(1.0));
}

TEST_CASE("marching squares traces a circle") {
  const Grid g({-1.0, -1.0}, {1.0, 1.0}, {81, 81});
  auto f = distance_field(g, Eigen::Vector2d(0.1, 0.05));
  for (double& v : f.values) v -= 0.6;
  const auto lines = marching_squares(g, f.values);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  CHECK(lines[0].points.front() == lines[0].points.back());
  const double h = g.max_spacing();
  for (const auto& p : lines[0].points) {
    CHECK(std::abs((p - Point2(0.1, 0.05)).norm() - 0.6) <= h * h);
  }
}

TEST_CASE("marching squares keeps separate components apart") {
  const Grid g({-1.0, -1.0}, {1.0, 1.0}, {81, 81});
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vector p = g.point(k);
    v[k] = std::min((p - Eigen::Vector2d(-0.5, 0.0)).norm(), (p - Eigen::Vector2d(0.5, 0.0)).norm()) - 0.3;
  }
  const auto lines = marching_squares(g, v);
  CHECK(lines.size() == 2);
  for (const auto& l : lines) CHECK(l.closed);
}

TEST_CASE("marching squares leaves open chains at the domain edge") {
  const Grid g({0.0, 0.0}, {1.0, 1.0}, {21, 21});
  const auto f = linear_field(g, Eigen::Vector2d(1.0, 0.0), -0.52);
  const auto lines = marching_squares(g, f.values);
  REQUIRE(lines.size() == 1);
  CHECK_FALSE(lines[0].closed);
  CHECK(lines[0].points.size() == 21);
  for (const auto& p : lines[0].points) CHECK(p.x() == doctest::Approx(0.52));
}

TEST_CASE("Hausdorff distance of point sets") {
  const std::vector<Point2> a{{0.0, 0.0}, {1.0, 0.0}};
  const std::vector<Point2> b{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}};
  CHECK(hausdorff_distance(a, b) == doctest::Approx(0.5));
  CHECK(hausdorff_distance(a, a) == 0.0);
  CHECK_THROWS_AS(hausdorff_distance(a, {}), InvalidArgument);
}

TEST_CASE("grid dump round trip is bit-exact") {
  const Grid g({-1.0, -0.5}, {1.0, 0.75}, {17, 19});
  auto f = distance_field(g, Eigen::Vector2d(0.1, 0.2));
  f.values[3] = -0.0;
  f.values[5] = 1e-300;
  f.time = 1.0 / 3.0;
  const auto path = scratch("roundtrip.grid");
  write_grid_dump(path, f);
  const auto back = read_grid_dump(path);
  CHECK(back.grid == g);
  CHECK(back.time == f.time);
  REQUIRE(back.values.size() == f.values.size());
  CHECK(std::memcmp(back.values.data(), f.values.data(), f.values.size() * sizeof(double)) == 0);

  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "GRSGRID 1 dim=2 lower=-1,-0.5 upper=1,0.75 counts=17,19 time=0.3333333333333333");
}

TEST_CASE("grid dump rejects malformed input") {
  const auto bad = scratch("bad.grid");
  {
    std::ofstream os(bad, std::ios::binary);
    os << "NOTAGRID 1 dim=1\n";
  }
  CHECK_THROWS_AS(read_grid_dump(bad), InvalidArgument);

  const Grid g({0.0}, {1.0}, {16});
  write_grid_dump(bad, distance_field(g, Vector::Zero(1)));
  fs::resize_file(bad, fs::file_size(bad) - 8);
  CHECK_THROWS_AS(read_grid_dump(bad), InvalidArgument);
  CHECK_THROWS_AS(read_grid_dump(scratch("missing.grid")), InvalidArgument);
}
