#include "grs/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/version.hpp>

#include "grs/benchmarks.hpp"
#include "grs/ellipsoid.hpp"
#include "grs/errors.hpp"
#include "grs/grid_io.hpp"
#include "grs/hj_reach.hpp"
#include "grs/velocity_sets.hpp"
#include "number_format.hpp"

namespace grs::cli {

namespace fs = std::filesystem;
using detail::format_double;

namespace {

// Collects the files of one command. Unless commit() is reached, the
// destructor deletes everything written so far.
class ExportWriter {
 public:
  explicit ExportWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    created_dir_ = !fs::exists(dir_, ec);
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_.string());
  }
  ExportWriter(const ExportWriter&) = delete;
  ExportWriter& operator=(const ExportWriter&) = delete;

  ~ExportWriter() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(dir_ / f, ec);
    if (created_dir_) fs::remove(dir_, ec);
  }

  std::ofstream open(const std::string& name) {
    files_.push_back(name);
    std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + (dir_ / name).string());
    return os;
  }

  void grid_dump(const std::string& name, const LevelSetField& field) {
    files_.push_back(name);
    write_grid_dump(dir_ / name, field);
  }

  ExportBundle commit() {
    committed_ = true;
    return {dir_, files_};
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
  bool created_dir_ = false;
  bool committed_ = false;
};

using Clock = std::chrono::steady_clock;

void write_manifest(ExportWriter& out, const std::string& command,
                    const RunConfig& config) {
  auto os = out.open("manifest.cfg");
  os << "# grs " << GRS_VERSION << "\n"
     << "# command: " << command << "\n"
     << "# eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
     << EIGEN_MINOR_VERSION << ", boost " << BOOST_LIB_VERSION << "\n"
     << serialize_config(config);
}

void write_timing(ExportWriter& out, Clock::time_point start) {
  auto os = out.open("timing.txt");
  os << "wall_seconds = "
     << format_double(std::chrono::duration<double>(Clock::now() - start).count())
     << "\n";
}

void write_polylines(std::ostream& os, const std::vector<Polyline>& lines,
                     int first_segment = 0) {
  for (std::size_t s = 0; s < lines.size(); ++s) {
    for (const auto& p : lines[s].points) {
      os << format_double(p.x()) << "," << format_double(p.y()) << ","
         << first_segment + static_cast<int>(s) << "\n";
    }
  }
}

std::vector<Point2> polyline_points(const std::vector<Polyline>& lines) {
  std::vector<Point2> pts;
  for (const auto& l : lines) pts.insert(pts.end(), l.points.begin(), l.points.end());
  return pts;
}

Polyline ellipse_curve(const Vector& center, const Matrix& generator, int directions) {
  Polyline line;
  for (int k = 0; k <= directions; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k % directions) / directions;
    const Vector u = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    line.points.push_back(center + generator * u);
  }
  line.closed = true;
  return line;
}

// Outer parallel curve of center + G U at distance rho: the point of the
// ellipse with outward normal G^{-T} u, pushed out along that normal.
Polyline optimistic_curve(const KnowledgeBundle& kb, double rho, int directions) {
  const Matrix normal_map = kb.G0.inverse().transpose();
  Polyline line;
  for (int k = 0; k <= directions; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k % directions) / directions;
    const Vector u = Eigen::Vector2d(std::cos(theta), std::sin(theta));
    const Vector normal = (normal_map * u).normalized();
    line.points.push_back(kb.f0 + kb.G0 * u + rho * normal);
  }
  line.closed = true;
  return line;
}

// ---------------------------------------------------------------- reports

CheckRow within(std::string name, double computed, double expected, double tol) {
  const bool pass = std::isfinite(computed) && std::abs(computed - expected) <= tol;
  return {std::move(name), computed, expected, tol, "|c-e|<=tol", pass};
}

CheckRow at_least(std::string name, double computed, double bound) {
  return {std::move(name), computed, bound, 0.0, ">=", computed >= bound};
}

CheckRow at_most(std::string name, double computed, double bound) {
  return {std::move(name), computed, bound, 0.0, "<=", computed <= bound};
}

// Classic fixed-step RK4 for xdot = rhs(t, x) on [0, T].
template <typename State, typename Rhs>
State rk4(State x, double T, int steps, Rhs rhs) {
  const double h = T / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * h;
    const State k1 = rhs(t, x);
    const State k2 = rhs(t + h / 2, State(x + h / 2 * k1));
    const State k3 = rhs(t + h / 2, State(x + h / 2 * k2));
    const State k4 = rhs(t + h, State(x + h * k3));
    x = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

constexpr int kOdeSteps = 20000;
constexpr double kOdeTol = 1e-8;

// -------------------------------------------------------- autoregulation

double endpoint_error(const Interval& computed, const Interval& exact) {
  return std::max(std::abs(computed.lo - exact.lo), std::abs(computed.hi - exact.hi));
}

Interval single_interval(const ReachSetResult& r) {
  if (r.intervals.size() != 1) {
    throw ConsistencyError("expected one reach interval, found " +
                           std::to_string(r.intervals.size()));
  }
  return r.intervals.front();
}

std::vector<Interval> autoregulation_hj(const RunConfig& config) {
  const auto dyn = build_ramp(config.knowledge());
  const auto fields = reach_fields(config.grid(), dyn, config.start_state(),
                                   config.horizons, config.cfl, config.seed_time);
  std::vector<Interval> out;
  for (const auto& f : fields) {
    out.push_back(single_interval(extract_reach(f, dyn.support_radius())));
  }
  return out;
}

BenchmarkReport run_autoregulation(const BenchmarkOptions& opt, std::ostream& log) {
  const auto start = Clock::now();
  RunConfig config = autoregulation_config();
  config.cfl = opt.cfl;
  config.seed = opt.seed;
  config.output_dir = opt.output_dir.string();
  apply_grid_scale(config, opt.grid_scale);

  BenchmarkReport report;
  auto& checks = report.checks;
  ExportWriter out(opt.output_dir);

  // Closed forms against direct integration of the ramp and true systems.
  const double T1 = 1.0;
  const auto ramp_rhs = [](double u) {
    return [u](double, double x) { return (0.5 - 0.8 * std::abs(x)) * u; };
  };
  const auto grs1 = bench::autoregulation_grs(T1);
  checks.push_back(within("ramp ODE u=+1 vs closed form, T=1",
                          rk4(0.0, T1, kOdeSteps, ramp_rhs(1.0)), grs1.hi, kOdeTol));
  checks.push_back(within("ramp ODE u=-1 vs closed form, T=1",
                          rk4(0.0, T1, kOdeSteps, ramp_rhs(-1.0)), grs1.lo, kOdeTol));
  const auto true_rhs = [](double u) {
    return [u](double, double x) { return bench::autoregulation_true_gain(x) * u; };
  };
  const auto true1 = bench::autoregulation_true_reach(T1);
  checks.push_back(within("true ODE u=+1 vs closed form, T=1",
                          rk4(0.0, T1, kOdeSteps, true_rhs(1.0)), true1.hi, kOdeTol));
  checks.push_back(within("true ODE u=-1 vs closed form, T=1",
                          rk4(0.0, T1, kOdeSteps, true_rhs(-1.0)), true1.lo, kOdeTol));

  // Two consistent systems, f = -/+ 0.1|x| and G = 0.5 - 0.7|x|, each pin one
  // end of the ramp interval, so the intersection of all consistent reach
  // sets cannot exceed it: the underapproximation equals the GRS.
  const auto witness_rhs = [](double sign, double u) {
    return [sign, u](double, double x) {
      return sign * 0.1 * std::abs(x) + (0.5 - 0.7 * std::abs(x)) * u;
    };
  };
  double equality_gap = 0.0;
  for (double T : config.horizons) {
    const auto grs = bench::autoregulation_grs(T);
    const double upper = rk4(0.0, T, kOdeSteps, witness_rhs(-1.0, 1.0));
    const double lower = rk4(0.0, T, kOdeSteps, witness_rhs(1.0, -1.0));
    equality_gap = std::max({equality_gap, std::abs(upper - grs.hi), std::abs(lower - grs.lo)});
  }
  checks.push_back(within("GRS equality via consistent witnesses", equality_gap, 0.0, kOdeTol));

  int violations = 0;
  for (int k = 1; k <= 100; ++k) {
    const double T = 0.1 * k;
    if (!bench::autoregulation_true_reach(T).contains(bench::autoregulation_grs(T))) ++violations;
  }
  checks.push_back(at_most("GRS inside true reach, T in (0,10], violations", violations, 0));

  const double r01 = bench::autoregulation_length_ratio(0.1);
  const double r001 = bench::autoregulation_length_ratio(0.01);
  const double r0001 = bench::autoregulation_length_ratio(0.001);
  checks.push_back(within("length ratio at T=0.01", r001, 1.0, 0.01));
  checks.push_back(within("length ratio at T=0.001", r0001, 1.0, 0.001));
  checks.push_back(at_least("ratio approach to 1 is monotone", (std::abs(1 - r0001) < std::abs(1 - r001) &&
                                                              std::abs(1 - r001) < std::abs(1 - r01)) ? 1.0 : 0.0, 1.0));
  checks.push_back(at_most("length ratio at T=5 (GRS strictly smaller)",
                           bench::autoregulation_length_ratio(5.0), 1.0 - 1e-3));

  // Level-set solve against the closed form, then at twice the resolution.
  log << "solving on " << config.grid_counts[0] << " nodes\n";
  const double h = config.grid().spacing(0);
  const auto coarse = autoregulation_hj(config);
  RunConfig fine_config = config;
  apply_grid_scale(fine_config, 2.0);
  log << "solving on " << fine_config.grid_counts[0] << " nodes\n";
  const auto fine = autoregulation_hj(fine_config);
  {
    auto os = out.open("intervals.csv");
    os << "T,lo,hi\n";
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const double T = config.horizons[k];
      os << format_double(T) << "," << format_double(coarse[k].lo) << ","
         << format_double(coarse[k].hi) << "\n";
      const auto exact = bench::autoregulation_grs(T);
      const double e_coarse = endpoint_error(coarse[k], exact);
      const double e_fine = endpoint_error(fine[k], exact);
      const std::string tag = "T=" + format_double(T);
      checks.push_back(within("HJ endpoint error, " + tag, e_coarse, 0.0, 2.0 * h));
      checks.push_back(at_least("HJ error ratio h -> h/2, " + tag, e_coarse / e_fine, 1.7));
      checks.push_back(at_least("HJ interval inside [-5/8, 5/8], " + tag,
                                Interval{-0.625, 0.625}.contains(coarse[k]) ? 1.0 : 0.0, 1.0));
    }
  }

  // Union over a sweep of horizons matches the last slice.
  {
    const auto dyn = build_ramp(config.knowledge());
    const double T_end = config.horizons.back();
    std::vector<double> sweep;
    for (int k = 0; k <= 8; ++k) sweep.push_back(T_end * k / 8);
    const auto fields = reach_fields(config.grid(), dyn, config.start_state(), sweep,
                                     config.cfl, config.seed_time);
    const auto uni = single_interval(union_over_horizons(fields, dyn.support_radius()));
    const auto last = single_interval(extract_reach(fields.back(), dyn.support_radius()));
    checks.push_back(within("union over [0,T] equals T slice, T=" + format_double(T_end),
                            endpoint_error(uni, last), 0.0, 1e-12));
  }

  // Control round trip on the true hill dynamics.
  {
    const auto dyn = build_ramp(config.knowledge());
    const double T = 1.0;
    const double target = 0.3;
    const double tau = config.seed_time.value_or(default_seed_time(dyn));
    const auto seed = certified_seed(dyn, config.start_state(), tau);
    const auto history =
        evolve_with_history(seed_field(config.grid(), seed), dyn, T - tau, config.cfl);
    const double dt = h;
    const TrueDynamics hill = [](const Vector& x) {
      return std::pair<Vector, Matrix>(Vector::Zero(1),
                                       Matrix::Constant(1, 1, bench::autoregulation_true_gain(x(0))));
    };
    const auto traj = extract_control(history, dyn, seed, Vector::Constant(1, target), hill, dt);
    const double miss = std::abs(traj.states.back()(0) - target);
    const double bound = 2.0 * std::max(h, dyn.a.norm() * dt + dyn.sigma * dt);
    checks.push_back(within("control endpoint miss, target 0.3, T=1", miss, 0.0, bound));
    checks.push_back(at_most("control max |u|", traj.max_control_norm, 1.0 + 1e-9));
    auto os = out.open("control.csv");
    os << "t,x,v,u\n";
    for (std::size_t k = 0; k < traj.controls.size(); ++k) {
      os << format_double(traj.times[k]) << "," << format_double(traj.states[k](0)) << ","
         << format_double(traj.velocities[k](0)) << "," << format_double(traj.controls[k](0))
         << "\n";
    }
  }

  // Monte Carlo probe of the guaranteed velocity interval at a few states.
  {
    const auto kb = config.knowledge();
    Rng rng(config.seed);
    int spurious = 0;
    int missed = 0;
    for (double xs : {0.0, 0.2, 0.4, 0.6}) {
      const Vector x = Vector::Constant(1, xs);
      const Ball ball = guaranteed_velocity_ball(kb, x);
      for (double side : {-1.0, 1.0}) {
        const Vector edge = ball.center() + Vector::Constant(1, side * ball.radius());
        if (guaranteed_membership_refute(kb, x, edge, 1000, rng).refuted) ++spurious;
        const Vector past =
            ball.center() + Vector::Constant(1, side * ball.radius() * (1.0 + 1e-6));
        if (!guaranteed_membership_refute(kb, x, past, 1000, rng).refuted) ++missed;
      }
    }
    checks.push_back(at_most("velocity ball edges refuted (count)", spurious, 0));
    checks.push_back(at_most("inflated velocity ball not refuted (count)", missed, 0));
  }

  {
    auto os = out.open("analytic.csv");
    os << "T,grs_lo,grs_hi,true_lo,true_hi\n";
    for (int k = 0; k <= 100; ++k) {
      const double T = 0.1 * k;
      const auto g = bench::autoregulation_grs(T);
      const auto t = bench::autoregulation_true_reach(T);
      os << format_double(T) << "," << format_double(g.lo) << "," << format_double(g.hi) << ","
         << format_double(t.lo) << "," << format_double(t.hi) << "\n";
    }
  }
  write_manifest(out, "benchmark autoregulation", config);
  write_timing(out, start);
  report.exports = out.commit();
  return report;
}

// --------------------------------------------------------------- aircraft

BenchmarkReport run_aircraft(const BenchmarkOptions& opt, std::ostream& log) {
  const auto start = Clock::now();
  RunConfig config = aircraft_config();
  config.cfl = opt.cfl;
  config.seed = opt.seed;
  config.output_dir = opt.output_dir.string();
  apply_grid_scale(config, opt.grid_scale);

  BenchmarkReport report;
  auto& checks = report.checks;
  ExportWriter out(opt.output_dir);
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

  int violations = 0;
  {
    auto os = out.open("disks.csv");
    os << "T,grs_cx,grs_cy,grs_r,true_cx,true_cy,true_r\n";
    for (int k = 0; k < 100; ++k) {
      const double T = k == 99 ? bench::kAircraftHorizon : bench::kAircraftHorizon * k / 99;
      const auto g = bench::aircraft_grs_disk(T);
      const auto t = bench::aircraft_true_reach_disk(T);
      if (!t.contains(g)) ++violations;
      os << format_double(T) << "," << format_double(g.center.x()) << ","
         << format_double(g.center.y()) << "," << format_double(g.radius) << ","
         << format_double(t.center.x()) << "," << format_double(t.center.y()) << ","
         << format_double(t.radius) << "\n";
    }
  }
  checks.push_back(at_most("GRS disk inside true disk, 100 T, violations", violations, 0));

  const auto end_disk = bench::aircraft_grs_disk(bench::kAircraftHorizon);
  const double quad_radius = Quad::integrate(
      [](double s) { return 1.0 - 0.3 * s; }, 0.0, bench::kAircraftHorizon);
  const double quad_cx = Quad::integrate([](double) { return 0.2; }, 0.0, bench::kAircraftHorizon);
  checks.push_back(within("GRS radius at T=10/3 vs quadrature", end_disk.radius, quad_radius, 1e-10));
  checks.push_back(within("GRS radius at T=10/3 equals 5/3", end_disk.radius, 5.0 / 3.0, 1e-10));
  checks.push_back(within("GRS center x at T=10/3 vs quadrature", end_disk.center.x(), quad_cx, 1e-10));
  checks.push_back(within("GRS center x at T=10/3 equals 2/3", end_disk.center.x(), 2.0 / 3.0, 1e-10));
  checks.push_back(within("GRS center y at T=10/3", end_disk.center.y(), 0.0, 1e-10));

  // True reach disk at T = 10 from quadrature and from simulated controls.
  const double T10 = 10.0;
  const auto true10 = bench::aircraft_true_reach_disk(T10);
  checks.push_back(within("true radius at T=10 vs quadrature", true10.radius,
                          Quad::integrate([](double s) { return 1.0 - s / 10.0; }, 0.0, T10), 1e-10));
  checks.push_back(within("true center x at T=10 vs quadrature", true10.center.x(),
                          Quad::integrate([](double s) { return 0.1 * (std::cos(s) + 1.0); }, 0.0, T10),
                          1e-10));
  {
    Rng rng(config.seed);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Eigen::Vector2d u = sample_unit_vector(2, rng);
      const auto rhs = [&u](double t, const Eigen::Vector2d&) -> Eigen::Vector2d {
        return Eigen::Vector2d(0.1 * (std::cos(t) + 1.0), 0.0) +
               std::max(0.0, 1.0 - t / 10.0) * u;
      };
      const Eigen::Vector2d x = rk4(Eigen::Vector2d::Zero().eval(), T10, kOdeSteps, rhs);
      worst = std::max(worst, std::abs((x - true10.center).norm() - true10.radius));
    }
    checks.push_back(within("simulated unit controls land on true boundary, T=10", worst, 0.0,
                            kOdeTol));
  }

  checks.push_back(at_least("union contains origin",
                            bench::aircraft_union_contains({0.0, 0.0}) ? 1.0 : 0.0, 1.0));
  checks.push_back(at_least("union contains (2/3, 0)",
                            bench::aircraft_union_contains({2.0 / 3.0, 0.0}) ? 1.0 : 0.0, 1.0));
  checks.push_back(at_most("union margin at (0, 1.7)", bench::aircraft_union_margin({0.0, 1.7}),
                           -1e-6));
  bool range_error = false;
  try {
    (void)bench::aircraft_grs_disk(bench::kAircraftHorizon + 1e-9);
  } catch (const HorizonRangeError&) {
    range_error = true;
  }
  checks.push_back(at_least("horizon beyond 10/3 rejected", range_error ? 1.0 : 0.0, 1.0));

  // Level-set cross-check of the eventual union.
  const Grid grid = config.grid();
  log << "solving union on " << config.grid_counts[0] << "x" << config.grid_counts[1]
      << " nodes\n";
  constexpr int kUnionSamples = 200;
  const auto field = bench::aircraft_hj_union(grid, kUnionSamples, config.cfl);
  const auto contours = marching_squares(grid, field.values);
  const auto analytic = bench::aircraft_union_boundary(4000);
  const double hd = hausdorff_distance(polyline_points(contours), analytic);
  checks.push_back(within("HJ union vs analytic union, Hausdorff", hd, 0.0, 2.0 * grid.max_spacing()));
  {
    auto os = out.open("union_contour.csv");
    os << "x1,x2,segment\n";
    write_polylines(os, contours);
  }
  {
    auto os = out.open("union_analytic.csv");
    os << "x1,x2\n";
    for (const auto& p : analytic) os << format_double(p.x()) << "," << format_double(p.y()) << "\n";
  }
  out.grid_dump("union.grid", field);
  write_manifest(out, "benchmark aircraft", config);
  write_timing(out, start);
  report.exports = out.commit();
  return report;
}

}  // namespace

// ------------------------------------------------------------ commands

RunConfig autoregulation_config() {
  RunConfig c;
  c.f0 = {0.0};
  c.G0 = {{0.5}};
  c.Lf = 0.1;
  c.LG = 0.7;
  c.grid_lower = {-1.0};
  c.grid_upper = {1.0};
  c.grid_counts = {2001};
  c.horizons = {0.5, 1.0, 2.0};
  c.output_dir = "out/autoregulation";
  return c;
}

RunConfig aircraft_config() {
  RunConfig c;
  c.f0 = {0.2, 0.0};
  c.G0 = {{1.0, 0.0}, {0.0, 1.0}};
  c.Lf = 0.1;
  c.LG = 0.2;
  c.grid_lower = {-1.5, -2.0};
  c.grid_upper = {2.75, 2.0};
  c.grid_counts = {171, 161};
  c.horizons = {bench::kAircraftHorizon};
  c.union_horizons = true;
  c.output_dir = "out/aircraft";
  return c;
}

ExportBundle cmd_velocity_set(const RunConfig& config, const Vector& x,
                              std::ostream& log) {
  const auto start = Clock::now();
  const KnowledgeBundle kb = config.knowledge();
  const auto n = kb.dim();
  if (x.size() != n) {
    throw ConfigError("state has dimension " + std::to_string(x.size()) + ", expected " +
                      std::to_string(n));
  }
  ExportWriter out(config.output_dir);

  const Ball ball = guaranteed_velocity_ball(kb, x);
  if (ball.is_empty()) {
    log << "warning: x lies outside the knowledge ball (radius "
        << format_double(knowledge_ball(kb).radius())
        << "); the guaranteed velocity set is empty\n";
  }
  {
    auto os = out.open("velocity_ball.csv");
    os << "empty,radius";
    for (Eigen::Index i = 0; i < n; ++i) os << ",c" << i + 1;
    os << "\n" << (ball.is_empty() ? 1 : 0) << "," << format_double(ball.radius());
    for (Eigen::Index i = 0; i < n; ++i) os << "," << format_double(kb.f0(i));
    os << "\n";
  }
  log << "guaranteed ball: center [" << detail::join(std::vector<double>(kb.f0.begin(), kb.f0.end()))
      << "], radius " << format_double(ball.radius()) << (ball.is_empty() ? " (empty)" : "")
      << "\n";

  const double rho = kb.lipschitz_sum() * x.norm();
  if (n == 2) {
    const int dirs = config.directions;
    {
      auto os = out.open("nominal_ellipsoid.csv");
      os << "x1,x2,segment\n";
      write_polylines(os, {ellipse_curve(kb.f0, kb.G0, dirs)});
    }
    {
      auto os = out.open("optimistic_boundary.csv");
      os << "x1,x2,segment\n";
      write_polylines(os, {optimistic_curve(kb, rho, dirs)});
    }
    {
      auto os = out.open("guaranteed_boundary.csv");
      os << "x1,x2,segment\n";
      if (!ball.is_empty()) {
        write_polylines(os, {ellipse_curve(ball.center(),
                                           ball.radius() * Matrix::Identity(2, 2), dirs)});
      }
    }
    {
      auto os = out.open("extreme_ellipsoids.csv");
      os << "x1,x2,segment\n";
      if (rho <= kb.sigma()) {
        const auto [lo, hi] = extreme_ellipsoids(kb, x);
        write_polylines(os, {ellipse_curve(lo.a_hat, lo.B_hat, dirs),
                             ellipse_curve(hi.a_hat, hi.B_hat, dirs)});
      }
    }
  } else {
    log << "boundary curves are exported for 2-D states only\n";
  }

  {
    // Uniform scatter over a box that holds the optimistic set with slack.
    Vector half(n);
    for (Eigen::Index i = 0; i < n; ++i) half(i) = kb.G0.row(i).norm() + rho;
    half *= 1.1;
    Rng rng(config.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto os = out.open("refutation_samples.csv");
    for (Eigen::Index i = 0; i < n; ++i) os << "v" << i + 1 << ",";
    os << "optimistic,refuted\n";
    int refuted_count = 0;
    for (int s = 0; s < config.velocity_samples; ++s) {
      Vector v(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = kb.f0(i) + half(i) * unit(rng);
      const bool optimistic = optimistic_membership(kb, x, v);
      const bool refuted =
          guaranteed_membership_refute(kb, x, v, config.refute_samples, rng).refuted;
      refuted_count += refuted ? 1 : 0;
      for (Eigen::Index i = 0; i < n; ++i) os << format_double(v(i)) << ",";
      os << (optimistic ? 1 : 0) << "," << (refuted ? 1 : 0) << "\n";
    }
    log << config.velocity_samples << " velocity samples, " << refuted_count << " refuted\n";
  }

  RunConfig echo = config;
  echo.velocity_x.assign(x.data(), x.data() + x.size());
  write_manifest(out, "velocity-set", echo);
  write_timing(out, start);
  return out.commit();
}

ExportBundle cmd_reach(const RunConfig& config, std::ostream& log) {
  const auto start = Clock::now();
  if (config.horizons.empty()) throw ConfigError("reach.horizons is required");
  const Grid grid = config.grid();
  const KnowledgeBundle kb = config.knowledge();
  const RampDynamics dyn = build_ramp(kb);
  const double clip = dyn.support_radius();
  ExportWriter out(config.output_dir);

  const auto fields = reach_fields(grid, dyn, config.start_state(), config.horizons,
                                   config.cfl, config.seed_time);
  std::ostringstream summary;
  summary << "index,T,masked_nodes\n";
  std::ofstream intervals;
  if (grid.dim() == 1) {
    intervals = out.open("intervals.csv");
    intervals << "T,lo,hi\n";
  }
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const auto result = extract_reach(fields[k], clip);
    const std::string T = format_double(config.horizons[k]);
    log << "T = " << T << ": " << result.masked_count() << " nodes";
    if (grid.dim() == 1) {
      for (const auto& iv : result.intervals) {
        intervals << T << "," << format_double(iv.lo) << "," << format_double(iv.hi) << "\n";
        log << " [" << format_double(iv.lo) << ", " << format_double(iv.hi) << "]";
      }
    } else if (grid.dim() == 2) {
      auto os = out.open("contour_" + std::to_string(k) + ".csv");
      os << "x1,x2,segment\n";
      write_polylines(os, result.contours);
      log << ", " << result.contours.size() << " contour(s)";
    }
    log << "\n";
    out.grid_dump("value_" + std::to_string(k) + ".grid", fields[k]);
    summary << k << "," << T << "," << result.masked_count() << "\n";
  }
  if (config.union_horizons) {
    const LevelSetField merged = pointwise_min(fields);
    const auto result = extract_reach(merged, clip);
    if (grid.dim() == 1) {
      auto os = out.open("union_intervals.csv");
      os << "lo,hi\n";
      for (const auto& iv : result.intervals) {
        os << format_double(iv.lo) << "," << format_double(iv.hi) << "\n";
      }
    } else if (grid.dim() == 2) {
      auto os = out.open("union_contour.csv");
      os << "x1,x2,segment\n";
      write_polylines(os, result.contours);
    }
    out.grid_dump("union.grid", merged);
    summary << "union," << format_double(config.horizons.back()) << ","
            << result.masked_count() << "\n";
    log << "union: " << result.masked_count() << " nodes\n";
  }
  out.open("summary.csv") << summary.str();
  write_manifest(out, "reach", config);
  write_timing(out, start);
  return out.commit();
}

bool BenchmarkReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

BenchmarkReport cmd_benchmark(const std::string& name, const BenchmarkOptions& options,
                              std::ostream& log) {
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (name == "autoregulation") return run_autoregulation(options, log);
  if (name == "aircraft") return run_aircraft(options, log);
  std::string known;
  for (const auto& n : benchmark_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown benchmark '" + name + "' (known: " + known + ")");
}

void print_report(const BenchmarkReport& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-56s %14s %12s %10s %-10s %s\n", "check", "computed",
                "expected", "tolerance", "relation", "result");
  out << line;
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%-56s %14.8g %12.6g %10.3g %-10s %s\n", c.name.c_str(),
                  c.computed, c.expected, c.tolerance, c.relation.c_str(),
                  c.pass ? "PASS" : "FAIL");
    out << line;
  }
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
  out << passed << "/" << report.checks.size() << " checks passed\n";
}

}  // namespace grs::cli
