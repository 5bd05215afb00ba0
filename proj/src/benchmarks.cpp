#include "grs/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "grs/errors.hpp"

namespace grs::bench {

namespace {

void require_horizon(double T) {
  if (!std::isfinite(T) || T < 0.0) {
    throw InvalidArgument("horizon must be finite and >= 0");
  }
}

constexpr int kBrentBits = 40;
constexpr double kAircraftSeedTime = 0.25;

}  // namespace

Interval autoregulation_grs(double T) {
  require_horizon(T);
  const double half = 0.625 * -std::expm1(-0.8 * T);
  return {-half, half};
}

Interval autoregulation_true_reach(double T) {
  require_horizon(T);
  const double root = std::sqrt(T * T + 4.0);
  return {(root - T - 2.0) / 2.0, (root + T - 2.0) / 2.0};
}

double autoregulation_length_ratio(double T) {
  if (!std::isfinite(T) || T <= 0.0) {
    throw InvalidArgument("length ratio needs T > 0");
  }
  return autoregulation_grs(T).length() / autoregulation_true_reach(T).length();
}

double autoregulation_true_gain(double x) {
  const double s = (x + 1.0) * (x + 1.0);
  return s / (1.0 + s);
}

Eigen::Vector2d aircraft_drift() { return {0.2, 0.0}; }

double aircraft_guaranteed_speed(double t) { return std::max(0.0, 1.0 - 0.3 * t); }

DiskSet aircraft_grs_disk(double T) {
  if (!std::isfinite(T) || T < 0.0 || T > kAircraftHorizon) {
    std::ostringstream msg;
    msg << "aircraft horizon " << T << " outside [0, 10/3]; beyond it the "
        << "prior knowledge guarantees no actuation";
    throw HorizonRangeError(msg.str());
  }
  return {aircraft_drift() * T, T - 3.0 * T * T / 20.0};
}

DiskSet aircraft_true_reach_disk(double T) {
  require_horizon(T);
  const double active = std::min(T, 10.0);
  return {Eigen::Vector2d(0.1 * (T + std::sin(T)), 0.0),
          active - active * active / 20.0};
}

EventualUnion aircraft_eventual_union(int samples) {
  if (samples < 2) throw InvalidArgument("eventual union needs >= 2 samples");
  EventualUnion u;
  for (int k = 0; k < samples; ++k) {
    const double T = k == samples - 1 ? kAircraftHorizon
                                      : kAircraftHorizon * k / (samples - 1);
    u.horizons.push_back(T);
    u.disks.push_back(aircraft_grs_disk(T));
  }
  return u;
}

double aircraft_union_margin(const Eigen::Vector2d& p) {
  auto neg_margin = [&](double T) {
    const auto d = aircraft_grs_disk(T);
    return (p - d.center).norm() - d.radius;
  };
  const auto best =
      boost::math::tools::brent_find_minima(neg_margin, 0.0, kAircraftHorizon, kBrentBits);
  // Brent works on the open interval; the endpoints are checked explicitly.
  const double value =
      std::min({best.second, neg_margin(0.0), neg_margin(kAircraftHorizon)});
  return -value;
}

bool aircraft_union_contains(const Eigen::Vector2d& p, double tol) {
  return aircraft_union_margin(p) >= -tol;
}

double aircraft_union_distance(const Eigen::Vector2d& p) {
  return std::max(0.0, -aircraft_union_margin(p));
}

std::vector<Eigen::Vector2d> aircraft_union_boundary(int per_piece) {
  if (per_piece < 8) throw InvalidArgument("boundary sampling needs >= 8 points per piece");
  constexpr double kNestedUntil = 8.0 / 3.0;
  constexpr double kOnBoundary = 1e-9;
  std::vector<Eigen::Vector2d> out;
  auto keep = [&](const Eigen::Vector2d& p) {
    if (aircraft_union_margin(p) <= kOnBoundary) out.push_back(p);
  };
  for (double T : {kNestedUntil, kAircraftHorizon}) {
    const auto d = aircraft_grs_disk(T);
    for (int k = 0; k < per_piece; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / per_piece;
      keep(d.center + d.radius * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    }
  }
  // On the envelope the normal n = (cos theta, sin theta) satisfies
  // n . c'(T) + r'(T) = 0, i.e. T = (1 + 0.2 cos theta) / 0.3 for theta in
  // [pi/2, pi]. Sampling is uniform in theta.
  const double drift = aircraft_drift().x();
  for (int k = 0; k <= per_piece / 2; ++k) {
    const double theta = std::numbers::pi * (0.5 + 0.5 * k / (per_piece / 2));
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double T = std::clamp((1.0 + drift * c) / 0.3, kNestedUntil, kAircraftHorizon);
    const auto d = aircraft_grs_disk(T);
    keep(d.center + d.radius * Eigen::Vector2d(c, s));
    keep(d.center + d.radius * Eigen::Vector2d(c, -s));
  }
  return out;
}

LevelSetField aircraft_hj_union(const Grid& grid, int samples, double cfl) {
  if (grid.dim() != 2) throw InvalidArgument("aircraft union needs a 2-D grid");
  if (samples < 2) throw InvalidArgument("aircraft union needs >= 2 samples");

  // Drift-removed frame z = x - aT: a centered square that holds the largest
  // guaranteed disk with a margin of four cells.
  const double h = grid.max_spacing();
  const double half = aircraft_grs_disk(kAircraftHorizon).radius + 4.0 * h;
  const int count = static_cast<int>(std::ceil(2.0 * half / h)) + 1;
  const Grid zgrid({-half, -half}, {half, half}, {count, count});

  SpeedModel model;
  model.drift = Vector::Zero(2);
  model.speed_bound = 1.0;
  model.time_dependent = true;
  model.fill = [](double t, const Grid& g, std::vector<double>& out) {
    out.assign(g.size(), aircraft_guaranteed_speed(t));
  };

  // The speed does not depend on the state, so the drift-free reach set at
  // time t is exactly the disk of radius t - 0.15 t^2; it seeds the solve.
  auto disk_field = [&](double t) {
    LevelSetField f = distance_field(zgrid, Vector::Zero(2));
    const double radius = t - 0.15 * t * t;
    for (double& v : f.values) v -= radius;
    f.time = t;
    return f;
  };
  std::optional<LevelSetField> z;
  LevelSetField running{grid, std::vector<double>(grid.size(),
                                                  std::numeric_limits<double>::infinity()),
                        kAircraftHorizon};
  const Vector a = Vector(aircraft_drift());
  for (int k = 0; k < samples; ++k) {
    const double T = k == samples - 1 ? kAircraftHorizon
                                      : kAircraftHorizon * k / (samples - 1);
    std::optional<LevelSetField> direct;
    const LevelSetField* slice = nullptr;
    if (T <= kAircraftSeedTime) {
      direct = disk_field(T);
      slice = &*direct;
    } else {
      if (!z) z = disk_field(kAircraftSeedTime);
      *z = evolve(*z, model, T - z->time, cfl);
      slice = &*z;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = interpolate(*slice, grid.point(i) - a * T);
      running.values[i] = std::min(running.values[i], v);
    }
  }
  return running;
}

}  // namespace grs::bench
