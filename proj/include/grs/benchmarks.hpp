#pragma once

#include <vector>

#include "grs/hj_reach.hpp"
#include "grs/types.hpp"

namespace grs::bench {

// Gene-autoregulation example: f(0) = 0, G(0) = 1/2, Lf = 0.1, LG = 0.7,
// true dynamics xdot = (x+1)^2 / (1 + (x+1)^2) u.

/// Reach set of xdot = (0.5 - 0.8|x|) u:
/// [5/8 (e^{-0.8T} - 1), 5/8 (1 - e^{-0.8T})]. Equals the guaranteed set.
Interval autoregulation_grs(double T);

/// Reach set of the true dynamics:
/// [(sqrt(T^2+4) - T - 2)/2, (sqrt(T^2+4) + T - 2)/2].
Interval autoregulation_true_reach(double T);

/// Length of the guaranteed interval over the length of the true one,
/// 5 (1 - e^{-0.8T}) / (4T). Requires T > 0.
double autoregulation_length_ratio(double T);

/// True drift and input gain of the autoregulation system.
double autoregulation_true_gain(double x);

// Aircraft example: xdot = f(t) + G(t) u in R^2 with G(t) = max(0, 1 - t/10)
// and f(t) = [0.1 (cos t + 1), 0]; knowledge f(0) = [0.2, 0], G(0) = 1,
// Lf = 0.1, LG = 0.2 in time.

inline constexpr double kAircraftHorizon = 10.0 / 3.0;

struct DiskSet {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 0.0;

  bool contains(const Eigen::Vector2d& p, double tol = 0.0) const {
    return (p - center).norm() <= radius + tol;
  }
  bool contains(const DiskSet& other, double tol = 0.0) const {
    return (other.center - center).norm() + other.radius <= radius + tol;
  }
};

Eigen::Vector2d aircraft_drift();  ///< a = [0.2, 0]

/// Guaranteed speed 1 - 0.3 t of the knowledge-based surrogate.
double aircraft_guaranteed_speed(double t);

/// Ball(aT, T - 3T^2/20) for 0 <= T <= 10/3; HorizonRangeError otherwise.
DiskSet aircraft_grs_disk(double T);

/// True reach set: center [0.1 (T + sin T), 0], radius T - T^2/20 up to
/// T = 10, then 5.
DiskSet aircraft_true_reach_disk(double T);

struct EventualUnion {
  std::vector<double> horizons;
  std::vector<DiskSet> disks;
};

/// The guaranteed disks on a uniform grid of `samples` horizons over
/// [0, 10/3]. Requires samples >= 2.
EventualUnion aircraft_eventual_union(int samples);

/// max over T in [0, 10/3] of radius(T) - ||p - center(T)||. The map is
/// concave in T, so a 1-D maximization is exact.
double aircraft_union_margin(const Eigen::Vector2d& p);

/// p lies in some guaranteed disk, i.e. margin >= -tol.
bool aircraft_union_contains(const Eigen::Vector2d& p, double tol = 0.0);

/// Euclidean distance from p to the eventual union.
double aircraft_union_distance(const Eigen::Vector2d& p);

/// Points on the boundary of the eventual union. Disks are nested while the
/// radius grows faster than the drift (T < 8/3), so the boundary consists of
/// the circles at T = 8/3 and T = 10/3 and the envelope of the disks between
/// them; `per_piece` points are taken from each of the three pieces and kept
/// when the exact margin test puts them on the boundary.
std::vector<Eigen::Vector2d> aircraft_union_boundary(int per_piece);

/// Level-set cross-check of the eventual union: evolves the drift-free
/// field for zdot = (1 - 0.3t) u on `grid` and takes the running minimum of
/// V(T, x - aT) over `samples` horizons in [0, 10/3]. Returns the field of
/// minima on the same grid (negative inside the union).
LevelSetField aircraft_hj_union(const Grid& grid, int samples,
                                double cfl = 0.5);

}  // namespace grs::bench
