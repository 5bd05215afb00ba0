#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "grs/contour.hpp"
#include "grs/level_set.hpp"
#include "grs/types.hpp"
#include "grs/velocity_sets.hpp"

namespace grs {

/// The known surrogate system xdot = a + g(||x||) u with the ramp
/// g(s) = max(0, sigma - L s).
struct RampDynamics {
  Vector a;
  double sigma = 0.0;
  double L = 0.0;

  double g(double s) const { return std::max(0.0, sigma - L * s); }
  /// Radius beyond which g vanishes (the knowledge-ball radius).
  double support_radius() const { return sigma / L; }
};

/// a = f0, sigma = sigma_min(G0), L = Lf + LG.
/// Throws DegenerateKnowledgeError when Lf + LG == 0.
RampDynamics build_ramp(const KnowledgeBundle& kb);

/// H(x, lambda) = min over ||u|| <= 1 of lambda^T (-a + g(||x||) u)
///              = -lambda^T a - g(||x||) ||lambda||.
double hamiltonian(const Vector& x, const Vector& lambda,
                   const RampDynamics& dyn);

/// Isotropic-speed dynamics xdot = drift + speed(t, x) u used by the solver.
/// `speed_bound` must dominate speed everywhere; it sets the dissipation.
struct SpeedModel {
  Vector drift;
  double speed_bound = 0.0;
  /// Fills the speed at every grid node for elapsed time t.
  std::function<void(double t, const Grid&, std::vector<double>&)> fill;
  /// Whether `fill` depends on t (otherwise it is evaluated once).
  bool time_dependent = false;
};

SpeedModel speed_model(const RampDynamics& dyn);

/// Largest stable Lax-Friedrichs step: cfl / sum_i (|drift_i| + bound) / h_i.
double stable_time_step(const Grid& grid, const SpeedModel& model, double cfl);

/// One global Lax-Friedrichs step of V_t = H(x, V_x). Reads `field`, returns
/// a new field at field.time + dt. The dissipation per axis is |drift_i| plus
/// the largest entry of `speed`. Edge nodes use linear extrapolation.
LevelSetField lax_friedrichs_step(const LevelSetField& field,
                                  const SpeedModel& model,
                                  const std::vector<double>& speed, double dt);

using StepObserver = std::function<void(const LevelSetField&)>;

/// Advances `field` by `horizon` (elapsed time). Sub-steps so every step
/// respects the CFL bound. Throws BoundaryContactError when the domain cannot
/// hold the reachable set or when V <= 0 appears within two nodes of the edge.
/// The observer sees the field after every sub-step.
LevelSetField evolve(const LevelSetField& field, const RampDynamics& dyn,
                     double horizon, double cfl = 0.5,
                     const StepObserver& observer = {});

LevelSetField evolve(const LevelSetField& field, const SpeedModel& model,
                     double horizon, double cfl = 0.5,
                     const StepObserver& observer = {});

/// The initial field followed by the field after every sub-step up to horizon.
std::vector<LevelSetField> evolve_with_history(const LevelSetField& field,
                                               const RampDynamics& dyn,
                                               double horizon,
                                               double cfl = 0.5);

/// {V <= 0} clipped to Ball(0, clip_radius), with geometry.
struct ReachSetResult {
  Grid grid;
  std::vector<std::uint8_t> mask;
  /// n = 1: connected components of the set.
  std::vector<Interval> intervals;
  /// n = 2: boundary polylines.
  std::vector<Polyline> contours;
  double horizon = 0.0;
  double clip_radius = 0.0;

  std::size_t masked_count() const;
};

/// Throws ConsistencyError when the clipped set is empty.
ReachSetResult extract_reach(const LevelSetField& field, double clip_radius);
ReachSetResult extract_reach(const LevelSetField& field,
                             const KnowledgeBundle& kb);

/// A ball certified to lie inside the surrogate reach set R(time, origin).
/// Every point origin + a t + lambda w r(t) with |lambda| <= 1, ||w|| = 1 is
/// reached by the surrogate, where r solves r' = sigma - L (||origin|| +
/// ||a|| t + r), r(0) = 0, until r' first vanishes.
struct SeedBall {
  Vector origin;
  Vector center;
  double radius = 0.0;
  double time = 0.0;
};

SeedBall certified_seed(const RampDynamics& dyn, const Vector& origin,
                        double time);

/// Default seed time 0.25 / L.
double default_seed_time(const RampDynamics& dyn);

/// V = ||x - center|| - radius at t = seed.time. A zero radius gives the
/// distance cone of the origin.
LevelSetField seed_field(const Grid& grid, const SeedBall& seed);

/// Point at time t in [0, seed.time] of the certified seed path from the
/// origin toward `end` (a point of the seed ball, clamped onto it otherwise).
Vector seed_path(const RampDynamics& dyn, const SeedBall& seed,
                 const Vector& end, double t);

/// Value functions at each horizon (ascending, >= 0) for the reach set of
/// `origin`. Horizons up to the seed time return the seed ball itself; longer
/// ones evolve from the seed at `seed_time` (default_seed_time when empty).
std::vector<LevelSetField> reach_fields(const Grid& grid,
                                        const RampDynamics& dyn,
                                        const Vector& origin,
                                        const std::vector<double>& horizons,
                                        double cfl = 0.5,
                                        std::optional<double> seed_time = {});

/// Pointwise minimum of the fields; time is taken from the last one.
LevelSetField pointwise_min(const std::vector<LevelSetField>& fields);

/// Union of the clipped reach sets of the fields.
ReachSetResult union_over_horizons(const std::vector<LevelSetField>& fields,
                                   double clip_radius);

/// Evaluates the true f(x), G(x).
using TrueDynamics = std::function<std::pair<Vector, Matrix>(const Vector&)>;

struct ControlTrajectory {
  std::vector<double> times;      ///< size N + 1
  std::vector<Vector> states;     ///< size N + 1, starts at the start state
  std::vector<Vector> velocities; ///< size N, desired guaranteed velocities
  std::vector<Vector> controls;   ///< size N, u = G(x)^{-1} (v - f(x))
  std::vector<Vector> reference;  ///< size N + 1, traced surrogate path
  double max_control_norm = 0.0;
};

/// Synthesizes a control driving the true system from seed.origin to
/// `target` at the horizon of `history` (fields ordered by time, the first
/// at seed.time). A reference path of the surrogate is traced backward from
/// the target along the value gradient down to the seed ball, then joined to
/// the origin by the certified seed path. The true system tracks it with
/// guaranteed velocities v in Ball(a, g(||x||)), converted with
/// u = G(x)^{-1}(v - f(x)). Throws ConsistencyError if ||u|| > 1 + 1e-9 and
/// InvalidArgument if the target is not certified by the final field.
ControlTrajectory extract_control(const std::vector<LevelSetField>& history,
                                  const RampDynamics& dyn, const SeedBall& seed,
                                  const Vector& target,
                                  const TrueDynamics& true_dynamics,
                                  double dt);

}  // namespace grs
