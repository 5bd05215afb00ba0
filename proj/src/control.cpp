#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "grs/ellipsoid.hpp"
#include "grs/errors.hpp"
#include "grs/hj_reach.hpp"
#include "validate.hpp"

namespace grs {

namespace {

constexpr double kControlTol = 1e-9;
constexpr double kFlatGradient = 1e-10;

const LevelSetField& nearest_in_time(const std::vector<LevelSetField>& history,
                                     double t) {
  const auto it = std::lower_bound(
      history.begin(), history.end(), t,
      [](const LevelSetField& f, double time) { return f.time < time; });
  if (it == history.begin()) return *it;
  if (it == history.end()) return history.back();
  const auto prev = std::prev(it);
  return (t - prev->time) <= (it->time - t) ? *prev : *it;
}

// Closest point of Ball(a, radius) to `desired`.
Vector project_to_ball(const Vector& desired, const Vector& a, double radius) {
  const Vector w = desired - a;
  const double norm = w.norm();
  if (norm <= radius) return desired;
  return a + (radius / norm) * w;
}

}  // namespace

ControlTrajectory extract_control(const std::vector<LevelSetField>& history,
                                  const RampDynamics& dyn, const SeedBall& seed,
                                  const Vector& target,
                                  const TrueDynamics& true_dynamics,
                                  double dt) {
  if (history.empty()) throw InvalidArgument("empty value-function history");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
  const auto n = history.front().grid.dim();
  detail::require_dim(seed.origin, n, "start");
  detail::require_dim(target, n, "target");
  if (std::abs(history.front().time - seed.time) > 1e-12) {
    throw InvalidArgument("history must start at the seed time");
  }
  if (interpolate(history.back(), target) > 0.0) {
    throw InvalidArgument("target is not certified reachable at the horizon");
  }

  const double t_seed = seed.time;
  const double t_end = history.back().time;
  const long seed_steps = std::lround(t_seed / dt);
  const long trace_steps = std::max<long>(1, std::lround((t_end - t_seed) / dt));
  const double trace_step = (t_end - t_seed) / static_cast<double>(trace_steps);

  // Backward trace of the surrogate: the forward velocity that keeps the
  // target on the sublevel set is a + g * grad V / |grad V|.
  std::vector<Vector> traced(static_cast<std::size_t>(trace_steps) + 1, target);
  Vector x = target;
  Vector direction = Vector::Zero(n);
  const double drift_norm = dyn.a.norm();
  for (long k = trace_steps; k > 0; --k) {
    const double t = t_seed + k * trace_step;
    const Vector grad = interpolate_gradient(nearest_in_time(history, t), x);
    const double gnorm = grad.norm();
    if (gnorm >= kFlatGradient) {
      direction = grad / gnorm;
    } else if (drift_norm > 0.0) {
      direction = dyn.a / drift_norm;
    }
    x = x - trace_step * (dyn.a + dyn.g(x.norm()) * direction);
    traced[static_cast<std::size_t>(k - 1)] = x;
  }

  ControlTrajectory out;
  for (long k = 0; k < seed_steps; ++k) {
    const double t = t_seed * k / static_cast<double>(seed_steps);
    out.times.push_back(t);
    out.reference.push_back(seed_path(dyn, seed, traced.front(), t));
  }
  for (long k = 0; k <= trace_steps; ++k) {
    out.times.push_back(k == trace_steps ? t_end : t_seed + k * trace_step);
    out.reference.push_back(traced[static_cast<std::size_t>(k)]);
  }

  // Forward tracking of the reference with guaranteed velocities only.
  x = seed.origin;
  out.states.push_back(x);
  for (std::size_t k = 0; k + 1 < out.times.size(); ++k) {
    const double step = out.times[k + 1] - out.times[k];
    const Vector desired = (out.reference[k + 1] - x) / step;
    const Vector v = project_to_ball(desired, dyn.a, dyn.g(x.norm()));
    const auto [f, G] = true_dynamics(x);
    detail::require_dim(f, n, "true drift");
    const auto summary = spectral_summary(G);
    if (is_singular(summary)) {
      throw SingularMatrixError("true input matrix is singular along the path",
                                summary.min_singular_value);
    }
    const Vector u = G.fullPivLu().solve(v - f);
    const double unorm = u.norm();
    if (unorm > 1.0 + kControlTol) {
      std::ostringstream msg;
      msg << "extracted control has norm " << unorm << " at t = " << out.times[k]
          << "; the true dynamics are not consistent with the knowledge bundle";
      throw ConsistencyError(msg.str());
    }
    out.max_control_norm = std::max(out.max_control_norm, unorm);
    x = x + step * (f + G * u);
    out.velocities.push_back(v);
    out.controls.push_back(u);
    out.states.push_back(x);
  }
  return out;
}

}  // namespace grs
