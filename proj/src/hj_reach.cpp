#include "grs/hj_reach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "grs/errors.hpp"
#include "validate.hpp"

namespace grs {

RampDynamics build_ramp(const KnowledgeBundle& kb) {
  if (kb.lipschitz_sum() <= 0.0) {
    throw DegenerateKnowledgeError(
        "Lf + LG = 0: no ramp exists, the dynamics are fully known");
  }
  return RampDynamics{kb.f0, kb.sigma(), kb.lipschitz_sum()};
}

double hamiltonian(const Vector& x, const Vector& lambda,
                   const RampDynamics& dyn) {
  return -lambda.dot(dyn.a) - dyn.g(x.norm()) * lambda.norm();
}

SpeedModel speed_model(const RampDynamics& dyn) {
  SpeedModel m;
  m.drift = dyn.a;
  m.speed_bound = dyn.sigma;
  m.fill = [dyn](double, const Grid& grid, std::vector<double>& out) {
    out.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out[k] = dyn.g(grid.point(k).norm());
    }
  };
  return m;
}

double stable_time_step(const Grid& grid, const SpeedModel& model,
                        double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw InvalidArgument("cfl must lie in (0, 1]");
  }
  double rate = 0.0;
  for (int i = 0; i < grid.dim(); ++i) {
    rate += (std::abs(model.drift(i)) + model.speed_bound) / grid.spacing(i);
  }
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return cfl / rate;
}

LevelSetField lax_friedrichs_step(const LevelSetField& field,
                                  const SpeedModel& model,
                                  const std::vector<double>& speed,
                                  double dt) {
  const Grid& grid = field.grid;
  const int n = grid.dim();
  const auto& v = field.values;
  LevelSetField out{grid, std::vector<double>(v.size()), field.time + dt};

  const double top = speed.empty() ? 0.0 : *std::max_element(speed.begin(), speed.end());
  if (top > model.speed_bound * (1.0 + 1e-12)) {
    throw InvalidArgument("speed exceeds the model's speed bound");
  }
  std::array<double, Grid::kMaxDim> alpha{};
  for (int i = 0; i < n; ++i) alpha[i] = std::abs(model.drift(i)) + top;

  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto idx = grid.index(k);
    double drift_term = 0.0;
    double grad_sq = 0.0;
    double dissipation = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t s = grid.stride(i);
      const double h = grid.spacing(i);
      const int last = grid.count(i) - 1;
      const double vm = idx[i] > 0 ? v[k - s] : 2.0 * v[k] - v[k + s];
      const double vp = idx[i] < last ? v[k + s] : 2.0 * v[k] - v[k - s];
      const double pm = (v[k] - vm) / h;
      const double pp = (vp - v[k]) / h;
      const double pbar = 0.5 * (pm + pp);
      drift_term += model.drift(i) * pbar;
      grad_sq += pbar * pbar;
      dissipation += 0.5 * alpha[i] * (pp - pm);
    }
    const double h_value = -drift_term - speed[k] * std::sqrt(grad_sq);
    out.values[k] = v[k] + dt * (h_value + dissipation);
  }
  return out;
}

namespace {

void check_edges(const LevelSetField& field) {
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (field.values[k] <= 0.0 && field.grid.near_edge(k, 2)) {
      std::ostringstream msg;
      msg << "zero level reached the grid edge at t = " << field.time
          << "; enlarge the domain bounds";
      throw BoundaryContactError(msg.str());
    }
  }
}

// Bounding box of {V <= 0} (or of the minimizing node when empty), expanded by
// `growth` + two cells, must fit in the grid.
bool sublevel_box_fits(const LevelSetField& field, double growth) {
  const Grid& g = field.grid;
  const int n = g.dim();
  Vector lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  bool any = false;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (field.values[k] <= 0.0) {
      const Vector p = g.point(k);
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
      any = true;
    }
  }
  if (!any) {
    const auto it = std::min_element(field.values.begin(), field.values.end());
    lo = hi = g.point(static_cast<std::size_t>(it - field.values.begin()));
  }
  const double pad = growth + 2.0 * g.max_spacing();
  for (int i = 0; i < n; ++i) {
    if (lo(i) - pad < g.lower(i) || hi(i) + pad > g.upper(i)) return false;
  }
  return true;
}

double sublevel_radius(const LevelSetField& field) {
  double r = 0.0;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (field.values[k] <= 0.0) r = std::max(r, field.grid.point(k).norm());
  }
  return r;
}

[[noreturn]] void domain_too_small(double horizon) {
  std::ostringstream msg;
  msg << "grid bounds cannot contain the reachable set up to horizon "
      << horizon << "; enlarge the domain";
  throw BoundaryContactError(msg.str());
}

LevelSetField run(const LevelSetField& field, const SpeedModel& model,
                  double horizon, double cfl, const StepObserver& observer) {
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw InvalidArgument("horizon must be finite and >= 0");
  }
  detail::require_dim(model.drift, field.grid.dim(), "drift");
  const double dt_max = stable_time_step(field.grid, model, cfl);
  if (horizon == 0.0) return field;

  const auto steps = static_cast<long>(std::ceil(horizon / dt_max - 1e-9));
  const double dt = horizon / static_cast<double>(std::max(1L, steps));

  std::vector<double> speed;
  model.fill(field.time, field.grid, speed);
  LevelSetField current = field;
  for (long s = 0; s < std::max(1L, steps); ++s) {
    if (model.time_dependent && s > 0) model.fill(current.time, current.grid, speed);
    current = lax_friedrichs_step(current, model, speed, dt);
    check_edges(current);
    if (observer) observer(current);
  }
  // Pin the final time exactly to avoid drift from repeated additions.
  current.time = field.time + horizon;
  return current;
}

}  // namespace

LevelSetField evolve(const LevelSetField& field, const SpeedModel& model,
                     double horizon, double cfl,
                     const StepObserver& observer) {
  const double growth =
      (model.drift.norm() + model.speed_bound) * std::max(horizon, 0.0);
  if (!sublevel_box_fits(field, growth)) domain_too_small(horizon);
  return run(field, model, horizon, cfl, observer);
}

LevelSetField evolve(const LevelSetField& field, const RampDynamics& dyn,
                     double horizon, double cfl,
                     const StepObserver& observer) {
  if (!(dyn.sigma > 0.0) || !(dyn.L > 0.0)) {
    throw InvalidArgument("ramp needs sigma > 0 and L > 0");
  }
  const SpeedModel model = speed_model(dyn);
  // The set never leaves Ball(0, max(r0, r_know)) except by pure drift.
  const double drift_reach = dyn.a.norm() * std::max(horizon, 0.0);
  const double bound = std::max(sublevel_radius(field), dyn.support_radius()) +
                       drift_reach + 2.0 * field.grid.max_spacing();
  const bool ball_fits =
      field.grid.box_contains_ball(Vector::Zero(field.grid.dim()), bound);
  const double growth = (dyn.a.norm() + dyn.sigma) * std::max(horizon, 0.0);
  if (!ball_fits && !sublevel_box_fits(field, growth)) domain_too_small(horizon);
  return run(field, model, horizon, cfl, observer);
}

std::vector<LevelSetField> evolve_with_history(const LevelSetField& field,
                                               const RampDynamics& dyn,
                                               double horizon, double cfl) {
  std::vector<LevelSetField> history{field};
  evolve(field, dyn, horizon, cfl,
         [&](const LevelSetField& f) { history.push_back(f); });
  history.back().time = field.time + horizon;
  return history;
}

std::size_t ReachSetResult::masked_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

ReachSetResult extract_reach(const LevelSetField& field, double clip_radius) {
  detail::require_nonnegative(clip_radius, "clip radius");
  const Grid& g = field.grid;
  std::vector<double> clipped(field.values.size());
  ReachSetResult r{g, std::vector<std::uint8_t>(field.values.size(), 0), {}, {},
                   field.time, clip_radius};
  for (std::size_t k = 0; k < clipped.size(); ++k) {
    clipped[k] = std::max(field.values[k], g.point(k).norm() - clip_radius);
    r.mask[k] = clipped[k] <= 0.0 ? 1 : 0;
  }
  if (r.masked_count() == 0) {
    throw ConsistencyError(
        "reach set is empty; the start state must be a grid node inside the "
        "knowledge ball");
  }
  if (g.dim() == 1) r.intervals = sublevel_intervals(g, clipped);
  if (g.dim() == 2) r.contours = marching_squares(g, clipped);
  return r;
}

ReachSetResult extract_reach(const LevelSetField& field,
                             const KnowledgeBundle& kb) {
  return extract_reach(field, knowledge_ball(kb).radius());
}

SeedBall certified_seed(const RampDynamics& dyn, const Vector& origin,
                        double time) {
  if (!std::isfinite(time) || time < 0.0) {
    throw InvalidArgument("seed time must be finite and >= 0");
  }
  detail::require_dim(origin, static_cast<int>(dyn.a.size()), "origin");
  SeedBall seed{origin, origin + time * dyn.a, 0.0, time};
  const double c0 = dyn.sigma - dyn.L * origin.norm();
  if (c0 <= 0.0) return seed;
  // r(t) = (c0 + |a|)(1 - e^{-Lt}) / L - |a| t, increasing while
  // r'(t) = (c0 + |a|) e^{-Lt} - |a| > 0.
  const double drift = dyn.a.norm();
  double t = time;
  if (drift > 0.0) t = std::min(t, std::log((c0 + drift) / drift) / dyn.L);
  seed.radius = std::max(0.0, (c0 + drift) * -std::expm1(-dyn.L * t) / dyn.L - drift * t);
  return seed;
}

double default_seed_time(const RampDynamics& dyn) { return 0.25 / dyn.L; }

LevelSetField seed_field(const Grid& grid, const SeedBall& seed) {
  LevelSetField f = distance_field(grid, seed.center);
  for (double& v : f.values) v -= seed.radius;
  f.time = seed.time;
  return f;
}

Vector seed_path(const RampDynamics& dyn, const SeedBall& seed,
                 const Vector& end, double t) {
  if (seed.radius <= 0.0 || seed.time <= 0.0) return seed.origin + t * dyn.a;
  Vector offset = (end - seed.center) / seed.radius;
  if (offset.norm() > 1.0) offset.normalize();
  const double r = certified_seed(dyn, seed.origin, std::clamp(t, 0.0, seed.time)).radius;
  return seed.origin + t * dyn.a + r * offset;
}

std::vector<LevelSetField> reach_fields(const Grid& grid,
                                        const RampDynamics& dyn,
                                        const Vector& origin,
                                        const std::vector<double>& horizons,
                                        double cfl,
                                        std::optional<double> seed_time) {
  if (horizons.empty()) throw InvalidArgument("no horizons given");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!std::isfinite(horizons[i]) || horizons[i] < 0.0 ||
        (i > 0 && horizons[i] < horizons[i - 1])) {
      throw InvalidArgument("horizons must be finite, ascending and >= 0");
    }
  }
  const double tau = seed_time.value_or(default_seed_time(dyn));
  std::vector<LevelSetField> out;
  out.reserve(horizons.size());
  std::optional<LevelSetField> current;
  for (double T : horizons) {
    if (T <= tau) {
      out.push_back(seed_field(grid, certified_seed(dyn, origin, T)));
      continue;
    }
    if (!current) current = seed_field(grid, certified_seed(dyn, origin, tau));
    *current = evolve(*current, dyn, T - current->time, cfl);
    out.push_back(*current);
  }
  return out;
}

LevelSetField pointwise_min(const std::vector<LevelSetField>& fields) {
  if (fields.empty()) throw InvalidArgument("no fields given");
  LevelSetField running = fields.front();
  for (const auto& f : fields) {
    if (!(f.grid == running.grid)) throw InvalidArgument("fields on different grids");
    for (std::size_t k = 0; k < running.values.size(); ++k) {
      running.values[k] = std::min(running.values[k], f.values[k]);
    }
  }
  running.time = fields.back().time;
  return running;
}

ReachSetResult union_over_horizons(const std::vector<LevelSetField>& fields,
                                   double clip_radius) {
  return extract_reach(pointwise_min(fields), clip_radius);
}

}  // namespace grs
