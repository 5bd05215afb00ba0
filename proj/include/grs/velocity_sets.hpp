#pragma once

#include <optional>
#include <utility>

#include "grs/ellipsoid.hpp"
#include "grs/types.hpp"

namespace grs {

/// What is known about xdot = f(x) + G(x) u, u in the unit ball: the values
/// f(0), G(0) and Lipschitz bounds on f and G (spectral norm for G).
struct KnowledgeBundle {
  Vector f0;
  Matrix G0;
  double Lf = 0.0;
  double LG = 0.0;

  KnowledgeBundle(Vector f0, Matrix G0, double Lf, double LG);

  Eigen::Index dim() const { return f0.size(); }
  /// sigma_min(G0), i.e. ||G0^{-1}||^{-1}.
  double sigma() const { return sigma_; }
  double lipschitz_sum() const { return Lf + LG; }

 private:
  double sigma_ = 0.0;
};

/// One member (a_hat, B_hat) of the consistent family evaluated at query_state.
struct ConsistentSample {
  Vector a_hat;
  Matrix B_hat;
  Vector query_state;
};

/// Ball(f0, sigma - (Lf+LG)||x||), or the empty set when the radius is < 0.
Ball guaranteed_velocity_ball(const KnowledgeBundle& kb, const Vector& x);

/// Ball(0, sigma / (Lf+LG)). Throws DegenerateKnowledgeError if Lf+LG == 0.
Ball knowledge_ball(const KnowledgeBundle& kb);

/// Uniform draw from Ball(f0, Lf||x||) x MatrixBall(G0, LG||x||). With
/// on_boundary both perturbations have exactly the maximal norm.
ConsistentSample sample_consistent(const KnowledgeBundle& kb, const Vector& x,
                                   Rng& rng, bool on_boundary = false);

struct RefutationVerdict {
  bool refuted = false;
  /// The consistent dynamics whose velocity set excludes v, when refuted.
  std::optional<ConsistentSample> witness;
};

/// One-sided Monte Carlo test of "v is available under every consistent
/// dynamics at x". A refutation is a proof; "plausible" is not.
/// With include_extremes the two extreme_ellipsoids are tested first.
RefutationVerdict guaranteed_membership_refute(const KnowledgeBundle& kb,
                                               const Vector& x,
                                               const Vector& v, int samples,
                                               Rng& rng,
                                               bool include_extremes = true);

/// The pair of consistent velocity ellipsoids whose intersection pins the
/// guaranteed ball: G0 with its smallest singular value lowered by LG||x||,
/// centered at f0 +/- Lf||x|| along the shortest output axis.
/// Throws EmptyGuaranteeError when (Lf+LG)||x|| > sigma.
std::pair<ConsistentSample, ConsistentSample> extreme_ellipsoids(
    const KnowledgeBundle& kb, const Vector& x);

/// Euclidean distance from v to the ellipsoid (0 inside).
double distance_to_ellipsoid(const Ellipsoid& e, const Vector& v);

/// True iff some consistent dynamics can produce velocity v at x, i.e. the
/// distance from v to f0 + G0 U is at most (Lf+LG)||x||.
bool optimistic_membership(const KnowledgeBundle& kb, const Vector& x,
                           const Vector& v);

}  // namespace grs
