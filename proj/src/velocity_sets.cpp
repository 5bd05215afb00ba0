#include "grs/velocity_sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "grs/errors.hpp"
#include "validate.hpp"

namespace grs {

KnowledgeBundle::KnowledgeBundle(Vector f0_, Matrix G0_, double Lf_,
                                 double LG_)
    : f0(std::move(f0_)), G0(std::move(G0_)), Lf(Lf_), LG(LG_) {
  detail::require_square(G0, "G0");
  detail::require_dim(f0, G0.rows(), "f0");
  detail::require_finite(f0, "f0");
  detail::require_finite(G0, "G0");
  detail::require_nonnegative(Lf, "Lf");
  detail::require_nonnegative(LG, "LG");
  const auto s = spectral_summary(G0);
  if (is_singular(s)) {
    std::ostringstream msg;
    msg << "G0 must be invertible (sigma_min = " << s.min_singular_value
        << ")";
    throw SingularMatrixError(msg.str(), s.min_singular_value);
  }
  sigma_ = s.min_singular_value;
}

Ball guaranteed_velocity_ball(const KnowledgeBundle& kb, const Vector& x) {
  detail::require_dim(x, kb.dim(), "state");
  detail::require_finite(x, "state");
  const double radius = kb.sigma() - kb.lipschitz_sum() * x.norm();
  if (radius < 0.0) return Ball::empty(kb.dim());
  return Ball(kb.f0, radius);
}

Ball knowledge_ball(const KnowledgeBundle& kb) {
  if (kb.lipschitz_sum() <= 0.0) {
    throw DegenerateKnowledgeError(
        "Lf + LG = 0: the dynamics are fully known from f(0) and G(0); "
        "use classical reachability for the known system");
  }
  return Ball(Vector::Zero(kb.dim()), kb.sigma() / kb.lipschitz_sum());
}

ConsistentSample sample_consistent(const KnowledgeBundle& kb, const Vector& x,
                                   Rng& rng, bool on_boundary) {
  detail::require_dim(x, kb.dim(), "state");
  const double dist = x.norm();
  ConsistentSample s;
  s.a_hat = sample_in_ball(kb.f0, kb.Lf * dist, rng, on_boundary);
  s.B_hat = sample_matrix_ball(kb.G0, kb.LG * dist, rng, on_boundary);
  s.query_state = x;
  return s;
}

std::pair<ConsistentSample, ConsistentSample> extreme_ellipsoids(
    const KnowledgeBundle& kb, const Vector& x) {
  detail::require_dim(x, kb.dim(), "state");
  const double dist = x.norm();
  if (kb.lipschitz_sum() * dist > kb.sigma()) {
    std::ostringstream msg;
    msg << "no guaranteed velocity at ||x|| = " << dist
        << " (knowledge radius " << kb.sigma() / kb.lipschitz_sum() << ")";
    throw EmptyGuaranteeError(msg.str());
  }
  Eigen::JacobiSVD<Matrix> svd(kb.G0, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto n = kb.dim();
  Vector s = svd.singularValues();
  // Last index is the smallest singular value; ties resolve to it as well.
  s(n - 1) -= kb.LG * dist;
  const Matrix B_hat =
      svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  const Vector shift = kb.Lf * dist * svd.matrixU().col(n - 1);
  return {ConsistentSample{kb.f0 + shift, B_hat, x},
          ConsistentSample{kb.f0 - shift, B_hat, x}};
}

namespace {

// Membership of v in a_hat + B_hat U. Degenerate ellipsoids are reported as
// "unknown" so they never produce a refutation.
std::optional<bool> velocity_available(const ConsistentSample& s,
                                       const Vector& v) {
  try {
    return ellipsoid_contains(Ellipsoid(s.a_hat, s.B_hat), v);
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
}

}  // namespace

RefutationVerdict guaranteed_membership_refute(const KnowledgeBundle& kb,
                                               const Vector& x,
                                               const Vector& v, int samples,
                                               Rng& rng,
                                               bool include_extremes) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  detail::require_dim(v, kb.dim(), "velocity");
  auto check = [&](const ConsistentSample& s) -> std::optional<RefutationVerdict> {
    const auto inside = velocity_available(s, v);
    if (inside && !*inside) return RefutationVerdict{true, s};
    return std::nullopt;
  };

  if (include_extremes && kb.lipschitz_sum() * x.norm() <= kb.sigma()) {
    const auto [lo, hi] = extreme_ellipsoids(kb, x);
    if (auto r = check(lo)) return *r;
    if (auto r = check(hi)) return *r;
  }
  for (int i = 0; i < samples; ++i) {
    if (auto r = check(sample_consistent(kb, x, rng))) return *r;
  }
  return {};
}

double distance_to_ellipsoid(const Ellipsoid& e, const Vector& v) {
  detail::require_dim(v, e.dim(), "query point");
  Eigen::JacobiSVD<Matrix> svd(e.generator, Eigen::ComputeFullU);
  const Vector& s = svd.singularValues();
  if (is_singular(spectral_summary(e.generator))) {
    throw SingularMatrixError("ellipsoid generator is singular",
                              s(s.size() - 1));
  }
  // In the principal frame the ellipsoid is sum (z_i / s_i)^2 <= 1.
  const Vector y = svd.matrixU().transpose() * (v - e.center);
  if (y.cwiseQuotient(s).squaredNorm() <= 1.0) return 0.0;

  // Closest point z_i = s_i^2 y_i / (s_i^2 + t) where t >= 0 solves the
  // secular equation phi(t) = sum (s_i y_i / (s_i^2 + t))^2 - 1 = 0.
  const Vector s2 = s.cwiseAbs2();
  auto phi = [&](double t) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double q = s(i) * y(i) / (s2(i) + t);
      acc += q * q;
    }
    return acc - 1.0;
  };
  double hi = s(0) * y.norm();  // phi(hi) <= 0
  std::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(
      phi, 0.0, hi, boost::math::tools::eps_tolerance<double>(48), max_iter);
  const double t = 0.5 * (root.first + root.second);
  Vector z(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) z(i) = s2(i) * y(i) / (s2(i) + t);
  return (y - z).norm();
}

bool optimistic_membership(const KnowledgeBundle& kb, const Vector& x,
                           const Vector& v) {
  detail::require_dim(x, kb.dim(), "state");
  const double slack = kb.lipschitz_sum() * x.norm();
  return distance_to_ellipsoid(Ellipsoid(kb.f0, kb.G0), v) <=
         slack + kMembershipTol;
}

}  // namespace grs
