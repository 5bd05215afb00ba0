#include "grs/ellipsoid.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "grs/errors.hpp"
#include "validate.hpp"

namespace grs {

Ellipsoid::Ellipsoid(Vector c, Matrix g)
    : center(std::move(c)), generator(std::move(g)) {
  detail::require_square(generator, "ellipsoid generator");
  detail::require_dim(center, generator.rows(), "ellipsoid center");
  detail::require_finite(center, "ellipsoid center");
  detail::require_finite(generator, "ellipsoid generator");
}

Ball::Ball(Vector center, double radius)
    : center_(std::move(center)), radius_(radius) {
  detail::require_finite(center_, "ball center");
  detail::require_nonnegative(radius_, "ball radius");
}

Ball Ball::empty(Eigen::Index dim) {
  Ball b;
  b.center_ = Vector::Zero(dim);
  b.empty_ = true;
  return b;
}

bool Ball::contains(const Vector& p, double tol) const {
  if (empty_) return false;
  detail::require_dim(p, dim(), "point");
  return (p - center_).norm() <= radius_ + tol;
}

SpectralSummary spectral_summary(const Matrix& m) {
  detail::require_square(m, "matrix");
  detail::require_finite(m, "matrix");
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();  // sorted descending
  SpectralSummary out;
  out.spectral_norm = s(0);
  out.min_singular_value = s(s.size() - 1);
  out.condition_number = out.min_singular_value > 0.0
                             ? out.spectral_norm / out.min_singular_value
                             : std::numeric_limits<double>::infinity();
  return out;
}

bool is_singular(const SpectralSummary& s) {
  return s.spectral_norm == 0.0 ||
         s.min_singular_value <= kSingularRelTol * s.spectral_norm;
}

namespace {

void require_invertible(const Matrix& m, const char* what) {
  const auto s = spectral_summary(m);
  if (is_singular(s)) {
    std::ostringstream msg;
    msg << what << " is singular (sigma_min = " << s.min_singular_value
        << ", ||M|| = " << s.spectral_norm << ")";
    throw SingularMatrixError(msg.str(), s.min_singular_value);
  }
}

}  // namespace

Ball inscribed_ball(const Ellipsoid& e) {
  require_invertible(e.generator, "ellipsoid generator");
  return Ball(e.center, spectral_summary(e.generator).min_singular_value);
}

bool ellipsoid_contains(const Ellipsoid& e, const Vector& v) {
  detail::require_dim(v, e.dim(), "query point");
  require_invertible(e.generator, "ellipsoid generator");
  // ||B^{-1} w|| = ||S^{-1} U^T w|| for B = U S V^T.
  Eigen::JacobiSVD<Matrix> svd(e.generator, Eigen::ComputeFullU);
  const Vector w = svd.matrixU().transpose() * (v - e.center);
  const Vector u = w.cwiseQuotient(svd.singularValues());
  return u.norm() <= 1.0 + kMembershipTol;
}

double shrunk_radius_lower_bound(const Matrix& b0, double r) {
  detail::require_nonnegative(r, "perturbation radius");
  return spectral_summary(b0).min_singular_value - r;
}

Ball ball_family_intersection(const Vector& a, double r, double big_r) {
  detail::require_finite(a, "center");
  detail::require_nonnegative(r, "center spread");
  if (!std::isfinite(big_r)) throw InvalidArgument("ball radius not finite");
  if (big_r < r) return Ball::empty(a.size());
  return Ball(a, big_r - r);
}

Vector sample_unit_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector d(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = normal(rng);
    norm = d.norm();
  } while (norm == 0.0);
  return d / norm;
}

Vector sample_in_ball(const Vector& center, double radius, Rng& rng,
                      bool on_boundary) {
  const auto n = center.size();
  if (radius == 0.0) return center;
  double scale = radius;
  if (!on_boundary) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    scale *= std::pow(uniform(rng), 1.0 / static_cast<double>(n));
  }
  return center + scale * sample_unit_vector(n, rng);
}

Matrix sample_matrix_ball(const Matrix& b0, double radius, Rng& rng,
                          bool on_boundary) {
  if (radius == 0.0) return b0;
  std::normal_distribution<double> normal;
  const auto rows = b0.rows();
  const auto cols = b0.cols();
  Matrix d(rows, cols);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) d(i, j) = normal(rng);
    norm = spectral_summary(d).spectral_norm;
  } while (norm == 0.0);
  double scale = radius;
  if (!on_boundary) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    scale *= std::pow(uniform(rng), 1.0 / static_cast<double>(rows * cols));
  }
  return b0 + (scale / norm) * d;
}

}  // namespace grs
