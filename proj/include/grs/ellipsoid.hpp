#pragma once

#include <random>

#include "grs/types.hpp"

namespace grs {

/// Relative tolerance below which a matrix counts as singular:
/// sigma_min(M) <= kSingularRelTol * ||M||.
inline constexpr double kSingularRelTol = 1e-9;

/// Absolute slack on ||B^{-1}(v - a)|| <= 1 for ellipsoid membership.
inline constexpr double kMembershipTol = 1e-12;

/// The set center + generator * {u : ||u|| <= 1}.
struct Ellipsoid {
  Vector center;
  Matrix generator;

  Ellipsoid(Vector c, Matrix g);
  Eigen::Index dim() const { return center.size(); }
};

/// Closed Euclidean ball, or the empty set.
class Ball {
 public:
  /// Throws InvalidArgument for a negative or non-finite radius.
  Ball(Vector center, double radius);
  static Ball empty(Eigen::Index dim);

  bool is_empty() const { return empty_; }
  const Vector& center() const { return center_; }
  /// Radius of a non-empty ball; 0 for the empty set.
  double radius() const { return radius_; }
  Eigen::Index dim() const { return center_.size(); }

  bool contains(const Vector& p, double tol = 0.0) const;

 private:
  Ball() = default;
  Vector center_;
  double radius_ = 0.0;
  bool empty_ = false;
};

struct SpectralSummary {
  double spectral_norm = 0.0;
  double min_singular_value = 0.0;
  /// +inf for a singular matrix.
  double condition_number = 1.0;
};

SpectralSummary spectral_summary(const Matrix& m);

/// True when sigma_min(m) <= kSingularRelTol * ||m|| (or m == 0).
bool is_singular(const SpectralSummary& s);

/// Largest ball inside the ellipsoid: center and radius sigma_min(generator).
Ball inscribed_ball(const Ellipsoid& e);

bool ellipsoid_contains(const Ellipsoid& e, const Vector& v);

/// sigma_min(b0) - r, a lower bound on sigma_min over the spectral-norm ball
/// of radius r around b0 (Weyl). May be negative.
double shrunk_radius_lower_bound(const Matrix& b0, double r);

/// Intersection over all centers c with ||c - a|| <= r of Ball(c, big_r).
/// Equals Ball(a, big_r - r), or the empty set when big_r < r.
Ball ball_family_intersection(const Vector& a, double r, double big_r);

// Seeded samplers. Deterministic for a given engine state.
using Rng = std::mt19937_64;

/// Uniform direction on the unit sphere in R^n.
Vector sample_unit_vector(Eigen::Index n, Rng& rng);

/// Uniform point in Ball(center, radius); on its boundary when on_boundary.
Vector sample_in_ball(const Vector& center, double radius, Rng& rng,
                      bool on_boundary = false);

/// Point of the spectral-norm ball {B : ||B - b0|| <= radius}: a Gaussian
/// direction normalized to unit spectral norm, scaled by radius * u^(1/n^2),
/// or by exactly radius when on_boundary.
Matrix sample_matrix_ball(const Matrix& b0, double radius, Rng& rng,
                          bool on_boundary = false);

}  // namespace grs
