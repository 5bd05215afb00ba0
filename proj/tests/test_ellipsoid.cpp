#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "grs/ellipsoid.hpp"
#include "grs/errors.hpp"

using namespace grs;

namespace {

// Singular values from the eigenvalues of M^T M, independent of the SVD path.
Vector singular_values_oracle(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m.transpose() * m);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("spectral summary of a diagonal matrix") {
  const auto s = spectral_summary(diag2(3.0, 1.0));
  CHECK(s.spectral_norm == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s.min_singular_value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.condition_number == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_FALSE(is_singular(s));
}

TEST_CASE("spectral summary agrees with the eigenvalues of M^T M") {
  Rng rng(7);
  std::normal_distribution<double> normal;
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m(n, n);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
      const Vector sv = singular_values_oracle(m);
      const auto s = spectral_summary(m);
      CHECK(std::abs(s.spectral_norm - sv.maxCoeff()) <= 1e-10 * sv.maxCoeff());
      CHECK(std::abs(s.min_singular_value - sv.minCoeff()) <= 1e-7 * sv.maxCoeff());
    }
  }
}

TEST_CASE("rank-deficient and zero matrices are singular") {
  Matrix m(2, 2);
  m << 1.0, 2.0, 2.0, 4.0;
  const auto s = spectral_summary(m);
  CHECK(is_singular(s));
  CHECK(std::isinf(s.condition_number));
  CHECK(is_singular(spectral_summary(Matrix::Zero(3, 3))));
}

TEST_CASE("spectral summary rejects non-finite entries") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(spectral_summary(m), InvalidArgument);
}

TEST_CASE("ball construction and membership") {
  CHECK_THROWS_AS(Ball(Vector::Zero(2), -0.1), InvalidArgument);
  const Ball b(Vector::Zero(2), 1.0);
  CHECK(b.contains(Eigen::Vector2d(0.6, 0.8)));
  CHECK_FALSE(b.contains(Eigen::Vector2d(0.6, 0.8001)));
  const Ball e = Ball::empty(2);
  CHECK(e.is_empty());
  CHECK_FALSE(e.contains(Vector::Zero(2)));
}

TEST_CASE("inscribed ball of an ellipsoid") {
  const Ellipsoid e(Eigen::Vector2d(1.0, -1.0), diag2(3.0, 1.0));
  const Ball b = inscribed_ball(e);
  CHECK(b.radius() == 1.0);
  CHECK(b.center() == e.center);
}

TEST_CASE("ellipsoid membership on and past the boundary") {
  Rng rng(11);
  Matrix g(2, 2);
  g << 2.0, 0.5, -0.3, 1.2;
  const Ellipsoid e(Eigen::Vector2d(0.4, 0.1), g);
  for (int k = 0; k < 200; ++k) {
    const Vector u = sample_unit_vector(2, rng);
    CHECK(ellipsoid_contains(e, e.center + g * u));
    CHECK_FALSE(ellipsoid_contains(e, e.center + 1.001 * (g * u)));
  }
}

TEST_CASE("Weyl lower bound for the matrix ball") {
  CHECK(shrunk_radius_lower_bound(diag2(3.0, 1.0), 0.3) == 0.7);
  CHECK(shrunk_radius_lower_bound(diag2(3.0, 1.0), 1.5) == -0.5);
  CHECK_THROWS_AS(shrunk_radius_lower_bound(diag2(3.0, 1.0), -1.0), InvalidArgument);

  Rng rng(3);
  const Matrix b0 = diag2(3.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const Matrix b = sample_matrix_ball(b0, 0.3, rng, k % 2 == 0);
    CHECK(singular_values_oracle(b).minCoeff() >= 0.7 - 1e-9);
  }
}

TEST_CASE("intersection of a ball family") {
  const Vector a = Eigen::Vector3d(1.0, 2.0, 3.0);
  const Ball b = ball_family_intersection(a, 0.25, 1.0);
  CHECK_FALSE(b.is_empty());
  CHECK(b.center() == a);
  CHECK(b.radius() == 0.75);
  CHECK(ball_family_intersection(a, 1.0, 1.0).radius() == 0.0);
  CHECK(ball_family_intersection(a, 1.5, 1.0).is_empty());
}

TEST_CASE("samplers respect their radii") {
  Rng rng(5);
  for (int n : {1, 2, 3, 5}) {
    const Vector c = Vector::LinSpaced(n, -1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      CHECK(sample_unit_vector(n, rng).norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((sample_in_ball(c, 0.5, rng) - c).norm() <= 0.5 + 1e-15);
      CHECK((sample_in_ball(c, 0.5, rng, true) - c).norm() ==
            doctest::Approx(0.5).epsilon(1e-14));
      const Matrix b0 = Matrix::Identity(n, n);
      const Matrix inner = sample_matrix_ball(b0, 0.2, rng);
      CHECK(singular_values_oracle(inner - b0).maxCoeff() <= 0.2 + 1e-12);
      const Matrix edge = sample_matrix_ball(b0, 0.2, rng, true);
      CHECK(singular_values_oracle(edge - b0).maxCoeff() == doctest::Approx(0.2).epsilon(1e-10));
    }
  }
}

TEST_CASE("samplers are deterministic for a seed") {
  Rng a(42);
  Rng b(42);
  CHECK(sample_in_ball(Vector::Zero(3), 1.0, a) == sample_in_ball(Vector::Zero(3), 1.0, b));
  CHECK(sample_matrix_ball(Matrix::Identity(2, 2), 0.1, a) ==
        sample_matrix_ball(Matrix::Identity(2, 2), 0.1, b));
}
