#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "grs/types.hpp"

namespace grs {

/// Uniform node-centered grid in 1 to 3 dimensions. Node j on axis i sits at
/// lower[i] + j * spacing(i), with spacing(i) = (upper[i] - lower[i]) /
/// (counts[i] - 1). Flat storage is row-major: the last axis varies fastest.
class Grid {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr int kMinCount = 16;

  Grid(std::vector<double> lower, std::vector<double> upper,
       std::vector<int> counts);

  int dim() const { return static_cast<int>(counts_.size()); }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  int count(int axis) const { return counts_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double max_spacing() const;
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<int>& counts() const { return counts_; }

  std::array<int, kMaxDim> index(std::size_t flat) const;
  std::size_t flat(const std::array<int, kMaxDim>& idx) const;
  double coordinate(int axis, int j) const { return lower_[axis] + j * spacing_[axis]; }
  Vector point(std::size_t flat) const;
  /// Nodes whose index is within `layers` of some edge of the grid.
  bool near_edge(std::size_t flat, int layers) const;
  /// Axis-aligned box [lower, upper] contains Ball(center, radius).
  bool box_contains_ball(const Vector& center, double radius) const;

  bool operator==(const Grid&) const = default;

 private:
  std::vector<double> lower_, upper_;
  std::vector<int> counts_;
  std::vector<double> spacing_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// A value function sampled on a grid at elapsed time `time`.
struct LevelSetField {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;
};

/// l(x) = ||x - x0||, whose only non-positive point is x0.
LevelSetField distance_field(const Grid& grid, const Vector& x0);

/// Multilinear interpolation; points outside the box are clamped onto it.
double interpolate(const LevelSetField& field, const Vector& p);

/// Central-difference gradient at every node, interpolated multilinearly at p
/// (one-sided differences on the edges).
Vector interpolate_gradient(const LevelSetField& field, const Vector& p);

}  // namespace grs
