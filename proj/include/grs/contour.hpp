#pragma once

#include <vector>

#include "grs/level_set.hpp"
#include "grs/types.hpp"

namespace grs {

using Point2 = Eigen::Vector2d;

struct Polyline {
  std::vector<Point2> points;
  /// First and last point coincide.
  bool closed = false;
};

/// Boundary of {values <= 0} on a 2-D grid by marching squares with linear
/// interpolation along cell edges. Saddle cells are split by the cell-center
/// average. Segments are chained into maximal polylines.
std::vector<Polyline> marching_squares(const Grid& grid,
                                       const std::vector<double>& values);

/// Connected components of {values <= 0} on a 1-D grid; each end is the
/// linearly interpolated zero crossing (or the grid node at the domain edge).
std::vector<Interval> sublevel_intervals(const Grid& grid,
                                         const std::vector<double>& values);

/// Symmetric Hausdorff distance between two finite point sets (brute force).
/// Throws InvalidArgument if either set is empty.
double hausdorff_distance(const std::vector<Point2>& a,
                          const std::vector<Point2>& b);

}  // namespace grs
