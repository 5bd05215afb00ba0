#include "grs/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grs/errors.hpp"
#include "validate.hpp"

namespace grs {

Grid::Grid(std::vector<double> lower, std::vector<double> upper,
           std::vector<int> counts)
    : lower_(std::move(lower)), upper_(std::move(upper)),
      counts_(std::move(counts)) {
  const auto n = counts_.size();
  if (n < 1 || n > static_cast<std::size_t>(kMaxDim)) {
    throw InvalidArgument("grid dimension must be 1, 2 or 3, got " +
                          std::to_string(n));
  }
  if (lower_.size() != n || upper_.size() != n) {
    throw InvalidArgument("grid bounds and counts differ in dimension");
  }
  spacing_.resize(n);
  strides_.resize(n);
  size_ = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) ||
        !(lower_[i] < upper_[i])) {
      throw InvalidArgument("grid axis " + std::to_string(i) +
                            ": need finite lower < upper");
    }
    if (counts_[i] < kMinCount) {
      throw InvalidArgument("grid axis " + std::to_string(i) + ": at least " +
                            std::to_string(kMinCount) + " nodes required");
    }
    spacing_[i] = (upper_[i] - lower_[i]) / (counts_[i] - 1);
    size_ *= static_cast<std::size_t>(counts_[i]);
  }
  std::size_t stride = 1;
  for (std::size_t i = n; i-- > 0;) {
    strides_[i] = stride;
    stride *= static_cast<std::size_t>(counts_[i]);
  }
}

double Grid::max_spacing() const {
  return *std::max_element(spacing_.begin(), spacing_.end());
}

std::array<int, Grid::kMaxDim> Grid::index(std::size_t flat) const {
  std::array<int, kMaxDim> idx{};
  for (int i = 0; i < dim(); ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return idx;
}

std::size_t Grid::flat(const std::array<int, kMaxDim>& idx) const {
  std::size_t f = 0;
  for (int i = 0; i < dim(); ++i) f += static_cast<std::size_t>(idx[i]) * strides_[i];
  return f;
}

Vector Grid::point(std::size_t flat_index) const {
  const auto idx = index(flat_index);
  Vector p(dim());
  for (int i = 0; i < dim(); ++i) p(i) = coordinate(i, idx[i]);
  return p;
}

bool Grid::near_edge(std::size_t flat_index, int layers) const {
  const auto idx = index(flat_index);
  for (int i = 0; i < dim(); ++i) {
    if (idx[i] <= layers || idx[i] >= counts_[i] - 1 - layers) return true;
  }
  return false;
}

bool Grid::box_contains_ball(const Vector& center, double radius) const {
  for (int i = 0; i < dim(); ++i) {
    if (center(i) - radius < lower_[i] || center(i) + radius > upper_[i])
      return false;
  }
  return true;
}

LevelSetField distance_field(const Grid& grid, const Vector& x0) {
  detail::require_dim(x0, grid.dim(), "initial state");
  detail::require_finite(x0, "initial state");
  LevelSetField field{grid, std::vector<double>(grid.size()), 0.0};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    field.values[k] = (grid.point(k) - x0).norm();
  }
  return field;
}

namespace {

// Lower corner index and fractional offset per axis, clamped to the box.
struct CellLocation {
  std::array<int, Grid::kMaxDim> base{};
  std::array<double, Grid::kMaxDim> frac{};
};

CellLocation locate(const Grid& g, const Vector& p) {
  detail::require_dim(p, g.dim(), "query point");
  CellLocation loc;
  for (int i = 0; i < g.dim(); ++i) {
    const double s = std::clamp((p(i) - g.lower(i)) / g.spacing(i), 0.0,
                                static_cast<double>(g.count(i) - 1));
    int b = std::min(static_cast<int>(std::floor(s)), g.count(i) - 2);
    loc.base[i] = b;
    loc.frac[i] = s - b;
  }
  return loc;
}

template <typename NodeFn>
auto multilinear(const Grid& g, const CellLocation& loc, NodeFn&& node_value) {
  using Value = decltype(node_value(std::size_t{}));
  const int n = g.dim();
  Value acc{};
  bool first = true;
  for (int corner = 0; corner < (1 << n); ++corner) {
    std::array<int, Grid::kMaxDim> idx{};
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const int bit = (corner >> i) & 1;
      idx[i] = loc.base[i] + bit;
      w *= bit ? loc.frac[i] : 1.0 - loc.frac[i];
    }
    if (first) {
      acc = w * node_value(g.flat(idx));
      first = false;
    } else {
      acc += w * node_value(g.flat(idx));
    }
  }
  return acc;
}

}  // namespace

double interpolate(const LevelSetField& field, const Vector& p) {
  const auto& g = field.grid;
  return multilinear(g, locate(g, p),
                     [&](std::size_t k) { return field.values[k]; });
}

Vector interpolate_gradient(const LevelSetField& field, const Vector& p) {
  const auto& g = field.grid;
  const auto& v = field.values;
  auto node_gradient = [&](std::size_t k) -> Vector {
    const auto idx = g.index(k);
    Vector grad(g.dim());
    for (int i = 0; i < g.dim(); ++i) {
      const std::size_t s = g.stride(i);
      const double h = g.spacing(i);
      if (idx[i] == 0) {
        grad(i) = (v[k + s] - v[k]) / h;
      } else if (idx[i] == g.count(i) - 1) {
        grad(i) = (v[k] - v[k - s]) / h;
      } else {
        grad(i) = (v[k + s] - v[k - s]) / (2.0 * h);
      }
    }
    return grad;
  };
  return multilinear(g, locate(g, p), node_gradient);
}

}  // namespace grs
