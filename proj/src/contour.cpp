#include "grs/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>

#include "grs/errors.hpp"

namespace grs {

namespace {

// Edge of the node lattice: dir 0 runs from node (i, j) to (i + 1, j),
// dir 1 from (i, j) to (i, j + 1).
using EdgeKey = std::uint64_t;

EdgeKey edge_key(int dir, int i, int j) {
  return (static_cast<EdgeKey>(dir) << 62) | (static_cast<EdgeKey>(i) << 31) |
         static_cast<EdgeKey>(j);
}

struct Segment {
  EdgeKey a, b;
};

}  // namespace

std::vector<Polyline> marching_squares(const Grid& grid,
                                       const std::vector<double>& values) {
  if (grid.dim() != 2) throw InvalidArgument("marching squares needs a 2-D grid");
  if (values.size() != grid.size()) throw InvalidArgument("value count mismatch");

  const int nx = grid.count(0);
  const int ny = grid.count(1);
  auto at = [&](int i, int j) { return values[grid.flat({i, j, 0})]; };
  auto node = [&](int i, int j) {
    return Point2(grid.coordinate(0, i), grid.coordinate(1, j));
  };

  std::unordered_map<EdgeKey, Point2> crossing;
  std::vector<Segment> segments;

  auto cross = [&](int dir, int i, int j) {
    const EdgeKey key = edge_key(dir, i, j);
    if (!crossing.count(key)) {
      const int i2 = dir == 0 ? i + 1 : i;
      const int j2 = dir == 0 ? j : j + 1;
      const double fa = at(i, j);
      const double fb = at(i2, j2);
      const double t = fa / (fa - fb);
      crossing.emplace(key, node(i, j) + t * (node(i2, j2) - node(i, j)));
    }
    return key;
  };

  for (int i = 0; i + 1 < nx; ++i) {
    for (int j = 0; j + 1 < ny; ++j) {
      const std::array<double, 4> f{at(i, j), at(i + 1, j), at(i + 1, j + 1),
                                    at(i, j + 1)};
      int code = 0;
      for (int c = 0; c < 4; ++c) code |= (f[c] <= 0.0 ? 1 : 0) << c;
      if (code == 0 || code == 15) continue;

      // Edges in corner order: bottom (c0-c1), right (c1-c2), top (c3-c2),
      // left (c0-c3).
      auto edge = [&](int e) {
        switch (e) {
          case 0: return cross(0, i, j);
          case 1: return cross(1, i + 1, j);
          case 2: return cross(0, i, j + 1);
          default: return cross(1, i, j);
        }
      };
      auto add = [&](int e1, int e2) { segments.push_back({edge(e1), edge(e2)}); };

      if (code == 5 || code == 10) {
        const bool center_inside = (f[0] + f[1] + f[2] + f[3]) <= 0.0;
        if ((code == 5) == center_inside) {
          add(0, 1);
          add(2, 3);
        } else {
          add(3, 0);
          add(1, 2);
        }
        continue;
      }
      std::array<int, 2> found{};
      int count = 0;
      const std::array<std::pair<int, int>, 4> corners{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};
      for (int e = 0; e < 4; ++e) {
        const bool in_a = (code >> corners[e].first) & 1;
        const bool in_b = (code >> corners[e].second) & 1;
        if (in_a != in_b) found[count++] = e;
      }
      add(found[0], found[1]);
    }
  }

  std::unordered_map<EdgeKey, std::vector<std::size_t>> adjacency;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    adjacency[segments[s].a].push_back(s);
    adjacency[segments[s].b].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto trace = [&](std::size_t first, EdgeKey start) {
    Polyline line;
    line.points.push_back(crossing.at(start));
    EdgeKey at_key = start;
    std::size_t seg = first;
    while (true) {
      used[seg] = true;
      const EdgeKey next = segments[seg].a == at_key ? segments[seg].b : segments[seg].a;
      line.points.push_back(crossing.at(next));
      at_key = next;
      if (next == start) {
        line.closed = true;
        break;
      }
      std::size_t follow = segments.size();
      for (std::size_t cand : adjacency[next]) {
        if (!used[cand]) {
          follow = cand;
          break;
        }
      }
      if (follow == segments.size()) break;
      seg = follow;
    }
    return line;
  };

  std::vector<Polyline> lines;
  // Open chains start at an endpoint shared by a single segment.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (EdgeKey end : {segments[s].a, segments[s].b}) {
      if (!used[s] && adjacency[end].size() == 1) lines.push_back(trace(s, end));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) lines.push_back(trace(s, segments[s].a));
  }
  return lines;
}

std::vector<Interval> sublevel_intervals(const Grid& grid,
                                         const std::vector<double>& values) {
  if (grid.dim() != 1) throw InvalidArgument("sublevel intervals need a 1-D grid");
  if (values.size() != grid.size()) throw InvalidArgument("value count mismatch");
  const int n = grid.count(0);
  const double h = grid.spacing(0);
  auto crossing = [&](int outside, int inside) {
    const double fo = values[outside];
    const double fi = values[inside];
    const double t = fo / (fo - fi);  // fraction from the outside node
    return grid.coordinate(0, outside) + t * (inside - outside) * h;
  };

  std::vector<Interval> out;
  int i = 0;
  while (i < n) {
    if (values[i] > 0.0) {
      ++i;
      continue;
    }
    const int first = i;
    while (i + 1 < n && values[i + 1] <= 0.0) ++i;
    const int last = i;
    const double lo = first > 0 ? crossing(first - 1, first) : grid.coordinate(0, first);
    const double hi = last + 1 < n ? crossing(last + 1, last) : grid.coordinate(0, last);
    out.push_back({lo, hi});
    ++i;
  }
  return out;
}

double hausdorff_distance(const std::vector<Point2>& a,
                          const std::vector<Point2>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Hausdorff distance of an empty set");
  auto directed = [](const std::vector<Point2>& from, const std::vector<Point2>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, (p - q).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace grs
