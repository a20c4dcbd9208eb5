#include "depthq/contour.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "depthq/errors.hpp"
#include "depthq/parallel.hpp"

namespace depthq {

DirectionGrid::DirectionGrid(std::size_t count) {
  if (count < 3) {
    throw InvalidParameter("direction grid needs K >= 3, got " + std::to_string(count));
  }
  directions_.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    directions_.emplace_back(kTwoPi * static_cast<double>(j) / static_cast<double>(count));
  }
}

DirectionGrid make_grid(std::size_t count) { return DirectionGrid(count); }

ContourRegion::ContourRegion(std::vector<Vec2> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.size() != edges_.size()) {
    throw ContractViolation("region needs one edge per vertex");
  }
}

std::array<std::size_t, 2> ContourRegion::generators(std::size_t vertex) const {
  const std::size_t m = edges_.size();
  return {edges_[(vertex + m - 1) % m].source, edges_[vertex].source};
}

double ContourRegion::area() const {
  double twice = 0.0;
  const std::size_t m = vertices_.size();
  for (std::size_t i = 0; i < m; ++i) twice += cross(vertices_[i], vertices_[(i + 1) % m]);
  return 0.5 * twice;
}

namespace {

constexpr double kMergeAngle = 1e-12;
constexpr double kParallelSine = 1e-10;

struct Line {
  Vec2 u;
  double q;
  double angle;
  std::size_t source;
  Halfplane plane;
};

Vec2 meet(const Line& a, const Line& b) {
  const double det = cross(a.u, b.u);
  return {(a.q * b.u.y - a.u.y * b.q) / det, (a.u.x * b.q - a.q * b.u.x) / det};
}

// Angular gap from a to b going counterclockwise, in [0, 2 pi).
double ccw_gap(double a, double b) {
  double g = b - a;
  if (g < 0.0) g += kTwoPi;
  return g;
}

std::vector<Line> merge_sorted(std::span<const Halfplane> planes) {
  std::vector<Line> lines;
  lines.reserve(planes.size() + 4);
  double prev = -1.0;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const Halfplane& h = planes[i];
    const double a = h.normal.angle();
    if (a < prev) {
      throw ContractViolation("halfplane normals must be sorted by angle (index " +
                              std::to_string(i) + ")");
    }
    prev = a;
    if (!std::isfinite(h.offset)) throw ContractViolation("halfplane offset must be finite");
    Line line{h.normal.normal(), h.offset, a, i, h};
    if (!lines.empty() && a - lines.back().angle < kMergeAngle) {
      if (line.q > lines.back().q) lines.back() = line;
      continue;
    }
    lines.push_back(line);
  }
  if (lines.size() > 1 && ccw_gap(lines.back().angle, lines.front().angle) < kMergeAngle) {
    if (lines.back().q > lines.front().q) lines.front() = lines.back();
    lines.pop_back();
  }
  return lines;
}

// Inserts the four box constraints |x|, |y| <= bound into the sorted list.
void add_box(std::vector<Line>& lines, double bound) {
  const Vec2 normals[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::vector<Line> merged;
  merged.reserve(lines.size() + 4);
  std::size_t next = 0;
  for (const Vec2& n : normals) {
    const Direction d = Direction::from_vector(n);
    Line box{n, -bound, d.angle(), ContourRegion::kNoSource, Halfplane{d, -bound}};
    while (next < lines.size() && lines[next].angle < box.angle - kMergeAngle) {
      merged.push_back(lines[next++]);
    }
    // Grid constraints at the same angle are always tighter than the box.
    if (next < lines.size() && std::abs(lines[next].angle - box.angle) < kMergeAngle) continue;
    merged.push_back(box);
  }
  while (next < lines.size()) merged.push_back(lines[next++]);
  // Wrap-around: a grid constraint just below 2 pi coincides with the box at 0.
  if (merged.size() > 1 && merged.front().source == ContourRegion::kNoSource &&
      ccw_gap(merged.back().angle, merged.front().angle) < kMergeAngle) {
    merged.erase(merged.begin());
  }
  lines.swap(merged);
}

}  // namespace

ContourRegion intersect_halfplanes(std::span<const Halfplane> planes) {
  if (planes.empty()) throw ContractViolation("no halfplanes to intersect");
  std::vector<Line> lines = merge_sorted(planes);

  double max_gap = lines.size() == 1 ? kTwoPi : 0.0;
  double max_offset = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t next = (i + 1) % lines.size();
    if (lines.size() > 1) max_gap = std::max(max_gap, ccw_gap(lines[i].angle, lines[next].angle));
    max_offset = std::max(max_offset, std::abs(lines[i].q));
  }
  // With every gap below pi the region, when nonempty, fits in a disc of
  // radius max|q| / cos(gap / 2); the box sits well outside it and never
  // becomes active. Otherwise the box detects unboundedness.
  const bool bounded = max_gap < kPi - 1e-9;
  const double bound = bounded ? 4.0 * max_offset / std::cos(0.5 * max_gap) + 1.0
                               : 1e6 * (max_offset + 1.0);
  add_box(lines, bound);

  const double eps = 1e-12 * max_offset;
  auto outside = [eps](const Line& l, Vec2 p) { return dot(l.u, p) - l.q < -eps; };

  std::deque<Line> dq;
  for (const Line& line : lines) {
    while (dq.size() >= 2 && outside(line, meet(dq[dq.size() - 2], dq.back()))) dq.pop_back();
    while (dq.size() >= 2 && outside(line, meet(dq[0], dq[1]))) dq.pop_front();
    if (!dq.empty() && std::abs(cross(dq.back().u, line.u)) < kParallelSine) {
      if (dot(dq.back().u, line.u) < 0.0) return ContourRegion::empty_region();
      if (line.q > dq.back().q) {
        dq.pop_back();
      } else {
        continue;
      }
    }
    dq.push_back(line);
  }
  while (dq.size() >= 3 && outside(dq.front(), meet(dq[dq.size() - 2], dq.back()))) dq.pop_back();
  while (dq.size() >= 3 && outside(dq.back(), meet(dq[0], dq[1]))) dq.pop_front();
  if (dq.size() < 3) return ContourRegion::empty_region();

  // A closed chain of constraints must turn through the full circle in
  // steps below pi; anything else means the pass found no feasible cell.
  for (std::size_t i = 0; i < dq.size(); ++i) {
    const Line& a = dq[i];
    const Line& b = dq[(i + 1) % dq.size()];
    if (ccw_gap(a.angle, b.angle) >= kPi || std::abs(cross(a.u, b.u)) < kParallelSine) {
      return ContourRegion::empty_region();
    }
  }

  std::vector<Line> active(dq.begin(), dq.end());
  const std::size_t m = active.size();
  std::vector<Vec2> vertices(m);
  for (std::size_t i = 0; i < m; ++i) vertices[i] = meet(active[(i + m - 1) % m], active[i]);

  // Drop constraints whose edge has collapsed to a point (several lines
  // through one vertex), unless that would leave fewer than three edges.
  const double vertex_tol = 1e-12 * std::max(max_offset, 1e-300);
  std::vector<Line> kept;
  kept.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (norm(vertices[(i + 1) % m] - vertices[i]) > vertex_tol) kept.push_back(active[i]);
  }
  if (kept.size() >= 3 && kept.size() < m) {
    active.swap(kept);
  }
  const std::size_t k = active.size();
  vertices.resize(k);
  std::vector<ContourRegion::Edge> edges;
  edges.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    vertices[i] = meet(active[(i + k - 1) % k], active[i]);
    if (active[i].source == ContourRegion::kNoSource) {
      throw ContractViolation("halfplane intersection is unbounded");
    }
    edges.push_back({active[i].plane, active[i].source});
  }
  return ContourRegion(std::move(vertices), std::move(edges));
}

std::vector<Halfplane> directional_halfplanes(const Dataset& data, QuantileLevel level,
                                              const DirectionGrid& grid) {
  std::vector<Halfplane> planes(grid.size(), Halfplane{grid[0], 0.0});
  parallel_chunks(grid.size(), [&](std::size_t begin, std::size_t end) {
    QuantileSelector selector;
    for (std::size_t j = begin; j < end; ++j) {
      planes[j] = directional_quantile(data, grid[j], level, selector);
    }
  });
  return planes;
}

ContourRegion contour(const Dataset& data, QuantileLevel level, const DirectionGrid& grid) {
  const std::vector<Halfplane> planes = directional_halfplanes(data, level, grid);
  return intersect_halfplanes(planes);
}

bool contains(const ContourRegion& region, Vec2 point) {
  if (region.empty()) return false;
  for (const auto& e : region.edges()) {
    const double tol = 1e-9 * std::max(1.0, std::abs(e.plane.offset));
    if (!e.plane.contains(point, tol)) return false;
  }
  return true;
}

namespace {

bool inside_polygon(std::span<const Vec2> poly, Vec2 p) {
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % m];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

double directed_hausdorff(const ContourRegion& from, const ContourRegion& to) {
  double worst = 0.0;
  for (const Vec2& v : from.vertices()) worst = std::max(worst, distance_to_region(to, v));
  return worst;
}

}  // namespace

double distance_to_region(const ContourRegion& region, Vec2 point) {
  if (region.empty()) throw UndefinedDistance();
  const auto poly = region.vertices();
  if (poly.size() >= 3 && inside_polygon(poly, point)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    best = std::min(best, segment_distance(point, poly[i], poly[(i + 1) % m]));
  }
  return best;
}

double hausdorff(const ContourRegion& a, const ContourRegion& b) {
  if (a.empty() || b.empty()) throw UndefinedDistance();
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace depthq
