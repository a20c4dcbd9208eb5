#pragma once

// Approximate depth contours: intersections of directional quantile
// halfplanes over an equispaced direction grid.

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "depthq/geometry.hpp"
#include "depthq/projquant.hpp"

namespace depthq {

// K >= 3 directions at angles 2 pi j / K, j = 0..K-1.
class DirectionGrid {
 public:
  explicit DirectionGrid(std::size_t count);

  std::size_t size() const noexcept { return directions_.size(); }
  const Direction& operator[](std::size_t j) const { return directions_[j]; }
  std::span<const Direction> directions() const noexcept { return directions_; }

 private:
  std::vector<Direction> directions_;
};

// Throws InvalidParameter for K < 3.
DirectionGrid make_grid(std::size_t count);

// Convex polygon (possibly degenerate) or the distinguished empty region.
class ContourRegion {
 public:
  static constexpr std::size_t kNoSource = std::numeric_limits<std::size_t>::max();

  // Constraint carrying one polygon edge. `source` indexes the halfplane
  // sequence passed to intersect_halfplanes.
  struct Edge {
    Halfplane plane;
    std::size_t source;
  };

  ContourRegion() = default;  // empty
  static ContourRegion empty_region() { return {}; }
  ContourRegion(std::vector<Vec2> vertices, std::vector<Edge> edges);

  bool empty() const noexcept { return vertices_.empty(); }
  // Counterclockwise.
  std::span<const Vec2> vertices() const noexcept { return vertices_; }
  // edges()[i] runs from vertex i to vertex i + 1 (cyclically).
  std::span<const Edge> edges() const noexcept { return edges_; }
  // Sources of the two constraints meeting at vertex i.
  std::array<std::size_t, 2> generators(std::size_t vertex) const;

  double area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Edge> edges_;
};

// Intersection of halfplanes whose normals are sorted by angle in [0, 2 pi).
// Single pass over a double-ended list of active constraints, O(K).
// Normals closer than 1e-12 rad are merged keeping the larger offset.
// Throws ContractViolation on unsorted input or when the intersection is
// nonempty but unbounded.
ContourRegion intersect_halfplanes(std::span<const Halfplane> planes);

// The K directional quantile halfplanes, in grid order.
std::vector<Halfplane> directional_halfplanes(const Dataset& data, QuantileLevel level,
                                              const DirectionGrid& grid);

ContourRegion contour(const Dataset& data, QuantileLevel level, const DirectionGrid& grid);

// Membership in every generating halfplane, within 1e-9 (relative to the
// offset magnitude when it exceeds one).
bool contains(const ContourRegion& region, Vec2 point);

// Distance from a point to the region (zero inside).
double distance_to_region(const ContourRegion& region, Vec2 point);

// Symmetric Hausdorff distance between two nonempty regions. Throws
// UndefinedDistance when either is empty.
double hausdorff(const ContourRegion& a, const ContourRegion& b);

}  // namespace depthq
