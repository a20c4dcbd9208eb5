#pragma once

// Exact small-sample references used to validate the contour construction.

#include <cstddef>
#include <vector>

#include "depthq/geometry.hpp"
#include "depthq/projquant.hpp"

namespace depthq {

inline constexpr std::size_t kDepthSizeLimit = 10000;
inline constexpr std::size_t kReferenceSizeLimit = 1000;
inline constexpr std::size_t kReferenceDirections = 100000;

struct DepthValue {
  std::size_t depth = 0;
  friend bool operator==(DepthValue, DepthValue) = default;
};

// Halfspace depth: the smallest number of data points in a closed halfplane
// whose boundary passes through `point`. Angular sweep, O(n log n).
DepthValue exact_depth(const Dataset& data, Vec2 point);

// Intersection of the inf-quantile halfplanes over a dense equispaced grid
// plus every direction orthogonal to a pairwise difference of data points.
// Construction is O((K_ref + n^2) n); queries are O(K_ref + n^2).
class ReferenceRegion {
 public:
  ReferenceRegion(const Dataset& data, QuantileLevel level,
                  std::size_t grid_directions = kReferenceDirections);

  bool contains(Vec2 point) const;
  // Largest constraint violation at `point` (negative inside).
  double violation(Vec2 point) const;
  // Distance to the region boundary, computed from a polygon obtained by
  // clipping the data bounding box with every constraint. Infinite when the
  // clipped polygon is empty.
  double boundary_distance(Vec2 point) const;

  std::size_t constraint_count() const noexcept { return offsets_.size(); }
  const std::vector<Vec2>& polygon() const noexcept { return polygon_; }

 private:
  std::vector<double> ux_;
  std::vector<double> uy_;
  std::vector<double> offsets_;
  std::vector<double> tolerances_;
  std::vector<Vec2> polygon_;
};

// Convenience wrapper that builds a ReferenceRegion per call.
bool reference_region_membership(const Dataset& data, QuantileLevel level, Vec2 point);

}  // namespace depthq
