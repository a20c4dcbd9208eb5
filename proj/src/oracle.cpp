#include "depthq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "depthq/errors.hpp"

namespace depthq {

namespace {

// 0 for angles in [0, pi), 1 for [pi, 2 pi).
int half(Vec2 d) { return (d.y < 0.0 || (d.y == 0.0 && d.x < 0.0)) ? 1 : 0; }

bool angle_less(Vec2 a, Vec2 b) {
  const int ha = half(a);
  const int hb = half(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0.0;
}

// b lies in the half-open arc [angle(a), angle(a) + pi).
bool in_half_turn(Vec2 a, Vec2 b) {
  const double c = cross(a, b);
  return c > 0.0 || (c == 0.0 && dot(a, b) > 0.0);
}

}  // namespace

DepthValue exact_depth(const Dataset& data, Vec2 point) {
  if (data.size() > kDepthSizeLimit) {
    throw SizeLimitError("exact_depth supports at most " + std::to_string(kDepthSizeLimit) +
                         " points");
  }
  if (!std::isfinite(point.x) || !std::isfinite(point.y)) {
    throw InvalidParameter("query point must be finite");
  }
  std::size_t coincident = 0;
  std::vector<Vec2> dirs;
  dirs.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec2 d = data.point(i) - point;
    if (d.x == 0.0 && d.y == 0.0) {
      ++coincident;
    } else {
      dirs.push_back(d);
    }
  }
  const std::size_t m = dirs.size();
  if (m == 0) return {coincident};
  std::sort(dirs.begin(), dirs.end(), angle_less);

  // Largest count in a half-open half turn = most points an open halfplane
  // through `point` can hold; its closed complement attains the depth.
  std::size_t best = 0;
  std::size_t end = 0;
  for (std::size_t i = 0; i < m; ++i) {
    end = std::max(end, i + 1);
    while (end < i + m && in_half_turn(dirs[i], dirs[end % m])) ++end;
    best = std::max(best, end - i);
  }
  return {coincident + (m - best)};
}

namespace {

// Clips a convex polygon by {p : u . p >= q - tol}.
std::vector<Vec2> clip(const std::vector<Vec2>& poly, Vec2 u, double q, double tol) {
  std::vector<Vec2> out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % m];
    const double sa = dot(u, a) - q;
    const double sb = dot(u, b) - q;
    const bool ina = sa >= -tol;
    const bool inb = sb >= -tol;
    if (ina) out.push_back(a);
    if (ina != inb) {
      const double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

}  // namespace

ReferenceRegion::ReferenceRegion(const Dataset& data, QuantileLevel level,
                                 std::size_t grid_directions) {
  const std::size_t n = data.size();
  if (n > kReferenceSizeLimit) {
    throw SizeLimitError("reference region supports at most " +
                         std::to_string(kReferenceSizeLimit) + " points");
  }
  std::vector<Vec2> normals;
  normals.reserve(grid_directions + n * (n - 1));
  for (std::size_t j = 0; j < grid_directions; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(grid_directions);
    normals.push_back({std::cos(t), std::sin(t)});
  }
  // Orderings of the projections change only at these angles.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 d = data.point(j) - data.point(i);
      const double len = norm(d);
      if (len == 0.0) continue;
      const Vec2 perp{-d.y / len, d.x / len};
      normals.push_back(perp);
      normals.push_back({-perp.x, -perp.y});
    }
  }

  const std::size_t k = level.rank(n) - 1;
  std::vector<double> proj(n);
  ux_.reserve(normals.size());
  uy_.reserve(normals.size());
  offsets_.reserve(normals.size());
  tolerances_.reserve(normals.size());
  double scale = 0.0;
  for (const Vec2& u : normals) {
    for (std::size_t i = 0; i < n; ++i) proj[i] = dot(u, data.point(i));
    std::nth_element(proj.begin(), proj.begin() + static_cast<std::ptrdiff_t>(k), proj.end());
    ux_.push_back(u.x);
    uy_.push_back(u.y);
    offsets_.push_back(proj[k]);
    tolerances_.push_back(1e-9 * std::max(1.0, std::abs(proj[k])));
    scale = std::max(scale, std::abs(proj[k]));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = data.point(i);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double pad = 1.0 + scale;
  polygon_ = {{xmin - pad, ymin - pad}, {xmax + pad, ymin - pad},
              {xmax + pad, ymax + pad}, {xmin - pad, ymax + pad}};
  const double clip_tol = 1e-12 * std::max(1.0, scale);
  for (std::size_t c = 0; c < offsets_.size() && !polygon_.empty(); ++c) {
    const Vec2 u{ux_[c], uy_[c]};
    bool cuts = false;
    for (const Vec2& v : polygon_) {
      if (dot(u, v) - offsets_[c] < -clip_tol) {
        cuts = true;
        break;
      }
    }
    if (!cuts) continue;
    polygon_ = clip(polygon_, u, offsets_[c], clip_tol);
    // Merging near-coincident vertices keeps the polygon small; otherwise
    // every tangent constraint leaves a sliver vertex behind.
    const double merge_tol = 1e-9 * std::max(1.0, scale);
    std::vector<Vec2> merged;
    for (const Vec2& v : polygon_) {
      if (merged.empty() || norm(v - merged.back()) > merge_tol) merged.push_back(v);
    }
    while (merged.size() > 1 && norm(merged.front() - merged.back()) <= merge_tol) merged.pop_back();
    polygon_ = std::move(merged);
  }
}

double ReferenceRegion::violation(Vec2 point) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < offsets_.size(); ++c) {
    worst = std::max(worst, offsets_[c] - (ux_[c] * point.x + uy_[c] * point.y));
  }
  return worst;
}

bool ReferenceRegion::contains(Vec2 point) const {
  for (std::size_t c = 0; c < offsets_.size(); ++c) {
    if (ux_[c] * point.x + uy_[c] * point.y - offsets_[c] < -tolerances_[c]) return false;
  }
  return true;
}

double ReferenceRegion::boundary_distance(Vec2 point) const {
  if (polygon_.empty()) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = polygon_.size();
  for (std::size_t i = 0; i < m; ++i) {
    best = std::min(best, segment_distance(point, polygon_[i], polygon_[(i + 1) % m]));
  }
  return best;
}

bool reference_region_membership(const Dataset& data, QuantileLevel level, Vec2 point) {
  return ReferenceRegion(data, level).contains(point);
}

}  // namespace depthq
