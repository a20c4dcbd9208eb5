#pragma once

// Projections of bivariate samples onto directions and the inf-version sample
// quantile of the projected values.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "depthq/geometry.hpp"

namespace depthq {

// Probability level tau in (0, 1].
class QuantileLevel {
 public:
  explicit QuantileLevel(double tau);

  double value() const noexcept { return tau_; }

  // 1-based rank of the inf-version quantile among n values: ceil(n * tau),
  // clamped to [1, n]. Products within a relative 1e-12 of an integer are
  // treated as that integer so that e.g. tau = 0.3, n = 10 selects rank 3.
  std::size_t rank(std::size_t n) const noexcept;

  friend bool operator==(QuantileLevel a, QuantileLevel b) = default;

 private:
  double tau_;
};

// Unit vector u = (cos theta, sin theta) with theta normalized to [0, 2 pi).
class Direction {
 public:
  explicit Direction(double theta);
  static Direction from_vector(Vec2 v);

  double angle() const noexcept { return theta_; }
  Vec2 normal() const noexcept { return normal_; }
  // Counterclockwise quarter turn of the normal.
  Vec2 tangent() const noexcept { return {-normal_.y, normal_.x}; }
  Direction opposite() const;

 private:
  double theta_;
  Vec2 normal_;
};

// n >= 1 finite points, optionally with one covariate value per point.
// Coordinates are kept as two parallel arrays for the projection kernels.
class Dataset {
 public:
  explicit Dataset(std::span<const Vec2> points,
                   std::optional<std::vector<double>> covariate = std::nullopt);
  Dataset(std::vector<double> xs, std::vector<double> ys,
          std::optional<std::vector<double>> covariate = std::nullopt);

  std::size_t size() const noexcept { return xs_.size(); }
  Vec2 point(std::size_t i) const { return {xs_[i], ys_[i]}; }
  std::vector<Vec2> points() const;
  std::span<const double> xs() const noexcept { return xs_; }
  std::span<const double> ys() const noexcept { return ys_; }

  bool has_covariate() const noexcept { return covariate_.has_value(); }
  // Throws MissingCovariate when absent.
  std::span<const double> covariate() const;

  Dataset translated(Vec2 offset) const;
  Dataset scaled(double factor) const;
  Dataset rotated(double angle) const;
  Dataset with_covariate(std::vector<double> covariate) const;
  Dataset without_covariate() const;

 private:
  void validate() const;

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::optional<std::vector<double>> covariate_;
};

struct ProjectedSample {
  std::vector<double> values;
};

// Region {p : normal . p >= offset}.
struct Halfplane {
  Direction normal;
  double offset;

  double slack(Vec2 p) const;
  bool contains(Vec2 p, double tol = 0.0) const { return slack(p) >= -tol; }
};

// Every projection in the library goes through this expression so that the
// fused selection path and project() agree bit for bit.
inline double project_point(Vec2 u, double x, double y) { return u.x * x + u.y * y; }

ProjectedSample project(const Dataset& data, const Direction& dir);

// inf{t : #{w_k <= t} / n >= tau}, i.e. the ceil(n tau)-th order statistic.
double inf_quantile(std::span<const double> values, QuantileLevel level);
inline double inf_quantile(const ProjectedSample& sample, QuantileLevel level) {
  return inf_quantile(std::span<const double>(sample.values), level);
}

// Reusable buffers for the fused project-and-select kernel. One instance per
// thread; not safe to share.
class QuantileSelector {
 public:
  // rank-th smallest (1-based) of {u . p_k}. Large inputs use a sampled
  // bracket with one counting pass; the result is always the exact order
  // statistic.
  double select(const Dataset& data, Vec2 u, std::size_t rank);

 private:
  double select_full(const Dataset& data, Vec2 u, std::size_t rank);

  std::vector<double> sample_;
  std::vector<double> candidates_;
};

Halfplane directional_quantile(const Dataset& data, const Direction& dir,
                               QuantileLevel level);
Halfplane directional_quantile(const Dataset& data, const Direction& dir,
                               QuantileLevel level, QuantileSelector& selector);

}  // namespace depthq
