#include "depthq/projquant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "depthq/errors.hpp"

namespace depthq {

QuantileLevel::QuantileLevel(double tau) : tau_(tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw InvalidParameter("quantile level must lie in (0, 1], got " +
                           std::to_string(tau));
  }
}

std::size_t QuantileLevel::rank(std::size_t n) const noexcept {
  if (n == 0) return 0;
  const double t = static_cast<double>(n) * tau_;
  const double nearest = std::round(t);
  double r = std::abs(t - nearest) <= 1e-12 * std::max(1.0, t) ? nearest : std::ceil(t);
  r = std::clamp(r, 1.0, static_cast<double>(n));
  return static_cast<std::size_t>(r);
}

namespace {

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidParameter("direction angle must be finite");
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace

Direction::Direction(double theta)
    : theta_(normalize_angle(theta)), normal_{std::cos(theta_), std::sin(theta_)} {}

Direction Direction::from_vector(Vec2 v) {
  const double len = norm(v);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw InvalidParameter("direction vector must be nonzero and finite");
  }
  Direction d(std::atan2(v.y, v.x));
  d.normal_ = {v.x / len, v.y / len};
  return d;
}

Direction Direction::opposite() const {
  Direction d(theta_ + kPi);
  d.normal_ = {-normal_.x, -normal_.y};
  return d;
}

Dataset::Dataset(std::span<const Vec2> points, std::optional<std::vector<double>> covariate)
    : covariate_(std::move(covariate)) {
  xs_.reserve(points.size());
  ys_.reserve(points.size());
  for (const Vec2& p : points) {
    xs_.push_back(p.x);
    ys_.push_back(p.y);
  }
  validate();
}

Dataset::Dataset(std::vector<double> xs, std::vector<double> ys,
                 std::optional<std::vector<double>> covariate)
    : xs_(std::move(xs)), ys_(std::move(ys)), covariate_(std::move(covariate)) {
  if (xs_.size() != ys_.size()) throw DataError("coordinate arrays differ in length");
  validate();
}

void Dataset::validate() const {
  if (xs_.empty()) throw EmptyInput("dataset must contain at least one point");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
      throw DataError("point " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  if (covariate_) {
    if (covariate_->size() != xs_.size()) {
      throw DataError("covariate length " + std::to_string(covariate_->size()) +
                      " does not match " + std::to_string(xs_.size()) + " points");
    }
    for (double c : *covariate_) {
      if (!std::isfinite(c)) throw DataError("covariate values must be finite");
    }
  }
}

std::vector<Vec2> Dataset::points() const {
  std::vector<Vec2> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = point(i);
  return out;
}

std::span<const double> Dataset::covariate() const {
  if (!covariate_) throw MissingCovariate();
  return *covariate_;
}

Dataset Dataset::translated(Vec2 offset) const {
  std::vector<double> xs(xs_), ys(ys_);
  for (auto& v : xs) v += offset.x;
  for (auto& v : ys) v += offset.y;
  return Dataset(std::move(xs), std::move(ys), covariate_);
}

Dataset Dataset::scaled(double factor) const {
  std::vector<double> xs(xs_), ys(ys_);
  for (auto& v : xs) v *= factor;
  for (auto& v : ys) v *= factor;
  return Dataset(std::move(xs), std::move(ys), covariate_);
}

Dataset Dataset::rotated(double angle) const {
  std::vector<double> xs(size()), ys(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const Vec2 r = rotate(point(i), angle);
    xs[i] = r.x;
    ys[i] = r.y;
  }
  return Dataset(std::move(xs), std::move(ys), covariate_);
}

Dataset Dataset::with_covariate(std::vector<double> covariate) const {
  return Dataset(xs_, ys_, std::move(covariate));
}

Dataset Dataset::without_covariate() const { return Dataset(xs_, ys_); }

double Halfplane::slack(Vec2 p) const {
  return project_point(normal.normal(), p.x, p.y) - offset;
}

ProjectedSample project(const Dataset& data, const Direction& dir) {
  const Vec2 u = dir.normal();
  const auto xs = data.xs();
  const auto ys = data.ys();
  ProjectedSample out;
  out.values.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.values[i] = project_point(u, xs[i], ys[i]);
  return out;
}

double inf_quantile(std::span<const double> values, QuantileLevel level) {
  if (values.empty()) throw EmptyInput("quantile of an empty sample");
  std::vector<double> work(values.begin(), values.end());
  const std::size_t k = level.rank(work.size()) - 1;
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k), work.end());
  return work[k];
}

namespace {

// Below this size a copy plus nth_element beats the bracketing machinery.
constexpr std::size_t kBracketThreshold = 32768;
constexpr std::size_t kSampleSize = 8192;

}  // namespace

double QuantileSelector::select_full(const Dataset& data, Vec2 u, std::size_t rank) {
  const auto xs = data.xs();
  const auto ys = data.ys();
  const std::size_t n = data.size();
  candidates_.resize(n);
  for (std::size_t i = 0; i < n; ++i) candidates_[i] = project_point(u, xs[i], ys[i]);
  const auto kth = candidates_.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(candidates_.begin(), kth, candidates_.end());
  return *kth;
}

double QuantileSelector::select(const Dataset& data, Vec2 u, std::size_t rank) {
  const std::size_t n = data.size();
  if (rank < 1 || rank > n) throw ContractViolation("order statistic rank out of range");
  if (n < kBracketThreshold) return select_full(data, u, rank);

  const auto xs = data.xs();
  const auto ys = data.ys();

  // Deterministic stride sample to bracket the target rank.
  sample_.resize(kSampleSize);
  for (std::size_t i = 0; i < kSampleSize; ++i) {
    const std::size_t idx = i * n / kSampleSize;
    sample_[i] = project_point(u, xs[idx], ys[idx]);
  }
  const double frac = (static_cast<double>(rank) - 0.5) / static_cast<double>(n);
  const double centre = frac * static_cast<double>(kSampleSize);
  const double spread =
      4.0 * std::sqrt(static_cast<double>(kSampleSize) * frac * (1.0 - frac)) + 2.0;
  const long lo_rank = std::lround(centre - spread);
  const long hi_rank = std::lround(centre + spread);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (lo_rank >= 0) {
    std::nth_element(sample_.begin(), sample_.begin() + lo_rank, sample_.end());
    lo = sample_[static_cast<std::size_t>(lo_rank)];
  }
  if (hi_rank < static_cast<long>(kSampleSize)) {
    std::nth_element(sample_.begin(), sample_.begin() + hi_rank, sample_.end());
    hi = sample_[static_cast<std::size_t>(hi_rank)];
  }

  // One pass: count values below the bracket and compact those inside it.
  // The store is unconditional so the loop carries no branch.
  candidates_.resize(n + 1);
  double* out = candidates_.data();
  std::size_t below = 0;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = project_point(u, xs[i], ys[i]);
    below += static_cast<std::size_t>(v < lo);
    out[inside] = v;
    inside += static_cast<std::size_t>((v >= lo) & (v <= hi));
  }
  const std::size_t k = rank - 1;
  if (k < below || k >= below + inside) return select_full(data, u, rank);
  const auto kth = candidates_.begin() + static_cast<std::ptrdiff_t>(k - below);
  std::nth_element(candidates_.begin(), kth,
                   candidates_.begin() + static_cast<std::ptrdiff_t>(inside));
  return *kth;
}

Halfplane directional_quantile(const Dataset& data, const Direction& dir,
                               QuantileLevel level, QuantileSelector& selector) {
  return Halfplane{dir, selector.select(data, dir.normal(), level.rank(data.size()))};
}

Halfplane directional_quantile(const Dataset& data, const Direction& dir,
                               QuantileLevel level) {
  QuantileSelector selector;
  return directional_quantile(data, dir, level, selector);
}

}  // namespace depthq
