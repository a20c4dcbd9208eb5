#pragma once

// Check-loss regression: linear quantile regression, the directional
// regression quantile in a rotated frame, and total-variation penalized
// piecewise-linear quantile curves in one covariate.

#include <cstddef>
#include <span>
#include <vector>

#include "depthq/geometry.hpp"
#include "depthq/projquant.hpp"

namespace depthq {

// rho_tau(r) = r (tau - 1{r < 0}).
double rho_tau(double r, QuantileLevel level);

struct CheckLoss {
  QuantileLevel level;
  double operator()(double r) const { return rho_tau(r, level); }
  // Sum over residuals y_k - (a + b z_k).
  double line_objective(std::span<const Vec2> pairs, double intercept, double slope) const;
};

// y ~ intercept + slope * z for pairs (z, y) stored as Vec2{z, y}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double objective = 0.0;
};

// Linear quantile regression solved through its dual LP
//   max y'd  s.t.  X'd = 0,  tau - 1 <= d <= tau.
// Throws InsufficientData for n < 2 and SingularDesign when all z coincide.
LineFit qr_linear(std::span<const Vec2> pairs, QuantileLevel level);

struct DirectionalFit {
  Direction direction;
  // Fit of the ordinate u.p on the abscissa v.p with v = (u_y, -u_x).
  LineFit rotated;
  // The same line in the original frame: {p : line_normal . p = line_offset}.
  Vec2 line_normal;
  double line_offset;
};

DirectionalFit directional_regression_quantile(const Dataset& data, const Direction& dir,
                                               QuantileLevel level);

// Continuous piecewise-linear curve with knots at the distinct covariate
// values; beyond the knot range the end slopes continue.
class PiecewiseLinearFit {
 public:
  PiecewiseLinearFit(std::vector<double> knots, std::vector<double> values, double lambda,
                     double loss, double penalty);

  std::span<const double> knots() const noexcept { return knots_; }
  std::span<const double> values() const noexcept { return values_; }
  double lambda() const noexcept { return lambda_; }
  double loss() const noexcept { return loss_; }
  // Sum of absolute slope changes at interior knots.
  double penalty() const noexcept { return penalty_; }
  double objective() const noexcept { return loss_ + lambda_ * penalty_; }

  double operator()(double x) const;
  bool extrapolates(double x) const noexcept {
    return x < knots_.front() || x > knots_.back();
  }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  double lambda_;
  double loss_;
  double penalty_;
};

// Sum of absolute slope changes of the interpolant through (knots, values).
double slope_variation(std::span<const double> knots, std::span<const double> values);

// Minimizes sum rho_tau(w_k - f(x_k)) + lambda * TV(f') over continuous
// piecewise-linear f with knots at the distinct x. Pairs are Vec2{x, w};
// observations sharing an x share one knot. Throws InvalidParameter for
// lambda < 0 and InsufficientData for fewer than two distinct x.
PiecewiseLinearFit qr_tv(std::span<const Vec2> pairs, QuantileLevel level, double lambda);

}  // namespace depthq
