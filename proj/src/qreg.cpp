#include "depthq/qreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "depthq/errors.hpp"
#include "depthq/lp.hpp"

namespace depthq {

double rho_tau(double r, QuantileLevel level) {
  const double tau = level.value();
  return r < 0.0 ? r * (tau - 1.0) : r * tau;
}

double CheckLoss::line_objective(std::span<const Vec2> pairs, double intercept,
                                 double slope) const {
  double total = 0.0;
  for (const Vec2& p : pairs) total += (*this)(p.y - (intercept + slope * p.x));
  return total;
}

LineFit qr_linear(std::span<const Vec2> pairs, QuantileLevel level) {
  const std::size_t n = pairs.size();
  if (n < 2) throw InsufficientData("linear quantile regression needs at least two points");
  double zmin = pairs[0].x, zmax = pairs[0].x, magnitude = 0.0, zsum = 0.0;
  for (const Vec2& p : pairs) {
    zmin = std::min(zmin, p.x);
    zmax = std::max(zmax, p.x);
    magnitude = std::max({magnitude, std::abs(p.x), std::abs(p.y)});
    zsum += p.x;
  }
  if (zmax - zmin <= 1e-12 * magnitude) throw SingularDesign();

  // Centering the abscissa is a row operation on the dual constraints; it
  // leaves the pivot sequence intact and improves conditioning.
  const double zbar = zsum / static_cast<double>(n);
  const double tau = level.value();
  LinearProgram lp(2);
  for (const Vec2& p : pairs) {
    lp.add_variable(-p.y, tau - 1.0, tau, {{0, 1.0}, {1, p.x - zbar}});
  }
  const LpSolution sol = lp_solve(lp);

  LineFit fit;
  fit.slope = -sol.duals[1];
  fit.intercept = -sol.duals[0] - fit.slope * zbar;
  fit.objective = CheckLoss{level}.line_objective(pairs, fit.intercept, fit.slope);
  return fit;
}

DirectionalFit directional_regression_quantile(const Dataset& data, const Direction& dir,
                                               QuantileLevel level) {
  const Vec2 u = dir.normal();
  const Vec2 v{u.y, -u.x};
  std::vector<Vec2> rotated(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vec2 p = data.point(i);
    rotated[i] = {dot(v, p), dot(u, p)};
  }
  const LineFit fit = qr_linear(rotated, level);
  // u.p = a + b v.p  <=>  (u - b v).p = a
  return DirectionalFit{dir, fit, u - fit.slope * v, fit.intercept};
}

PiecewiseLinearFit::PiecewiseLinearFit(std::vector<double> knots, std::vector<double> values,
                                       double lambda, double loss, double penalty)
    : knots_(std::move(knots)),
      values_(std::move(values)),
      lambda_(lambda),
      loss_(loss),
      penalty_(penalty) {
  if (knots_.size() < 2 || knots_.size() != values_.size()) {
    throw ContractViolation("piecewise-linear fit needs matching knots and values, at least two");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw ContractViolation("knots must be strictly increasing");
  }
}

double PiecewiseLinearFit::operator()(double x) const {
  const std::size_t m = knots_.size();
  std::size_t seg;
  if (x <= knots_.front()) {
    seg = 0;
  } else if (x >= knots_.back()) {
    seg = m - 2;
  } else {
    seg = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), x) -
                                   knots_.begin()) -
          1;
  }
  const double x0 = knots_[seg], x1 = knots_[seg + 1];
  if (x == x0) return values_[seg];
  if (x == x1) return values_[seg + 1];
  const double slope = (values_[seg + 1] - values_[seg]) / (x1 - x0);
  return values_[seg] + slope * (x - x0);
}

double slope_variation(std::span<const double> knots, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const double left = (values[i] - values[i - 1]) / (knots[i] - knots[i - 1]);
    const double right = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
    total += std::abs(right - left);
  }
  return total;
}

PiecewiseLinearFit qr_tv(std::span<const Vec2> pairs, QuantileLevel level, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("penalty weight lambda must be finite and >= 0");
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pairs[a].x < pairs[b].x; });

  std::vector<double> knots;
  std::vector<std::size_t> knot_of(pairs.size());
  for (std::size_t idx : order) {
    if (knots.empty() || pairs[idx].x != knots.back()) knots.push_back(pairs[idx].x);
    knot_of[idx] = knots.size() - 1;
  }
  const std::size_t m = knots.size();
  if (m < 2) throw InsufficientData("TV quantile regression needs at least two distinct x");

  // Dual LP with one row per knot value f_j: observation columns e_j with
  // bounds [tau - 1, tau], penalty columns D_i' with bounds [-lambda, lambda]
  // where D_i f is the slope change at interior knot i.
  const double tau = level.value();
  LinearProgram lp(m);
  for (std::size_t idx : order) {
    lp.add_variable(-pairs[idx].y, tau - 1.0, tau, {{knot_of[idx], 1.0}});
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double left = 1.0 / (knots[i] - knots[i - 1]);
    const double right = 1.0 / (knots[i + 1] - knots[i]);
    lp.add_variable(0.0, -lambda, lambda, {{i - 1, left}, {i, -left - right}, {i + 1, right}});
  }
  const LpSolution sol = lp_solve(lp);

  std::vector<double> values(m);
  for (std::size_t j = 0; j < m; ++j) values[j] = -sol.duals[j];
  double loss = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    loss += rho_tau(pairs[k].y - values[knot_of[k]], level);
  }
  const double penalty = slope_variation(knots, values);
  return PiecewiseLinearFit(std::move(knots), std::move(values), lambda, loss, penalty);
}

}  // namespace depthq
