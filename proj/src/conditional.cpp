#include "depthq/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "depthq/errors.hpp"
#include "depthq/parallel.hpp"
#include "depthq/qreg.hpp"

namespace depthq {

namespace {

bool single_covariate_value(std::span<const double> cov) {
  return std::all_of(cov.begin(), cov.end(), [&](double c) { return c == cov.front(); });
}

std::vector<Vec2> projected_pairs(const Dataset& data, std::span<const double> cov,
                                  const Direction& dir) {
  const Vec2 u = dir.normal();
  std::vector<Vec2> pairs(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    pairs[k] = {cov[k], project_point(u, data.xs()[k], data.ys()[k])};
  }
  return pairs;
}

// fits[j * levels + l] for direction j and level l.
std::vector<PiecewiseLinearFit> fit_all(const Dataset& data, std::span<const QuantileLevel> levels,
                                        const DirectionGrid& grid, double lambda) {
  const auto cov = data.covariate();
  const std::size_t L = levels.size();
  const std::size_t jobs = grid.size() * L;
  std::vector<std::optional<PiecewiseLinearFit>> slots(jobs);
  parallel_chunks(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const std::vector<Vec2> pairs = projected_pairs(data, cov, grid[j]);
      for (std::size_t l = 0; l < L; ++l) slots[j * L + l].emplace(qr_tv(pairs, levels[l], lambda));
    }
  });
  std::vector<PiecewiseLinearFit> fits;
  fits.reserve(jobs);
  for (auto& s : slots) fits.push_back(std::move(*s));
  return fits;
}

}  // namespace

ConditionalRegion conditional_contour(const Dataset& data, const ConditionalContourRequest& req) {
  if (!(req.lambda >= 0.0) || !std::isfinite(req.lambda)) {
    throw InvalidParameter("penalty weight lambda must be finite and >= 0");
  }
  if (!std::isfinite(req.query_x)) throw InvalidParameter("query covariate must be finite");
  const auto cov = data.covariate();
  ConditionalRegion out;
  if (single_covariate_value(cov)) {
    out.degenerate_covariate = true;
    out.halfplanes = directional_halfplanes(data, req.level, req.grid);
    out.region = intersect_halfplanes(out.halfplanes);
    return out;
  }
  const QuantileLevel levels[] = {req.level};
  const std::vector<PiecewiseLinearFit> fits = fit_all(data, levels, req.grid, req.lambda);
  out.halfplanes.reserve(req.grid.size());
  for (std::size_t j = 0; j < req.grid.size(); ++j) {
    out.halfplanes.push_back(Halfplane{req.grid[j], fits[j](req.query_x)});
  }
  out.extrapolated = fits.front().extrapolates(req.query_x);
  out.region = intersect_halfplanes(out.halfplanes);
  return out;
}

GrowthChart growth_chart(const Dataset& data, std::span<const QuantileLevel> levels,
                         const DirectionGrid& grid, double lambda,
                         std::span<const double> x_grid) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameter("penalty weight lambda must be finite and >= 0");
  }
  if (levels.empty()) throw InvalidParameter("growth chart needs at least one level");
  for (double x : x_grid) {
    if (!std::isfinite(x)) throw InvalidParameter("chart covariate values must be finite");
  }
  const auto cov = data.covariate();
  const std::size_t L = levels.size();
  const std::size_t K = grid.size();
  GrowthChart chart;

  if (single_covariate_value(cov)) {
    std::vector<ContourRegion> regions;
    for (const QuantileLevel& level : levels) regions.push_back(contour(data, level, grid));
    for (double x : x_grid) {
      for (std::size_t l = 0; l < L; ++l) {
        chart.entries.push_back({x, levels[l], regions[l], false, true});
      }
    }
    return chart;
  }

  const std::vector<PiecewiseLinearFit> fits = fit_all(data, levels, grid, lambda);
  std::vector<std::size_t> by_tau(L);
  for (std::size_t l = 0; l < L; ++l) by_tau[l] = l;
  std::stable_sort(by_tau.begin(), by_tau.end(), [&](std::size_t a, std::size_t b) {
    return levels[a].value() < levels[b].value();
  });

  for (double x : x_grid) {
    const bool extrapolated = fits.front().extrapolates(x);
    std::vector<double> offsets(K * L);
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t l = 0; l < L; ++l) offsets[j * L + l] = fits[j * L + l](x);
      for (std::size_t s = 1; s < L; ++s) {
        const std::size_t lo = by_tau[s - 1], hi = by_tau[s];
        if (levels[lo].value() < levels[hi].value() &&
            offsets[j * L + lo] > offsets[j * L + hi]) {
          chart.crossings.push_back({j, x, levels[lo].value(), levels[hi].value(),
                                     offsets[j * L + lo], offsets[j * L + hi]});
        }
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<Halfplane> planes;
      planes.reserve(K);
      for (std::size_t j = 0; j < K; ++j) planes.push_back(Halfplane{grid[j], offsets[j * L + l]});
      chart.entries.push_back({x, levels[l], intersect_halfplanes(planes), extrapolated, false});
    }
  }
  return chart;
}

}  // namespace depthq
