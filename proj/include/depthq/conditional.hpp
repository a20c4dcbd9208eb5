#pragma once

// Covariate-indexed contours: per direction, the projected response is
// fitted by a TV-penalized quantile curve in the covariate and evaluated at
// the query value; the resulting halfplanes are intersected as in the static
// case.

#include <cstddef>
#include <span>
#include <vector>

#include "depthq/contour.hpp"
#include "depthq/projquant.hpp"

namespace depthq {

struct ConditionalContourRequest {
  QuantileLevel level;
  DirectionGrid grid;
  double lambda;
  double query_x;
};

struct ConditionalRegion {
  ContourRegion region;
  std::vector<Halfplane> halfplanes;  // one per grid direction
  // Covariate took a single value; the static contour was returned.
  bool degenerate_covariate = false;
  // query_x lies outside the covariate range (end-slope extrapolation).
  bool extrapolated = false;
};

// Throws MissingCovariate when the dataset has no covariate.
ConditionalRegion conditional_contour(const Dataset& data, const ConditionalContourRequest& req);

struct ChartEntry {
  double x;
  QuantileLevel level;
  ContourRegion region;
  bool extrapolated = false;
  bool degenerate_covariate = false;
};

// Fitted offsets that decrease as tau increases for one direction and x.
// Reported as found, never repaired.
struct QuantileCrossing {
  std::size_t direction;
  double x;
  double lower_tau;
  double upper_tau;
  double lower_offset;
  double upper_offset;
};

struct GrowthChart {
  // Ordered by x, then by level in the order given.
  std::vector<ChartEntry> entries;
  std::vector<QuantileCrossing> crossings;
};

// Each (direction, level) curve is fitted once and evaluated at every x.
GrowthChart growth_chart(const Dataset& data, std::span<const QuantileLevel> levels,
                         const DirectionGrid& grid, double lambda,
                         std::span<const double> x_grid);

}  // namespace depthq
