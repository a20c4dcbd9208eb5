#pragma once

// Data ingestion, seeded perturbation, and region/chart emission.
//
// CSV input has two or three numeric columns (y, z [, x]): the point is
// (y, z) and x is the optional covariate. A single non-numeric first row is
// taken as a header.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "depthq/conditional.hpp"
#include "depthq/contour.hpp"
#include "depthq/projquant.hpp"
#include "json.hpp"

namespace depthq {

Dataset parse_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);
// Full round-trip precision; header "y,z" or "y,z,x".
std::string to_csv(const Dataset& data);

// Adds independent uniform noise on [-s, s] to both coordinates of every
// point, s = scale * (bounding-box diagonal). Covariate values are kept.
// Throws InvalidParameter for negative or non-finite scale.
Dataset perturb(const Dataset& data, double scale, std::uint64_t seed);

enum class OutputFormat { kJson, kSvg, kCsv };
OutputFormat parse_format(const std::string& name);

// {"tau": .., "K": .., "empty": .., "vertices": [[x, y], ...]}
nlohmann::json region_to_json(const ContourRegion& region, double tau, std::size_t K);

struct ParsedRegion {
  double tau = 0.0;
  std::size_t K = 0;
  bool empty = true;
  std::vector<Vec2> vertices;
};
ParsedRegion region_from_json(const nlohmann::json& doc);

struct SvgOptions {
  const Dataset* data = nullptr;
  // Boundary lines drawn when nonempty (one <line> per halfplane).
  std::span<const Halfplane> lines;
  double width = 600.0;
};
std::string region_to_svg(const ContourRegion& region, const SvgOptions& options);

// Rows "x,tau,vertex_index,vx,vy"; empty regions contribute no rows.
std::string chart_to_csv(const GrowthChart& chart);
nlohmann::json chart_to_json(const GrowthChart& chart, std::size_t K);
// Vertex rows "vertex_index,vx,vy" for a single region.
std::string region_to_csv(const ContourRegion& region);

// Throws IoError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace depthq
