#include "depthq/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "depthq/errors.hpp"
#include "depthq/random.hpp"

namespace depthq {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

Dataset parse_csv(std::istream& in) {
  std::vector<double> ys, zs, xs;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool seen_first = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text);
    std::vector<double> values;
    bool numeric = true;
    bool any_numeric = false;
    for (auto f : fields) {
      const auto v = parse_number(f);
      if (!v) {
        numeric = false;
        continue;
      }
      any_numeric = true;
      values.push_back(*v);
    }
    const bool first = !seen_first;
    seen_first = true;
    if (!numeric) {
      // A header has no numeric field; a partly numeric row is malformed.
      if (first && !any_numeric) {
        if (fields.size() != 2 && fields.size() != 3) {
          throw ParseError(line_no, "expected 2 or 3 columns in header");
        }
        columns = fields.size();
        continue;
      }
      throw ParseError(line_no, "non-numeric field");
    }
    if (values.size() != 2 && values.size() != 3) {
      throw ParseError(line_no, "expected 2 or 3 columns, found " + std::to_string(values.size()));
    }
    if (columns == 0) columns = values.size();
    if (values.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " columns, found " +
                                    std::to_string(values.size()));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
    }
    ys.push_back(values[0]);
    zs.push_back(values[1]);
    if (columns == 3) xs.push_back(values[2]);
  }
  if (ys.empty()) throw EmptyInput("input contains no data rows");
  std::optional<std::vector<double>> cov;
  if (columns == 3) cov = std::move(xs);
  return Dataset(std::move(ys), std::move(zs), std::move(cov));
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in);
}

std::string to_csv(const Dataset& data) {
  std::string out = data.has_covariate() ? "y,z,x\n" : "y,z\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += format_double(data.xs()[i]);
    out += ',';
    out += format_double(data.ys()[i]);
    if (data.has_covariate()) {
      out += ',';
      out += format_double(data.covariate()[i]);
    }
    out += '\n';
  }
  return out;
}

Dataset perturb(const Dataset& data, double scale, std::uint64_t seed) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("noise scale must be finite and >= 0");
  }
  if (scale == 0.0) return data;
  const auto xs = data.xs();
  const auto ys = data.ys();
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  const double s = scale * std::hypot(*xmax - *xmin, *ymax - *ymin);
  Rng rng(seed);
  std::vector<double> px(xs.begin(), xs.end()), py(ys.begin(), ys.end());
  for (std::size_t i = 0; i < data.size(); ++i) {
    px[i] += rng.uniform(-s, s);
    py[i] += rng.uniform(-s, s);
  }
  std::optional<std::vector<double>> cov;
  if (data.has_covariate()) cov.emplace(data.covariate().begin(), data.covariate().end());
  return Dataset(std::move(px), std::move(py), std::move(cov));
}

OutputFormat parse_format(const std::string& name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "svg") return OutputFormat::kSvg;
  if (name == "csv") return OutputFormat::kCsv;
  throw InvalidParameter("unknown output format '" + name + "' (json | svg | csv)");
}

nlohmann::json region_to_json(const ContourRegion& region, double tau, std::size_t K) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const Vec2& v : region.vertices()) vertices.push_back({v.x, v.y});
  return {{"tau", tau}, {"K", K}, {"empty", region.empty()}, {"vertices", vertices}};
}

ParsedRegion region_from_json(const nlohmann::json& doc) {
  ParsedRegion out;
  out.tau = doc.at("tau").get<double>();
  out.K = doc.at("K").get<std::size_t>();
  out.empty = doc.at("empty").get<bool>();
  for (const auto& v : doc.at("vertices")) out.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  return out;
}

std::string region_to_svg(const ContourRegion& region, const SvgOptions& options) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto extend = [&](Vec2 p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  if (options.data) {
    for (std::size_t i = 0; i < options.data->size(); ++i) extend(options.data->point(i));
  }
  for (const Vec2& v : region.vertices()) extend(v);
  if (!std::isfinite(xmin)) {
    xmin = ymin = -1.0;
    xmax = ymax = 1.0;
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (!(span > 0.0)) span = 1.0;
  const double pad = 0.05 * span;
  xmin -= pad;
  ymin -= pad;
  span += 2.0 * pad;
  const double scale = options.width / span;
  // SVG y grows downwards.
  auto sx = [&](double x) { return (x - xmin) * scale; };
  auto sy = [&](double y) { return options.width - (y - ymin) * scale; };
  const double stroke = 1.0;

  std::ostringstream svg;
  svg.precision(10);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width
      << "\" height=\"" << options.width << "\" viewBox=\"0 0 " << options.width << ' '
      << options.width << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const Vec2 centre{xmin + 0.5 * span, ymin + 0.5 * span};
  const double reach = 2.0 * span;
  if (!options.lines.empty()) {
    svg << "<g stroke=\"#9db4d0\" stroke-width=\"" << 0.5 * stroke << "\">\n";
    for (const Halfplane& h : options.lines) {
      const Vec2 u = h.normal.normal();
      const Vec2 t = h.normal.tangent();
      const Vec2 foot = centre + (h.offset - dot(u, centre)) * u;
      const Vec2 a = foot + reach * t;
      const Vec2 b = foot - reach * t;
      svg << "<line x1=\"" << sx(a.x) << "\" y1=\"" << sy(a.y) << "\" x2=\"" << sx(b.x)
          << "\" y2=\"" << sy(b.y) << "\"/>\n";
    }
    svg << "</g>\n";
  }
  if (options.data) {
    svg << "<g fill=\"#333333\">\n";
    for (std::size_t i = 0; i < options.data->size(); ++i) {
      const Vec2 p = options.data->point(i);
      svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"1.5\"/>\n";
    }
    svg << "</g>\n";
  }
  if (!region.empty()) {
    svg << "<polygon fill=\"#d0413e\" fill-opacity=\"0.25\" stroke=\"#d0413e\" stroke-width=\""
        << stroke << "\" points=\"";
    for (const Vec2& v : region.vertices()) svg << sx(v.x) << ',' << sy(v.y) << ' ';
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string region_to_csv(const ContourRegion& region) {
  std::string out = "vertex_index,vx,vy\n";
  const auto verts = region.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(verts[i].x) + ',' + format_double(verts[i].y) + '\n';
  }
  return out;
}

std::string chart_to_csv(const GrowthChart& chart) {
  std::string out = "x,tau,vertex_index,vx,vy\n";
  for (const ChartEntry& e : chart.entries) {
    const auto verts = e.region.vertices();
    for (std::size_t i = 0; i < verts.size(); ++i) {
      out += format_double(e.x) + ',' + format_double(e.level.value()) + ',' + std::to_string(i) +
             ',' + format_double(verts[i].x) + ',' + format_double(verts[i].y) + '\n';
    }
  }
  return out;
}

nlohmann::json chart_to_json(const GrowthChart& chart, std::size_t K) {
  nlohmann::json entries = nlohmann::json::array();
  for (const ChartEntry& e : chart.entries) {
    nlohmann::json j = region_to_json(e.region, e.level.value(), K);
    j["x"] = e.x;
    j["extrapolated"] = e.extrapolated;
    entries.push_back(std::move(j));
  }
  nlohmann::json crossings = nlohmann::json::array();
  for (const QuantileCrossing& c : chart.crossings) {
    crossings.push_back({{"direction", c.direction},
                         {"x", c.x},
                         {"lower_tau", c.lower_tau},
                         {"upper_tau", c.upper_tau},
                         {"lower_offset", c.lower_offset},
                         {"upper_offset", c.upper_offset}});
  }
  return {{"regions", entries}, {"crossings", crossings}};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace depthq
