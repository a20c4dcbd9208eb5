// depthq: approximate depth contours, regression quantiles and conditional
// growth charts from CSV input.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "depthq/bench.hpp"
#include "depthq/conditional.hpp"
#include "depthq/contour.hpp"
#include "depthq/errors.hpp"
#include "depthq/io.hpp"
#include "depthq/oracle.hpp"
#include "depthq/qreg.hpp"
#include "json.hpp"

namespace {

using namespace depthq;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitComputation = 4;

struct Options {
  std::string input;
  std::vector<double> taus{0.1};
  std::size_t k = 201;
  double lambda = 1.0;
  double x = 0.0;
  std::string x_grid;
  std::uint64_t seed = 1;
  double noise = 0.01;
  std::string format = "json";
  bool lines = false;
  std::string out;
  std::vector<double> point;
  double theta = kPi / 2;
  std::size_t n = 1000000;
  std::size_t bench_k = 1000;
  std::size_t reps = 3;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text(opt.out, text);
  }
}

double single_tau(const Options& opt) {
  if (opt.taus.size() != 1) throw InvalidParameter("this command takes exactly one --tau");
  return opt.taus.front();
}

std::vector<double> parse_x_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw InvalidParameter("--x-grid expects a:b:steps");
  double a = 0, b = 0;
  long steps = 0;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("b");
    steps = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("steps");
  } catch (const std::logic_error&) {
    throw InvalidParameter("--x-grid expects a:b:steps with numeric fields");
  }
  if (steps < 1 || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidParameter("--x-grid needs finite bounds and steps >= 1");
  }
  std::vector<double> xs;
  for (long i = 0; i < steps; ++i) {
    xs.push_back(steps == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return xs;
}

std::string render_region(const Options& opt, const ContourRegion& region, double tau,
                          const Dataset& data, std::span<const Halfplane> planes,
                          const nlohmann::json& extra = nlohmann::json::object()) {
  switch (parse_format(opt.format)) {
    case OutputFormat::kJson: {
      auto doc = region_to_json(region, tau, opt.k);
      for (const auto& [key, value] : extra.items()) doc[key] = value;
      return doc.dump(2);
    }
    case OutputFormat::kSvg: {
      SvgOptions svg;
      svg.data = &data;
      if (opt.lines) svg.lines = planes;
      return region_to_svg(region, svg);
    }
    case OutputFormat::kCsv:
      return region_to_csv(region);
  }
  return {};
}

int run_contour(const Options& opt) {
  const double tau = single_tau(opt);
  const QuantileLevel level(tau);
  const auto grid = make_grid(opt.k);
  const Dataset data = read_csv(opt.input);
  const auto planes = directional_halfplanes(data, level, grid);
  const auto region = intersect_halfplanes(planes);
  emit(opt, render_region(opt, region, tau, data, planes));
  return 0;
}

int run_depth(const Options& opt) {
  if (opt.point.size() != 2) throw InvalidParameter("--point expects x,y");
  const Dataset data = read_csv(opt.input);
  const Vec2 p{opt.point[0], opt.point[1]};
  const auto d = exact_depth(data, p);
  nlohmann::json doc{{"point", {p.x, p.y}}, {"n", data.size()}, {"depth", d.depth}};
  emit(opt, doc.dump(2));
  return 0;
}

nlohmann::json fit_json(const LineFit& fit) {
  return {{"intercept", fit.intercept}, {"slope", fit.slope}, {"objective", fit.objective}};
}

int run_qr(const Options& opt) {
  const QuantileLevel level(single_tau(opt));
  const Dataset data = read_csv(opt.input);
  // Second column regressed on the first.
  const auto fit = qr_linear(data.points(), level);
  auto doc = fit_json(fit);
  doc["tau"] = level.value();
  emit(opt, doc.dump(2));
  return 0;
}

int run_dirqr(const Options& opt) {
  const QuantileLevel level(single_tau(opt));
  const Dataset data = read_csv(opt.input);
  const auto fit = directional_regression_quantile(data, Direction(opt.theta), level);
  auto doc = fit_json(fit.rotated);
  doc["tau"] = level.value();
  doc["theta"] = fit.direction.angle();
  doc["line"] = {{"normal", {fit.line_normal.x, fit.line_normal.y}}, {"offset", fit.line_offset}};
  emit(opt, doc.dump(2));
  return 0;
}

int run_conditional(const Options& opt) {
  const double tau = single_tau(opt);
  const ConditionalContourRequest req{QuantileLevel(tau), make_grid(opt.k), opt.lambda, opt.x};
  const Dataset data = read_csv(opt.input);
  const auto result = conditional_contour(data, req);
  if (result.extrapolated) std::cerr << "warning: --x lies outside the covariate range\n";
  if (result.degenerate_covariate) std::cerr << "warning: covariate is constant; static contour returned\n";
  const nlohmann::json extra{{"x", opt.x},
                             {"extrapolated", result.extrapolated},
                             {"degenerate_covariate", result.degenerate_covariate}};
  emit(opt, render_region(opt, result.region, tau, data, result.halfplanes, extra));
  return 0;
}

int run_chart(const Options& opt) {
  if (opt.x_grid.empty()) throw InvalidParameter("chart requires --x-grid a:b:steps");
  const auto xs = parse_x_grid(opt.x_grid);
  std::vector<QuantileLevel> levels;
  for (double t : opt.taus) levels.emplace_back(t);
  const auto format = parse_format(opt.format);
  if (format == OutputFormat::kSvg) throw InvalidParameter("chart supports --format json or csv");
  const auto grid = make_grid(opt.k);
  const Dataset data = read_csv(opt.input);
  const auto chart = growth_chart(data, levels, grid, opt.lambda, xs);
  for (const auto& c : chart.crossings) {
    std::cerr << "warning: quantile crossing at x=" << c.x << " direction " << c.direction << " between tau "
              << c.lower_tau << " and " << c.upper_tau << '\n';
  }
  emit(opt, format == OutputFormat::kCsv ? chart_to_csv(chart) : chart_to_json(chart, opt.k).dump(2));
  return 0;
}

int run_perturb(const Options& opt) {
  const Dataset data = read_csv(opt.input);
  emit(opt, to_csv(perturb(data, opt.noise, opt.seed)));
  return 0;
}

int run_bench(const Options& opt) {
  BenchOptions b;
  b.n = opt.n;
  b.K = opt.bench_k;
  b.repetitions = opt.reps;
  b.seed = opt.seed;
  if (b.n < 1 || b.repetitions < 1) throw InvalidParameter("--n and --reps must be positive");
  make_grid(b.K);
  emit(opt, bench_to_json(run_bench(b)).dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate halfspace depth contours and quantile regression"};
  app.require_subcommand(1);
  Options opt;

  auto add_input = [&](CLI::App* cmd) { cmd->add_option("input", opt.input, "CSV with columns y,z[,x]")->required(); };
  auto add_tau = [&](CLI::App* cmd) { cmd->add_option("--tau", opt.taus, "quantile level in (0, 1]")->delimiter(','); };
  auto add_k = [&](CLI::App* cmd) { cmd->add_option("--k", opt.k, "number of directions (>= 3)"); };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", opt.out, "output path (default stdout)"); };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", opt.format, "json, svg or csv")->check(CLI::IsMember({"json", "svg", "csv"}));
  };

  auto* contour_cmd = app.add_subcommand("contour", "approximate depth contour");
  add_input(contour_cmd);
  add_tau(contour_cmd);
  add_k(contour_cmd);
  add_format(contour_cmd);
  contour_cmd->add_flag("--lines", opt.lines, "draw the directional quantile lines in SVG output");
  add_out(contour_cmd);

  auto* depth_cmd = app.add_subcommand("depth", "exact halfspace depth of a point");
  add_input(depth_cmd);
  depth_cmd->add_option("--point", opt.point, "query point x,y")->delimiter(',')->required();
  add_out(depth_cmd);

  auto* qr_cmd = app.add_subcommand("qr", "linear quantile regression of column 2 on column 1");
  add_input(qr_cmd);
  add_tau(qr_cmd);
  add_out(qr_cmd);

  auto* dirqr_cmd = app.add_subcommand("dirqr", "directional regression quantile");
  add_input(dirqr_cmd);
  add_tau(dirqr_cmd);
  dirqr_cmd->add_option("--theta", opt.theta, "direction angle in radians (default pi/2)");
  add_out(dirqr_cmd);

  auto* cond_cmd = app.add_subcommand("conditional", "contour conditional on the covariate");
  add_input(cond_cmd);
  add_tau(cond_cmd);
  add_k(cond_cmd);
  cond_cmd->add_option("--lambda", opt.lambda, "roughness penalty weight (>= 0)");
  cond_cmd->add_option("--x", opt.x, "covariate value")->required();
  add_format(cond_cmd);
  cond_cmd->add_flag("--lines", opt.lines, "draw the fitted quantile lines in SVG output");
  add_out(cond_cmd);

  auto* chart_cmd = app.add_subcommand("chart", "growth chart over a covariate grid");
  add_input(chart_cmd);
  add_tau(chart_cmd);
  add_k(chart_cmd);
  chart_cmd->add_option("--lambda", opt.lambda, "roughness penalty weight (>= 0)");
  chart_cmd->add_option("--x-grid", opt.x_grid, "covariate grid a:b:steps")->required();
  add_format(chart_cmd);
  add_out(chart_cmd);

  auto* perturb_cmd = app.add_subcommand("perturb", "add seeded uniform noise");
  add_input(perturb_cmd);
  perturb_cmd->add_option("--noise", opt.noise, "noise scale relative to the bounding-box diagonal");
  perturb_cmd->add_option("--seed", opt.seed, "random seed");
  add_out(perturb_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "time contour construction on Gaussian clouds");
  bench_cmd->add_option("--n", opt.n, "points per cloud");
  bench_cmd->add_option("--k", opt.bench_k, "number of directions");
  bench_cmd->add_option("--reps", opt.reps, "repetitions per configuration");
  bench_cmd->add_option("--seed", opt.seed, "random seed");
  add_out(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*contour_cmd) return run_contour(opt);
    if (*depth_cmd) return run_depth(opt);
    if (*qr_cmd) return run_qr(opt);
    if (*dirqr_cmd) return run_dirqr(opt);
    if (*cond_cmd) return run_conditional(opt);
    if (*chart_cmd) return run_chart(opt);
    if (*perturb_cmd) return run_perturb(opt);
    if (*bench_cmd) return run_bench(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kInvalidParameter:
        return kExitUsage;
      case ErrorKind::kData:
        return kExitData;
      case ErrorKind::kComputation:
        return kExitComputation;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
