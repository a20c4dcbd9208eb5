// Acceptance suite: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--allow-fail N]... [--only N]...
// The exit status is nonzero when a criterion fails that was not listed
// with --allow-fail; listed criteria still print their honest verdict.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "depthq/bench.hpp"
#include "depthq/conditional.hpp"
#include "depthq/contour.hpp"
#include "depthq/io.hpp"
#include "depthq/oracle.hpp"
#include "depthq/qreg.hpp"
#include "depthq/random.hpp"
#include "json.hpp"
#include "testkit/testkit.hpp"

namespace fs = std::filesystem;
using namespace depthq;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Vec2> shifted(std::span<const Vec2> v, Vec2 c, double s = 1.0) {
  std::vector<Vec2> out;
  for (Vec2 p : v) out.push_back(s * p + c);
  return out;
}

bool vertex_sets_match(std::span<const Vec2> a, std::span<const Vec2> b, double tol) {
  if (a.size() != b.size()) return false;
  for (Vec2 p : a) {
    double best = INFINITY;
    for (Vec2 q : b) best = std::min(best, norm(p - q));
    if (best > tol) return false;
  }
  return true;
}

bool inside(const ContourRegion& inner, const ContourRegion& outer, double tol) {
  for (Vec2 v : inner.vertices()) {
    if (distance_to_region(outer, v) > tol) return false;
  }
  return true;
}

// Extent of the region along u and its width along the perpendicular.
void extents(const ContourRegion& r, Vec2 u, double& lo, double& hi, double& width) {
  const Vec2 perp{-u.y, u.x};
  lo = INFINITY;
  hi = -INFINITY;
  double plo = INFINITY, phi = -INFINITY;
  for (Vec2 v : r.vertices()) {
    lo = std::min(lo, dot(u, v));
    hi = std::max(hi, dot(u, v));
    plo = std::min(plo, dot(perp, v));
    phi = std::max(phi, dot(perp, v));
  }
  width = phi - plo;
}

Verdict collinear_chop() {
  Verdict v;
  double worst_rel = 0.0, worst_width = 0.0, slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double angle = testkit::random_orientation(seed);
    const Dataset seg = testkit::gen_segment(101, angle);
    const auto t0 = std::chrono::steady_clock::now();
    const auto region = contour(seg, QuantileLevel(0.1), make_grid(201));
    slowest = std::max(slowest, seconds_since(t0));
    if (region.empty()) {
      v.require(false, "empty region at seed " + std::to_string(seed));
      continue;
    }
    double lo, hi, width;
    extents(region, {std::cos(angle), std::sin(angle)}, lo, hi, width);
    // Middle 80%: points 11..91 of 101 on [-0.5, 0.5] span [-0.4, 0.4].
    const double rel = std::max({std::abs(lo + 0.4), std::abs(hi - 0.4), std::abs(hi - lo - 0.8)}) / 0.8;
    worst_rel = std::max(worst_rel, rel);
    worst_width = std::max(worst_width, width);
  }
  v.require(worst_rel <= 0.02, "extent off by " + fmt(100 * worst_rel) + "%");
  v.require(worst_width <= 0.02, "width " + fmt(worst_width));
  v.require(slowest < 1.0, "runtime " + fmt(slowest) + " s");
  v.note("5 orientations, max extent error " + fmt(100 * worst_rel) + "%, max width " + fmt(worst_width) +
         ", max runtime " + fmt(slowest) + " s");
  return v;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(DEPTHQ_CLI) + " " + args + " >" + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict singular_design_cure() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "depthq_acceptance";
  fs::create_directories(dir);
  const Dataset vertical = testkit::gen_segment(101, kPi / 2);
  const fs::path raw = dir / "vertical.csv", noisy = dir / "vertical_noisy.csv", out = dir / "out.txt";
  write_text(raw, to_csv(vertical));

  const int fail_code = run_cli("dirqr " + raw.string() + " --tau 0.1", out);
  v.require(fail_code == 4, "dirqr on raw data exited " + std::to_string(fail_code));
  const int perturb_code = run_cli("perturb " + raw.string() + " --noise 0.01 --seed 7 --out " + noisy.string(), out);
  v.require(perturb_code == 0, "perturb exited " + std::to_string(perturb_code));
  const int dirqr_code = run_cli("dirqr " + noisy.string() + " --tau 0.1", out);
  v.require(dirqr_code == 0, "dirqr on perturbed data exited " + std::to_string(dirqr_code));
  const int contour_code = run_cli("contour " + noisy.string() + " --tau 0.1 --k 201", out);
  v.require(contour_code == 0, "contour on perturbed data exited " + std::to_string(contour_code));
  if (!v.pass) return v;

  std::ifstream in(out);
  const auto parsed = region_from_json(nlohmann::json::parse(in));
  const Dataset perturbed = read_csv(noisy);
  const auto grid = make_grid(201);
  const auto cured = contour(perturbed, QuantileLevel(0.1), grid);
  v.require(parsed.vertices.size() == cured.vertices().size() &&
                std::equal(parsed.vertices.begin(), parsed.vertices.end(), cured.vertices().begin()),
            "CLI region differs from library region");
  const auto reference = contour(vertical, QuantileLevel(0.1), grid);
  const double h = hausdorff(cured, reference);
  v.require(h <= 0.05, "Hausdorff " + fmt(h) + " > 0.05");
  v.note("exit codes 4/0/0/0, Hausdorff to unperturbed region " + fmt(h) + " (limit 0.05)");
  return v;
}

Verdict approximation_in_k() {
  Verdict v;
  const Dataset cloud = testkit::gen_gaussian(500, 2024);
  const double diam = testkit::diameter(cloud);
  const auto fine = contour(cloud, QuantileLevel(0.1), make_grid(3200));
  double prev = INFINITY;
  std::string series;
  for (std::size_t k : {50u, 100u, 200u, 400u, 800u, 1600u}) {
    const double h = hausdorff(contour(cloud, QuantileLevel(0.1), make_grid(k)), fine);
    v.require(h <= prev, "increase at K=" + std::to_string(k));
    prev = h;
    series += (series.empty() ? "" : " ") + fmt(h / diam);
  }
  v.require(prev < 0.01 * diam, "K=1600 distance " + fmt(prev / diam) + " diam");
  v.note("H/diam over K=50..1600: " + series);
  return v;
}

Verdict oracle_agreement() {
  Verdict v;
  std::size_t disagreements = 0, outside_band = 0, cells = 0;
  const std::size_t k = 4001;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset data = testkit::general_position(testkit::gen_gaussian(100, 500 + seed), seed);
    const double diam = testkit::diameter(data);
    for (double tau : {0.1, 0.25}) {
      const auto region = contour(data, QuantileLevel(tau), make_grid(k));
      const ReferenceRegion ref(data, QuantileLevel(tau));
      const auto grid = testkit::membership_grid_oracle(data, tau, 50);
      for (std::size_t i = 0; i < grid.centres.size(); ++i) {
        ++cells;
        if (contains(region, grid.centres[i]) == grid.inside[i]) continue;
        ++disagreements;
        if (ref.boundary_distance(grid.centres[i]) > 2.0 * diam / static_cast<double>(k)) ++outside_band;
      }
    }
  }
  v.require(outside_band == 0, std::to_string(outside_band) + " disagreements away from the boundary");
  v.note(std::to_string(cells) + " cells, " + std::to_string(disagreements) + " boundary-band disagreements, " +
         std::to_string(outside_band) + " interior");
  return v;
}

Verdict hull_limit() {
  Verdict v;
  const std::size_t k = 2001;
  const double bound_factor = 10.0 * (1.0 - std::cos(kPi / static_cast<double>(k)));
  double worst_ratio = 0.0, worst_linear = 0.0;
  bool superset = true;
  for (const auto& sc : testkit::scenarios(6, 400, 91)) {
    const Dataset data = testkit::make(sc);
    const double diam = testkit::diameter(data);
    const auto region = contour(data, QuantileLevel(1.0 / static_cast<double>(data.size())), make_grid(k));
    const auto hull = testkit::convex_hull(data.points());
    for (Vec2 h : hull) superset = superset && contains(region, h);
    double d = 0.0;
    for (Vec2 p : region.vertices()) d = std::max(d, testkit::polygon_distance(hull, p));
    worst_ratio = std::max(worst_ratio, d / (diam * bound_factor));
    worst_linear = std::max(worst_linear, d / (diam * std::tan(kPi / static_cast<double>(k))));
  }
  v.require(superset, "hull not contained");
  v.require(worst_ratio <= 1.0, "distance reaches " + fmt(worst_ratio) + "x the stated bound");
  v.note("max distance / (diam tan(pi/K)) = " + fmt(worst_linear));
  return v;
}

Verdict nesting_and_equivariance() {
  Verdict v;
  std::size_t checks = 0;
  Rng rng(606);
  for (const auto& sc : testkit::scenarios(20, 400, 6)) {
    const Dataset data = testkit::make(sc);
    const double diam = testkit::diameter(data);
    const std::size_t k = 90;
    const auto grid = make_grid(k);
    const auto lo = contour(data, QuantileLevel(0.05), grid);
    const auto hi = contour(data, QuantileLevel(0.2), grid);
    const auto refined = contour(data, QuantileLevel(0.2), make_grid(3 * k));
    const double tol = 1e-9 * diam;
    v.require(!lo.empty() && !hi.empty(), sc.name + " empty");
    v.require(inside(hi, lo, tol), sc.name + " tau nesting");
    v.require(inside(refined, hi, tol), sc.name + " refinement nesting");

    const Vec2 c{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double s = rng.uniform(0.2, 5.0);
    const auto moved = contour(data.translated(c), QuantileLevel(0.2), grid);
    const auto grown = contour(data.scaled(s), QuantileLevel(0.2), grid);
    const double scale = diam + norm(c);
    v.require(vertex_sets_match(moved.vertices(), shifted(hi.vertices(), c), 1e-9 * scale), sc.name + " translation");
    v.require(vertex_sets_match(grown.vertices(), shifted(hi.vertices(), {0, 0}, s), 1e-9 * s * diam),
              sc.name + " scale");
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform(0, k - 1));
    const double angle = kTwoPi * static_cast<double>(m) / static_cast<double>(k);
    const auto turned = contour(data.rotated(angle), QuantileLevel(0.2), grid);
    std::vector<Vec2> expect;
    for (Vec2 p : hi.vertices()) expect.push_back(rotate(p, angle));
    v.require(vertex_sets_match(turned.vertices(), expect, 1e-9 * diam), sc.name + " rotation");
    checks += 5;
  }
  v.note(std::to_string(checks) + " checks over 20 scenarios");
  return v;
}

Verdict scaling() {
  Verdict v;
  BenchOptions opt;
  const auto report = run_bench(opt);
  v.require(report.base.median < 10.0, "median " + fmt(report.base.median) + " s");
  v.require(report.n_ratio >= 1.5 && report.n_ratio <= 3.0, "n ratio " + fmt(report.n_ratio));
  v.require(report.k_ratio >= 1.5 && report.k_ratio <= 3.0, "K ratio " + fmt(report.k_ratio));
  v.note("n=1e6 K=1000 median " + fmt(report.base.median) + " s, n ratio " + fmt(report.n_ratio) + ", K ratio " +
         fmt(report.k_ratio));
  return v;
}

Verdict qr_oracle() {
  Verdict v;
  Rng rng(88);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform(0, 39));
    std::vector<Vec2> pairs(n);
    for (auto& p : pairs) {
      p.x = rng.uniform(-1, 1);
      p.y = 1.5 * p.x + rng.normal();
    }
    const double tau = rng.uniform(0.05, 0.95);
    const auto fit = qr_linear(pairs, QuantileLevel(tau));
    const auto oracle = testkit::checkloss_line_oracle(pairs, tau);
    // Interpolating fits (n = 2) have objectives at rounding level.
    double magnitude = 0.0;
    for (Vec2 p : pairs) magnitude += std::abs(p.y);
    const double rel = std::abs(fit.objective - oracle.objective) /
                       std::max(std::abs(oracle.objective), 1e-6 * magnitude);
    worst = std::max(worst, rel);
    std::size_t neg = 0, pos = 0;
    for (Vec2 p : pairs) {
      const double r = p.y - (fit.intercept + fit.slope * p.x);
      const double tol = 1e-9 * std::max(1.0, std::abs(p.y));
      neg += r < -tol;
      pos += r > tol;
    }
    v.require(static_cast<double>(neg) <= static_cast<double>(n) * tau, "balance (negative) at instance " + std::to_string(inst));
    v.require(static_cast<double>(pos) <= static_cast<double>(n) * (1 - tau), "balance (positive) at instance " + std::to_string(inst));
  }
  v.require(worst <= 1e-8, "objective mismatch " + fmt(worst));
  v.note("50 instances, max relative objective gap " + fmt(worst));
  return v;
}

Verdict tv_limits() {
  Verdict v;
  double worst_loss = 0.0, worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(700 + seed);
    std::vector<Vec2> pairs(40);
    for (auto& p : pairs) {
      p.x = rng.uniform(0, 10);
      p.y = std::sin(p.x) + 0.5 * rng.normal();
    }
    const double tau = 0.3;
    double scale = 0.0;
    for (Vec2 p : pairs) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});

    worst_loss = std::max(worst_loss, qr_tv(pairs, QuantileLevel(tau), 0.0).loss());
    const auto line = qr_linear(pairs, QuantileLevel(tau));
    const auto stiff = qr_tv(pairs, QuantileLevel(tau), 1e6 * scale);
    for (Vec2 p : pairs) worst_gap = std::max(worst_gap, std::abs(stiff(p.x) - (line.intercept + line.slope * p.x)));

    double prev_pen = INFINITY, prev_loss = -INFINITY;
    for (double lambda : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const auto fit = qr_tv(pairs, QuantileLevel(tau), lambda);
      v.require(fit.penalty() <= prev_pen + 1e-9, "penalty increased at seed " + std::to_string(seed));
      v.require(fit.loss() >= prev_loss - 1e-9, "loss decreased at seed " + std::to_string(seed));
      prev_pen = fit.penalty();
      prev_loss = fit.loss();
    }
  }
  v.require(worst_loss < 1e-10, "interpolation loss " + fmt(worst_loss));
  v.require(worst_gap <= 1e-6, "stiff fit differs from the line by " + fmt(worst_gap));
  v.note("max interpolation loss " + fmt(worst_loss) + ", max stiff gap " + fmt(worst_gap));
  return v;
}

Verdict conditional_reduction() {
  Verdict v;
  const auto grid = make_grid(64);
  const Dataset base = testkit::gen_gaussian(500, 31);
  const auto cond = conditional_contour(base.with_covariate(std::vector<double>(base.size(), 2.0)),
                                        {QuantileLevel(0.1), grid, 1.0, 2.0});
  const auto stat = contour(base, QuantileLevel(0.1), grid);
  bool equal = cond.region.vertices().size() == stat.vertices().size();
  for (std::size_t i = 0; equal && i < stat.vertices().size(); ++i) {
    equal = norm(cond.region.vertices()[i] - stat.vertices()[i]) <= 1e-9;
  }
  v.require(equal, "constant covariate region differs");

  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset data = testkit::gen_covariate_cloud(2000, 20, 900 + seed);
    const double diam = testkit::diameter(data);
    const auto reference = contour(data.without_covariate(), QuantileLevel(0.1), grid);
    const auto region = conditional_contour(data, {QuantileLevel(0.1), grid, 1e6 * diam, 0.5}).region;
    if (region.empty()) {
      v.require(false, "empty conditional region at seed " + std::to_string(seed));
      continue;
    }
    worst = std::max(worst, hausdorff(region, reference) / diam);
  }
  v.require(worst <= 0.05, "Hausdorff " + fmt(worst) + " diam");
  v.note("constant covariate exact, x-independent max H/diam " + fmt(worst));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> allowed, only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--allow-fail" || arg == "--only") && i + 1 < argc) {
      (arg == "--only" ? only : allowed).insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--allow-fail N]... [--only N]...\n");
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"collinear chop", collinear_chop},
      {"singular design and cure", singular_design_cure},
      {"approximation improves with K", approximation_in_k},
      {"oracle agreement", oracle_agreement},
      {"hull limit", hull_limit},
      {"nesting and equivariance", nesting_and_equivariance},
      {"scaling", scaling},
      {"QR oracle equivalence", qr_oracle},
      {"TV regression limits", tv_limits},
      {"conditional reduction", conditional_reduction},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const bool tolerated = !v.pass && allowed.count(id);
    std::printf("%s %2d %s (%.1f s): %s%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                seconds_since(t0), v.detail.c_str(), tolerated ? " [known failure]" : "");
    std::fflush(stdout);
    if (!v.pass && !tolerated) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
