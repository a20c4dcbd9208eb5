#include "depthq/bench.hpp"

#include <algorithm>
#include <chrono>

#include "depthq/contour.hpp"
#include "depthq/errors.hpp"
#include "depthq/random.hpp"

namespace depthq {

Dataset gaussian_cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.normal();
    ys[i] = rng.normal();
  }
  return Dataset(std::move(xs), std::move(ys));
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

BenchTiming time_contour(std::size_t n, std::size_t K, const BenchOptions& opt) {
  const Dataset data = gaussian_cloud(n, opt.seed);
  const DirectionGrid grid(K);
  const QuantileLevel level(opt.tau);
  BenchTiming t{n, K, {}, 0.0};
  for (std::size_t r = 0; r < opt.repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    const ContourRegion region = contour(data, level, grid);
    const auto stop = std::chrono::steady_clock::now();
    if (region.empty()) throw ContractViolation("benchmark contour unexpectedly empty");
    t.seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  t.median = median(t.seconds);
  return t;
}

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
  if (options.n == 0 || options.K < 3 || options.repetitions == 0) {
    throw InvalidParameter("bench needs n >= 1, K >= 3 and at least one repetition");
  }
  BenchReport report;
  report.base = time_contour(options.n, options.K, options);
  if (options.doubling) {
    report.doubled_n = time_contour(2 * options.n, options.K, options);
    report.doubled_k = time_contour(options.n, 2 * options.K, options);
    report.n_ratio = report.doubled_n.median / report.base.median;
    report.k_ratio = report.doubled_k.median / report.base.median;
  }
  return report;
}

nlohmann::json bench_to_json(const BenchReport& report) {
  auto timing = [](const BenchTiming& t) {
    return nlohmann::json{{"n", t.n}, {"K", t.K}, {"seconds", t.seconds}, {"median", t.median}};
  };
  nlohmann::json doc{{"base", timing(report.base)}};
  if (!report.doubled_n.seconds.empty()) {
    doc["doubled_n"] = timing(report.doubled_n);
    doc["doubled_k"] = timing(report.doubled_k);
    doc["n_ratio"] = report.n_ratio;
    doc["k_ratio"] = report.k_ratio;
  }
  return doc;
}

}  // namespace depthq
