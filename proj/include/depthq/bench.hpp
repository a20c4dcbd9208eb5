#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "depthq/projquant.hpp"
#include "json.hpp"

namespace depthq {

// n points with independent standard normal coordinates.
Dataset gaussian_cloud(std::size_t n, std::uint64_t seed);

struct BenchOptions {
  std::size_t n = 1000000;
  std::size_t K = 1000;
  std::size_t repetitions = 3;
  std::uint64_t seed = 1;
  double tau = 0.1;
  // Also time (2n, K) and (n, 2K) to report scaling ratios.
  bool doubling = true;
};

struct BenchTiming {
  std::size_t n = 0;
  std::size_t K = 0;
  std::vector<double> seconds;
  double median = 0.0;
};

struct BenchReport {
  BenchTiming base;
  BenchTiming doubled_n;
  BenchTiming doubled_k;
  double n_ratio = 0.0;  // median(2n, K) / median(n, K)
  double k_ratio = 0.0;  // median(n, 2K) / median(n, K)
};

double median(std::vector<double> values);

// Times contour(n, tau, K) on seeded Gaussian clouds.
BenchReport run_bench(const BenchOptions& options);
nlohmann::json bench_to_json(const BenchReport& report);

}  // namespace depthq
