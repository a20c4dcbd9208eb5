#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace depthq {

// Number of worker threads used by the library; 0 means hardware concurrency.
void set_thread_count(std::size_t threads) noexcept;
std::size_t thread_count() noexcept;

// Splits [0, count) into contiguous chunks, one per worker, and calls
// body(begin, end) on each. Callers write results into pre-indexed slots, so
// output does not depend on the schedule.
template <class Body>
void parallel_chunks(std::size_t count, Body&& body) {
  const std::size_t workers = std::min(thread_count(), count);
  if (workers <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t step = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * step);
    const std::size_t end = std::min(count, begin + step);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, step));
  for (auto& t : pool) t.join();
}

}  // namespace depthq
