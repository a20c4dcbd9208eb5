#include "depthq/parallel.hpp"

#include <atomic>

namespace depthq {

namespace {
std::atomic<std::size_t> g_threads{0};
}

void set_thread_count(std::size_t threads) noexcept { g_threads = threads; }

std::size_t thread_count() noexcept {
  const std::size_t t = g_threads.load();
  if (t > 0) return t;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace depthq
