#pragma once

// Minimal fork-join helper: indices [0, count) are handed out dynamically to
// a fixed set of workers. Results must be combined by the caller in an order
// that does not depend on which worker handled which index.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hop {

/// Environment variable consulted when no thread budget is given.
inline constexpr const char* kThreadsEnv = "HOPSPEC_THREADS";

/// 0 means: $HOPSPEC_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Calls fn(index, worker) for every index; worker < min(threads, count).
/// The exception thrown for the smallest index is rethrown after all workers
/// have stopped.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (count == 0) return;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1U), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, 0U);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto body = [&](unsigned worker) {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      try {
        fn(i, worker);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body, w);
  body(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hop
