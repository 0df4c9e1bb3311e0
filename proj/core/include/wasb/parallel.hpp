#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wasb {

/// Worker count from an explicit request, else WASB_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested = 0);

/// out[i] = f(i) for i < count on up to `threads` workers. Results are
/// indexed, so any later reduction over `out` is schedule-independent. The
/// first exception thrown by a task is rethrown after all workers stop.
template <class F>
auto parallel_map(std::size_t count, int threads, F&& f) {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(count);
  const int workers =
      std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace wasb
