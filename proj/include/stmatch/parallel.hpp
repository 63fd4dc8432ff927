#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stmatch {

// Runs fn(i) for i in [0, n) across `workers` threads. Work is handed out
// through a shared counter, so per-item cost may vary freely. The first
// exception thrown by any worker is rethrown here after all threads join.
template <typename Fn>
void parallel_for_each(std::size_t n, std::size_t workers, Fn &&fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  std::size_t count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w)
    pool.emplace_back(run);
  for (std::thread &t : pool)
    t.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace stmatch
