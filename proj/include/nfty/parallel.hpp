#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace nfty {

// Runs fn(0..n-1) across worker threads. Callers write results into
// pre-sized slots indexed by i, so the merged output is independent of
// scheduling. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::int64_t n,
                         const std::function<void(std::int64_t)>& fn,
                         unsigned workers = 0) {
  if (n <= 0) return;
  if (workers == 0) workers = std::thread::hardware_concurrency();
  if (workers <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned count = workers < static_cast<unsigned>(n)
                       ? workers
                       : static_cast<unsigned>(n);
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace nfty
