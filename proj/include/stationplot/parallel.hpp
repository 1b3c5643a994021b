#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace stationplot {

// Runs body(0..count-1) over a worker pool. Index claiming is atomic, so
// callers that need deterministic output must write into index-addressed
// slots rather than appending. threads <= 0 selects hardware concurrency.
// The first exception thrown by any worker is rethrown after the join.
inline void parallel_for(long count, int threads,
                         const std::function<void(long)>& body) {
  int n_threads = threads <= 0 ? int(std::thread::hardware_concurrency()) : threads;
  n_threads = std::max(1, std::min<int>(n_threads, int(count)));
  if (n_threads == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(size_t(n_threads));
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[size_t(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace stationplot
