#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace carnot {

/// Global worker count for parallel scans (CLI --threads). 0 = hardware.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n). Work is claimed by atomic counter; callers
/// must write results by index so output is independent of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int workers = thread_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int use = std::min<std::size_t>(workers, n);
  pool.reserve(use - 1);
  for (int t = 0; t < use - 1; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace carnot
