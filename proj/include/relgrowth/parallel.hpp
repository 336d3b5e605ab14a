#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace relgrowth {

// Runs fn(i) for i in [0, n). Work is claimed in blocks through an atomic
// cursor; callers own any output slots, so results are position-stable and
// independent of scheduling.
template <class F>
void parallel_for(size_t n, int threads, F&& fn) {
  if (threads <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  const size_t block = std::max<size_t>(1, n / ((size_t)threads * 8));
  auto worker = [&] {
    for (;;) {
      size_t lo = next.fetch_add(block);
      if (lo >= n) return;
      size_t hi = std::min(n, lo + block);
      for (size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : (int)hc;
}

}  // namespace relgrowth
