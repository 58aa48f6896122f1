#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace stalloc {

// Run fn(0..n-1) on `threads` workers pulling indices from a shared counter.
// Callers store results into per-index slots, so the outcome is independent
// of scheduling; with threads <= 1 this is a plain loop.
inline void runReplicas(long n, int threads, const std::function<void(long)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nt = threads;
  if (static_cast<long>(nt) > n) nt = static_cast<int>(n);
  pool.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace stalloc
