#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace reflecto {

/// Number of worker threads to use: hardware concurrency capped by the
/// REFLECTO_THREADS environment variable when set.
inline int thread_cap() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("REFLECTO_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < n) n = cap;
    } catch (...) {
      // unparsable value: ignore
    }
  }
  return n;
}

/// Applies fn(i) for i in [0, count) across `threads` workers in fixed
/// chunks. Results must be written to pre-sized storage indexed by i so the
/// outcome is identical to the sequential order.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (count + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace reflecto
