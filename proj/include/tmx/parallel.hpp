#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace tmx {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once and results must be written to index-addressed
/// storage by the caller, which keeps the outcome independent of the
/// thread count.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tmx
