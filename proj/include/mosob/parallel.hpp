#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace mosob {

inline std::atomic<int>& thread_count_slot() {
  static std::atomic<int> n{1};
  return n;
}
inline void set_thread_count(int n) { thread_count_slot() = std::max(1, n); }
inline int thread_count() { return thread_count_slot(); }

// f(i) for i in [0, n); every index writes only its own output slot, so the
// result does not depend on the thread count
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < t; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace mosob
