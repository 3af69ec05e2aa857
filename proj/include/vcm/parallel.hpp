#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace vcm {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Tasks must write
// only to their own index slots; iteration order is unspecified but results
// are positional, so aggregation stays deterministic.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace vcm
