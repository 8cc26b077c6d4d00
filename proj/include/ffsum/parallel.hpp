#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "ffsum/common.hpp"

namespace ffsum {

// Deterministic parallel map: fn(i) fills slot i of the result, so the
// output is a pure function of the index space no matter how tasks are
// scheduled or how many workers run. Reductions happen on the caller's
// side, in index order.
template <class T, class Fn>
std::vector<T> parallel_map(u64 count, int workers, Fn&& fn) {
  std::vector<T> out(count);
  if (count == 0) return out;
  if (workers <= 1) {
    for (u64 i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<u64> next{0};
  auto run = [&]() {
    while (true) {
      u64 i = next.fetch_add(1);
      if (i >= count) break;
      out[i] = fn(i);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min<u64>(u64(workers), count);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  return out;
}

inline int default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace ffsum
