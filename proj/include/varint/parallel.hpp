#ifndef VARINT_PARALLEL_HPP
#define VARINT_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace varint {

/// Thread cap for residual assembly: min(hardware, VARINT_THREADS).
inline int assembly_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("VARINT_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

/// Chunked parallel loop over [begin, end). Each index is written by
/// exactly one worker, so results are independent of the thread count.
template <class F>
void parallel_for(int begin, int end, const F& body) {
  const int n = end - begin;
  const int threads = std::min(assembly_threads(), std::max(1, n / 1024));
  if (threads <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 1; t < threads; ++t) {
    int lo = begin + t * chunk;
    int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  int hi0 = std::min(end, begin + chunk);
  for (int i = begin; i < hi0; ++i) body(i);
  for (auto& th : pool) th.join();
}

}  // namespace varint

#endif
