#pragma once

#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

namespace gl3 {

// Default worker count: GL3KUZ_THREADS environment variable, else 1
// (sequential, deterministic summation order).
inline int default_thread_count() {
  if (const char* s = std::getenv("GL3KUZ_THREADS")) {
    int n = std::atoi(s);
    if (n >= 1) return n;
  }
  return 1;
}

// Splits [0, n) into contiguous chunks, one worker per chunk; results are
// merged in chunk order, so threads == 1 reproduces the sequential sum
// bit for bit.
template <class Result, class ChunkFn, class MergeFn>
Result parallel_chunk_reduce(long long n, int threads, ChunkFn chunk,
                             MergeFn merge) {
  if (threads <= 1 || n < 2) return chunk(0, n);
  int k = int(std::min<long long>(threads, n));
  std::vector<std::optional<Result>> partial(static_cast<size_t>(k));
  std::vector<std::thread> pool;
  for (int i = 0; i < k; ++i) {
    long long lo = n * i / k, hi = n * (i + 1) / k;
    pool.emplace_back([&, i, lo, hi] { partial[size_t(i)].emplace(chunk(lo, hi)); });
  }
  for (auto& t : pool) t.join();
  Result acc = std::move(*partial[0]);
  for (int i = 1; i < k; ++i) merge(acc, *partial[size_t(i)]);
  return acc;
}

}  // namespace gl3
