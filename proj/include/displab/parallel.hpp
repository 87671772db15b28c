#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace displab {

inline unsigned thread_count() {
  if (const char* env = std::getenv("DISPLAB_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs body(begin, end) over a partition of [0, n).  The partition depends
/// only on n and grain, never on the thread count, so chunk-indexed results
/// are reproducible on any machine.
template <class F>
void parallel_for_chunks(std::size_t n, std::size_t grain, F&& body) {
  if (n == 0) return;
  const std::size_t chunks = (n + grain - 1) / grain;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c)
      body(c, c * grain, std::min(n, (c + 1) * grain));
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers)
        body(c, c * grain, std::min(n, (c + 1) * grain));
    });
  }
  for (auto& t : pool) t.join();
}

/// Deterministic parallel sum: per-chunk partials combined in chunk order,
/// so the result is bit-identical for any thread count.
template <class T, class F>
T parallel_sum(std::size_t n, std::size_t grain, F&& term) {
  if (n == 0) return T{};
  const std::size_t chunks = (n + grain - 1) / grain;
  std::vector<T> partial(chunks, T{});
  parallel_for_chunks(n, grain, [&](std::size_t c, std::size_t b, std::size_t e) {
    T acc{};
    for (std::size_t i = b; i < e; ++i) acc += term(i);
    partial[c] = acc;
  });
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace displab
