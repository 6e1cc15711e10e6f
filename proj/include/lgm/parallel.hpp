#ifndef LGM_PARALLEL_HPP_
#define LGM_PARALLEL_HPP_

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lgm {

// Worker cap: LAMBDA_GM_THREADS if set (minimum 1), hardware concurrency
// otherwise.
inline int max_threads() {
  if (const char* env = std::getenv("LAMBDA_GM_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Splits [0, n) into contiguous chunks, maps each chunk on its own thread and
// combines the partial results in chunk order, so the reduction is
// deterministic regardless of the worker count.
template <class T, class Map, class Combine>
T parallel_map_reduce(std::int64_t n, T init, const Map& map_chunk, const Combine& combine) {
  int workers = max_threads();
  if (workers <= 1 || n < 4096) return combine(init, map_chunk(0, n));
  if (static_cast<std::int64_t>(workers) > n) workers = static_cast<int>(n);
  std::vector<T> partial(static_cast<std::size_t>(workers), init);
  std::vector<std::thread> threads;
  std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::int64_t lo = w * chunk;
    std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&partial, &map_chunk, w, lo, hi] { partial[static_cast<std::size_t>(w)] = map_chunk(lo, hi); });
  }
  for (auto& t : threads) t.join();
  T acc = init;
  for (const T& p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace lgm

#endif  // LGM_PARALLEL_HPP_
