#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tug {

// Splits [0, n) into fixed-size chunks and runs fn(chunk_index, begin, end)
// on each. Chunk boundaries depend only on n and chunk_size, never on the
// worker count, so per-chunk partial results combined in chunk order give
// identical answers for any --threads value.
template <class Fn>
void for_chunks(std::size_t n, int threads, std::size_t chunk_size, Fn&& fn) {
  if (n == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t num_chunks = (n + chunk_size - 1) / chunk_size;
  const std::size_t workers =
      std::min<std::size_t>(std::max(threads, 1), num_chunks);

  if (workers <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) {
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(begin + chunk_size, n);
      fn(c, begin, end);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) return;
      const std::size_t begin = c * chunk_size;
      const std::size_t end = std::min(begin + chunk_size, n);
      fn(c, begin, end);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 0; t + 1 < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// Chunked reduction: map(chunk_index, begin, end) -> Partial per chunk,
// folded left-to-right in chunk index order.
template <class Partial, class Map, class Fold>
Partial reduce_chunks(std::size_t n, int threads, std::size_t chunk_size,
                      Partial init, Map&& map, Fold&& fold) {
  if (n == 0) return init;
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t num_chunks = (n + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(num_chunks, init);
  for_chunks(n, threads, chunk_size,
             [&](std::size_t c, std::size_t b, std::size_t e) {
               partials[c] = map(c, b, e);
             });
  Partial acc = init;
  for (const Partial& p : partials) acc = fold(acc, p);
  return acc;
}

}  // namespace tug
