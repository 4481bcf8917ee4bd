#include "kplab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace kplab {

int worker_count() {
  if (const char* env = std::getenv("KPLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void for_chunks(std::int64_t n, std::int64_t chunk_size,
                const std::function<void(std::size_t, std::int64_t,
                                         std::int64_t)>& body) {
  if (n <= 0) return;
  if (chunk_size < 1) chunk_size = 1;
  const std::size_t num_chunks =
      static_cast<std::size_t>((n + chunk_size - 1) / chunk_size);

  auto run_chunk = [&](std::size_t ci) {
    const std::int64_t begin = static_cast<std::int64_t>(ci) * chunk_size;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk_size, n);
    body(ci, begin, end);
  };

  const int workers = std::min<int>(worker_count(), static_cast<int>(num_chunks));
  if (workers <= 1) {
    for (std::size_t ci = 0; ci < num_chunks; ++ci) run_chunk(ci);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t ci = next.fetch_add(1); ci < num_chunks;
           ci = next.fetch_add(1)) {
        run_chunk(ci);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double sum_terms(std::int64_t n, const std::function<double(std::int64_t)>& term,
                 std::int64_t chunk_size) {
  if (n <= 0) return 0.0;
  if (chunk_size < 1) chunk_size = 1;
  const std::size_t num_chunks =
      static_cast<std::size_t>((n + chunk_size - 1) / chunk_size);
  std::vector<double> partial(num_chunks, 0.0);
  for_chunks(n, chunk_size,
             [&](std::size_t ci, std::int64_t begin, std::int64_t end) {
               Accumulator acc;
               for (std::int64_t i = begin; i < end; ++i) acc.add(term(i));
               partial[ci] = acc.total();
             });
  Accumulator acc;
  for (const double p : partial) acc.add(p);
  return acc.total();
}

}  // namespace kplab
