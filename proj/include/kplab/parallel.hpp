#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace kplab {

// Worker count: KPLAB_THREADS if set, else hardware concurrency (min 1).
int worker_count();

// Neumaier-compensated accumulator.  Summation order is fixed by the
// caller, so results do not depend on scheduling.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double total() const { return sum + comp; }
};

// Runs body(chunk_index, begin, end) over [0,n) in fixed-size chunks.
// Chunk geometry depends only on (n, chunk_size), never on the worker
// count, so per-chunk outputs combined in chunk order are deterministic.
void for_chunks(std::int64_t n, std::int64_t chunk_size,
                const std::function<void(std::size_t, std::int64_t,
                                         std::int64_t)>& body);

// Deterministic parallel sum of term(i) for i in [0,n).
double sum_terms(std::int64_t n, const std::function<double(std::int64_t)>& term,
                 std::int64_t chunk_size = 1 << 14);

}  // namespace kplab
