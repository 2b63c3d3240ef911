#pragma once

#include "repglm/types.hpp"

#include <utility>

namespace repglm::parallel {

// Number of threads the OpenMP kernels may use.  Defaults to the OpenMP
// runtime's limit (REPGLM_THREADS in the environment overrides it); 1 forces
// the serial reference path everywhere.
int max_threads();
void set_max_threads(int n);

// All reductions over rows run chunk by chunk with this fixed chunk size and
// combine the per-chunk partials in ascending chunk order.  The summation
// tree therefore depends only on the data, never on the thread count, which
// is what makes serial and parallel results bit-identical.
inline constexpr Index kChunkRows = 2048;

inline int num_chunks(Index n) {
  return n <= 0 ? 0 : static_cast<int>((n + kChunkRows - 1) / kChunkRows);
}

inline std::pair<Index, Index> chunk_range(Index n, int chunk) {
  Index lo = static_cast<Index>(chunk) * kChunkRows;
  Index hi = lo + kChunkRows < n ? lo + kChunkRows : n;
  return {lo, hi};
}

}  // namespace repglm::parallel
