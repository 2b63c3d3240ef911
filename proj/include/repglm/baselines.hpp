#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/solver.hpp"
#include "repglm/types.hpp"

#include <cstdint>

namespace repglm {

// Maximum-likelihood fit on the complete data with unit weights.
FitResult full_fit(const Dataset& data, const GlmFamily& fam, const SolveOptions& opts = {});

struct DcResult {
  FitResult fit;
  int blocks_used = 0;
  // Blocks whose local fit failed (singular information or no convergence);
  // they are dropped from the aggregate with a warning.
  int blocks_dropped = 0;
};

// Divide-and-conquer baseline: shuffle rows with the given seed, split them
// into `blocks` near-equal parts (sizes differ by at most one), fit each
// part by maximum likelihood, and combine with information weighting:
//   beta = (sum_k I_k)^{-1} sum_k I_k beta_k.
// Aggregation runs in ascending block order.  blocks = 1 reproduces
// full_fit.  Throws aggregation_error when every block fails.
DcResult dc_fit(const Dataset& data, const GlmFamily& fam, int blocks, std::uint64_t seed,
                const SolveOptions& opts = {});

}  // namespace repglm
