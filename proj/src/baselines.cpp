#include "repglm/baselines.hpp"

#include "repglm/parallel.hpp"
#include "repglm/rng.hpp"

#include <iostream>
#include <numeric>
#include <vector>

namespace repglm {

FitResult full_fit(const Dataset& data, const GlmFamily& fam, const SolveOptions& opts) {
  return fisher_scoring_fit(data, fam, opts);
}

DcResult dc_fit(const Dataset& data, const GlmFamily& fam, int blocks, std::uint64_t seed,
                const SolveOptions& opts) {
  const Index n = data.n_rows();
  const Index p = data.n_cols();
  if (blocks < 1) throw config_error("divide-and-conquer requires blocks >= 1");
  if (blocks > n) throw config_error("divide-and-conquer requires blocks <= rows");
  if (blocks == 1) {
    // No split, no shuffle: identical to the full fit, bit for bit.
    DcResult out;
    out.fit = full_fit(data, fam, opts);
    out.blocks_used = 1;
    return out;
  }

  // Shuffled rows dealt round-robin: block sizes differ by at most one.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  SplitMix64 gen = rng::stream(seed, rng::tag("dc-shuffle"));
  rng::shuffle(order, gen);

  std::vector<std::vector<Index>> assign(static_cast<std::size_t>(blocks));
  for (Index i = 0; i < n; ++i)
    assign[static_cast<std::size_t>(i % blocks)].push_back(order[static_cast<std::size_t>(i)]);

  std::vector<FitResult> fits(static_cast<std::size_t>(blocks));
  std::vector<char> ok(static_cast<std::size_t>(blocks), 0);
  const int nt = parallel::max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int b = 0; b < blocks; ++b) {
    const auto& rows = assign[static_cast<std::size_t>(b)];
    Dataset part;
    part.X.resize(static_cast<Index>(rows.size()), p);
    part.y.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      part.X.row(static_cast<Index>(i)) = data.X.row(rows[i]);
      part.y(static_cast<Index>(i)) = data.y(rows[i]);
    }
    try {
      FitResult f = fisher_scoring_fit(part, fam, opts);
      if (f.converged) {
        fits[static_cast<std::size_t>(b)] = std::move(f);
        ok[static_cast<std::size_t>(b)] = 1;
      }
    } catch (const rank_error&) {
      // dropped below
    } catch (const domain_error&) {
      // dropped below
    }
  }

  DcResult out;
  Matrix info_sum = Matrix::Zero(p, p);
  Vector weighted = Vector::Zero(p);
  // Fixed ascending-block aggregation order keeps the sum reproducible.
  for (int b = 0; b < blocks; ++b) {
    if (!ok[static_cast<std::size_t>(b)]) {
      ++out.blocks_dropped;
      continue;
    }
    const FitResult& f = fits[static_cast<std::size_t>(b)];
    info_sum += f.fisher_information;
    weighted += f.fisher_information * f.beta;
    ++out.blocks_used;
  }
  if (out.blocks_used == 0)
    throw aggregation_error("every divide-and-conquer block failed to fit");
  if (out.blocks_dropped > 0)
    std::cerr << "warning: dropped " << out.blocks_dropped
              << " divide-and-conquer block(s) whose local fit failed\n";

  out.fit.beta = Eigen::LDLT<Eigen::MatrixXd>(info_sum).solve(weighted);
  out.fit.converged = true;
  out.fit.iterations = 0;
  for (int b = 0; b < blocks; ++b)
    if (ok[static_cast<std::size_t>(b)])
      out.fit.iterations = std::max(out.fit.iterations, fits[static_cast<std::size_t>(b)].iterations);
  out.fit.fisher_information = std::move(info_sum);
  out.fit.final_score_norm = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace repglm
