#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/partition.hpp"
#include "repglm/solver.hpp"
#include "repglm/types.hpp"

#include <string>
#include <vector>

namespace repglm {

enum class RepMethod { mean, median, midpoint, smr };

// Which per-point fallback fired during score-matching construction.
enum class RepFallback : unsigned char {
  none = 0,
  y_mean = 1,        // weighted response denominator vanished -> block mean y
  x_mean = 2,        // predictor denominator vanished -> block mean x
  y_and_x_mean = 3,  // both
};

const char* to_string(RepFallback f);

// One weighted pseudo-observation per (sub-)block.  `data` holds the
// representative predictors, responses and weights (= sub-block sizes) in a
// shape the solver consumes directly; the remaining vectors carry per-point
// provenance.
struct RepresentativeSet {
  WeightedData data;
  std::vector<int> source_block;        // index into the originating partition
  std::vector<std::vector<Index>> rows; // data rows each point stands for
  std::vector<RepFallback> fallback;
  std::vector<double> eta_tilde;        // matched linear predictor (NaN for center methods)
  RepMethod method = RepMethod::mean;
  int iteration = 0;        // 0 for center methods, t >= 1 for score-matching passes
  Vector build_beta;        // coefficients the construction was evaluated at (empty otherwise)
  int bracket_failures = 0; // eta solves that fell back to the block mean eta

  Index size() const { return data.n_rows(); }
  int fallback_count() const;
};

// Center-style representatives: block mean, per-coordinate median (mean of
// the two central order statistics for even block sizes), and equal-depth
// cell midpoints.  Midpoints require the partition to carry its grid
// metadata: grid columns use the cell center (outer cells clipped at the
// observed column min/max) and non-grid columns fall back to the block mean,
// so an intercept column stays exactly 1.
RepresentativeSet mean_representatives(const Dataset& data, const PartitionSpec& part);
RepresentativeSet median_representatives(const Dataset& data, const PartitionSpec& part);
RepresentativeSet midpoint_representatives(const Dataset& data, const PartitionSpec& part);

// --- score-matching primitives (exposed for testing) -----------------------

// Split a block's rows by the sign of eta when both signs are present beyond
// the zero threshold; the non-negative side comes first.  Row order within a
// side is preserved.
std::vector<std::vector<Index>> split_block_by_sign(const std::vector<Index>& rows,
                                                    const Vector& eta_all,
                                                    double zero_tol = 1e-12);

// Weighted representative response of one same-sign sub-block:
//   ytilde = sum_i nu_i eta_i y_i / sum_i nu_i eta_i,
// falling back to the plain mean response when the denominator is
// negligible relative to sum_i |nu_i eta_i|.
struct SmrResponse {
  double ytilde = 0;
  bool fallback = false;
};
SmrResponse smr_response(const GlmFamily& fam, const std::vector<Index>& rows,
                         const Vector& eta_all, const Vector& y_all);

// Solve S(eta) = target on [min eta_i, max eta_i] where
// S(eta) = nu(eta) * (ytilde - G(eta)) * eta.  A 64-interval scan brackets
// sign changes, each refined by bisection until the bracket can no longer be
// split in floating point (the score-matching identity needs the residual at
// machine level); among the in-interval roots the one nearest eta_bar wins,
// ties to the smaller root.
// The identity link uses the closed-form quadratic instead.  If no root is
// bracketed (numerically possible only through fallback responses), eta_bar
// is returned with bracket_failed set.
struct EtaSolve {
  double eta_tilde = 0;
  bool bracket_failed = false;
};
EtaSolve solve_eta(const GlmFamily& fam, const std::vector<Index>& rows, const Vector& eta_all,
                   double ytilde, double target, double eta_bar);

// Representative predictor of one sub-block:
//   xtilde = sum_i nu_i (y_i - G(eta_i)) x_i / (n_k nu(eta_tilde)(ytilde - G(eta_tilde))),
// falling back to the mean predictor row when the denominator is negligible.
struct SmrPredictor {
  Vector x;
  bool fallback = false;
};
SmrPredictor smr_predictor(const GlmFamily& fam, const std::vector<Index>& rows,
                           const Matrix& X, const Vector& eta_all, const Vector& y_all,
                           double ytilde, double eta_tilde);

// One full score-matching construction pass at fixed coefficients: splits
// every block by sign, emits singleton rows unchanged, otherwise builds
// (ytilde, eta_tilde, xtilde) per sub-block.  Blocks are processed
// independently (parallel) and emitted in block order, sub-blocks
// non-negative side first.
RepresentativeSet smr_representatives(const Dataset& data, const PartitionSpec& part,
                                      const GlmFamily& fam, const Vector& beta);

// --- the full algorithm ----------------------------------------------------

struct SmrOptions {
  int iterations = 3;  // score-matching passes after the initial center fit
  SolveOptions solve;
  Vector init;              // skip the mean-representative stage, start here
  bool keep_history = true; // retain every representative set built
};

struct SmrResult {
  FitResult fit;                          // final coefficients
  std::vector<RepresentativeSet> history; // iteration 0 (mean) then passes 1..T
  std::vector<FitResult> stage_fits;      // fit after each stage
  int total_fallbacks = 0;                // summed over history
};

// Iterated score-matching fit: fit on block means, then repeat
// (build score-matching representatives at the current coefficients, refit
// warm-started) `iterations` times.  iterations = 0 is the plain
// mean-representative fit.
SmrResult smr_fit(const Dataset& data, const PartitionSpec& part, const GlmFamily& fam,
                  const SmrOptions& opts = {});

// Representative export: header `block,weight,ytilde,x1,...,xp,fallback`,
// fallback spelled none / y-mean / x-mean / y-mean|x-mean.
void write_representatives(const std::string& path, const RepresentativeSet& reps);

}  // namespace repglm
