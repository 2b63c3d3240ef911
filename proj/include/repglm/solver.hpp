#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/types.hpp"

#include <limits>

namespace repglm {

struct FitResult {
  Vector beta;
  int iterations = 0;
  bool converged = false;
  // Max-norm of the score at the returned beta.
  double final_score_norm = std::numeric_limits<double>::quiet_NaN();
  // Expected information sum_i w_i nu_i G'_i x_i x_i^T at the returned beta.
  Matrix fisher_information;
  // Condition estimate of the last information matrix exceeded 1e12.
  bool ill_conditioned = false;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 25;
  // Starting point; zero vector when empty.
  Vector init;
};

// Score sum_i w_i nu(eta_i) (y_i - G(eta_i)) x_i at beta.
Vector score(const WeightedData& data, const GlmFamily& fam, const Vector& beta);
Vector score(const Dataset& data, const GlmFamily& fam, const Vector& beta);

// Unit-dispersion log-likelihood (dropping beta-free terms); its gradient is
// the score above.
double log_likelihood(const WeightedData& data, const GlmFamily& fam, const Vector& beta);

// Fisher scoring (iteratively reweighted least squares).  Fractional
// responses are accepted for bernoulli families: weights are frequency
// weights and y may be any per-point mean.  Convergence requires both the
// last step and the final score to be small:
//   ||delta||_inf <= tol   and   ||score||_inf <= tol * (1 + ||beta||_inf).
// Non-convergence within max_iter returns converged = false (no throw); a
// singular weighted information matrix throws rank_error.  The identity link
// reduces to a single weighted least-squares solve.
FitResult fisher_scoring_fit(const WeightedData& data, const GlmFamily& fam,
                             const SolveOptions& opts = {});
FitResult fisher_scoring_fit(const Dataset& data, const GlmFamily& fam,
                             const SolveOptions& opts = {});

// Weighted least squares: solves the identity-link normal equations
// (X^T W X) beta = X^T W y via an SPD factorization with a condition guard.
FitResult wls_fit(const WeightedData& data);

}  // namespace repglm
