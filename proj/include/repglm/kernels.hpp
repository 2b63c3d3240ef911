#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/parallel.hpp"
#include "repglm/types.hpp"

namespace repglm::kernels {

// Score vector, expected information and a finiteness flag accumulated over
// a weighted sample at a fixed coefficient vector:
//   score = sum_i w_i * nu(eta_i) * (y_i - G(eta_i)) * x_i
//   info  = sum_i w_i * nu(eta_i) * G'(eta_i)       * x_i x_i^T
struct ScoreInfo {
  Vector score;
  Matrix info;
  bool finite = true;
};

// Each kernel exists twice: a serial reference implementation and an OpenMP
// one.  Both walk the rows in fixed chunks (parallel::kChunkRows) and fold
// the per-chunk partials together in ascending chunk order, so for the same
// input they produce bit-identical results regardless of thread count.  The
// unqualified functions below dispatch on parallel::max_threads().

namespace serial {
void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta);
ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta);
// Accumulates X^T W X and X^T W y for weighted least squares.
void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy);
}  // namespace serial

namespace omp {
void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta);
ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta);
void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy);
}  // namespace omp

void linear_predictor(const Matrix& X, const Vector& beta, Vector& eta);
ScoreInfo score_info(const Matrix& X, const Vector& y, const Vector* w, const GlmFamily& fam,
                     const Vector& beta);
void normal_equations(const Matrix& X, const Vector& y, const Vector* w, Matrix& xtwx,
                      Vector& xtwy);

}  // namespace repglm::kernels
