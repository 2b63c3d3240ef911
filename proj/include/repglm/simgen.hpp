#pragma once

#include "repglm/data.hpp"
#include "repglm/partition.hpp"
#include "repglm/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace repglm {

// Covariate designs, all with d columns (default 7):
//   mzNormal  N(0, Sigma), Sigma unit diagonal, off-diagonal 0.5
//   nzNormal  N(1.5 * 1, Sigma)
//   ueNormal  N(0, Sigma_u), Sigma_u diagonal {1^2, ..., d^2}, off-diagonal 0.5
//   mixNormal 0.5 N(1, Sigma) + 0.5 N(-1, Sigma), component tossed per row
//   T3        multivariate t with 3 degrees of freedom and scale Sigma, / 10
//   EXP       iid exponential, rate 2
//   BETA      iid Beta(1/2, 1/2)
enum class CovDesign { mzNormal, nzNormal, ueNormal, mixNormal, T3, EXP, BETA };

// Response models.  logit_interactions uses d = 3 covariates expanded to the
// 8 predictors (1, x1, x2, x3, x1x2, x1x3, x2x3, x1x2x3).
enum class ModelKind { linear, logit, cloglog, poisson, logit_interactions };

CovDesign cov_design_from_name(std::string_view name);
ModelKind model_from_name(std::string_view name);
const char* to_string(CovDesign d);
const char* to_string(ModelKind m);

struct SimConfig {
  CovDesign dist = CovDesign::mzNormal;
  ModelKind model = ModelKind::logit;
  Index n = 0;
  int d = 7;          // forced to 3 for logit_interactions
  Vector beta;        // true coefficients incl. intercept; default 0, 0.5, ..., 0.5
  double sigma = 1.0; // linear-model noise sd
  std::uint64_t seed = 0;
};

// Number of predictor columns (incl. intercept) the model implies.
int predictor_count(const SimConfig& cfg);
// Default true coefficients: intercept 0, every slope 0.5.
Vector default_beta(const SimConfig& cfg);

// Raw covariates, one independent counter-based stream per row: the same
// seed reproduces the same matrix bit for bit on any thread count, and rows
// are generated in parallel.
Matrix gen_covariates(const SimConfig& cfg);

// (1, x1, x2, x3) -> all products up to order three; input must have 3
// columns.
Matrix interaction_expand(const Matrix& covariates);

// Draw responses at the given predictor matrix (intercept included).
// Throws generation_error when a Poisson mean would overflow (eta > 30).
Vector gen_response(const Matrix& predictors, const SimConfig& cfg);

// Covariates -> predictors -> responses, with column names filled in.
Dataset make_dataset(const SimConfig& cfg);

// --- flight-delay-style generator ------------------------------------------

// Synthetic data on the airline-delay schema: per month, rows draw
// DayOfWeek ~ U{1..7}, DepTimeBlk ~ U{1..4}, DISTANCE ~ U[8, 4983];
// QUARTER is derived from the calendar month.  Predictors are the
// dummy-coded columns (intercept, QUARTER2-4, DOW2-7, DepTimeBlk2-4,
// DISTANCE, p = 14) and y ~ Bernoulli(logit).  Key columns: month,
// DayOfWeek, DepTimeBlk.
struct AirlineConfig {
  int months = 12;
  Index rows_per_month = 1000;
  bool big_distance_beta = false;  // x10 DISTANCE coefficient variant
  std::uint64_t seed = 0;
};

// The 14 fitted-model coefficients the generator simulates from.
Vector airline_beta(bool big_distance_beta = false);
Dataset gen_airline_like(const AirlineConfig& cfg);

// Case-study partition: within each month, DISTANCE is discretized into
// distance_bins equal-depth intervals by that month's sample quantiles; the
// blocks are the distinct (month, DayOfWeek, DepTimeBlk, DistanceBlk)
// tuples (at most months * 7 * 4 * distance_bins).
PartitionSpec airline_partition(const Dataset& data, int distance_bins = 8);

}  // namespace repglm
