#include "repglm/solver.hpp"

#include "repglm/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

namespace repglm {

namespace {

constexpr double kConditionWarn = 1e12;
constexpr double kSingularRel = 1e-15;

// Solve F d = s with F symmetric positive definite up to roundoff.  The LDLT
// pivots give a cheap condition estimate; an effectively zero pivot means a
// singular information matrix, in which case a column-pivoted QR identifies
// the first redundant column for the error message.
Vector spd_solve(const Matrix& F, const Vector& s, bool& ill_conditioned) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(F);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.minCoeff();  // signed: negative pivot = not PD

  if (!(dmax > 0) || dmin <= dmax * kSingularRel) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
    qr.setThreshold(1e-12);
    const Eigen::Index rank = qr.rank();
    int col = rank < F.cols() ? static_cast<int>(qr.colsPermutation().indices()(rank))
                              : static_cast<int>(F.cols() - 1);
    throw rank_error(
        "singular weighted information matrix (column " + std::to_string(col) +
            " is in the span of the others)",
        col);
  }
  if (dmax / dmin > kConditionWarn) {
    if (!ill_conditioned)
      std::cerr << "warning: information matrix condition estimate "
                << static_cast<double>(dmax / dmin) << " exceeds 1e12\n";
    ill_conditioned = true;
  }
  return ldlt.solve(s);
}

FitResult wls_solve(const Matrix& X, const Vector& y, const Vector* w) {
  Matrix xtwx;
  Vector xtwy;
  kernels::normal_equations(X, y, w, xtwx, xtwy);
  FitResult res;
  res.beta = spd_solve(xtwx, xtwy, res.ill_conditioned);
  res.iterations = 1;
  res.converged = true;
  // Residual score X^T W (y - X beta) for the report; the information under
  // the identity link is X^T W X itself.
  Vector s = xtwy - xtwx * res.beta;
  res.final_score_norm = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
  res.fisher_information = std::move(xtwx);
  return res;
}

FitResult fisher_scoring_impl(const Matrix& X, const Vector& y, const Vector* w,
                              const GlmFamily& fam, const SolveOptions& opts) {
  const Index p = X.cols();
  FitResult res;
  res.beta = opts.init.size() ? opts.init : Vector::Zero(p);
  if (opts.init.size() && opts.init.size() != p)
    throw config_error("init vector length does not match the number of predictors");

  if (fam.link == Link::identity) {
    // Constant weights nu*G' = 1: scoring is exactly one weighted
    // least-squares solve, independent of the starting point.
    return wls_solve(X, y, w);
  }

  kernels::ScoreInfo si = kernels::score_info(X, y, w, fam, res.beta);
  while (res.iterations < opts.max_iter) {
    if (!si.finite) break;
    Vector step = spd_solve(si.info, si.score, res.ill_conditioned);
    if (!step.allFinite()) break;
    res.beta += step;
    ++res.iterations;
    si = kernels::score_info(X, y, w, fam, res.beta);
    if (step.cwiseAbs().maxCoeff() <= opts.tol && si.finite &&
        si.score.cwiseAbs().maxCoeff() <= opts.tol * (1.0 + res.beta.cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }
  }
  res.final_score_norm = si.score.size() ? si.score.cwiseAbs().maxCoeff()
                                         : std::numeric_limits<double>::quiet_NaN();
  res.fisher_information = std::move(si.info);
  return res;
}

}  // namespace

Vector score(const WeightedData& data, const GlmFamily& fam, const Vector& beta) {
  return kernels::score_info(data.X, data.y, &data.w, fam, beta).score;
}

Vector score(const Dataset& data, const GlmFamily& fam, const Vector& beta) {
  return kernels::score_info(data.X, data.y, nullptr, fam, beta).score;
}

double log_likelihood(const WeightedData& data, const GlmFamily& fam, const Vector& beta) {
  double ll = 0;
  for (Index i = 0; i < data.n_rows(); ++i)
    ll += data.w(i) * log_likelihood_term(fam, data.y(i), data.X.row(i).dot(beta));
  return ll;
}

FitResult fisher_scoring_fit(const WeightedData& data, const GlmFamily& fam,
                             const SolveOptions& opts) {
  return fisher_scoring_impl(data.X, data.y, &data.w, fam, opts);
}

FitResult fisher_scoring_fit(const Dataset& data, const GlmFamily& fam, const SolveOptions& opts) {
  return fisher_scoring_impl(data.X, data.y, nullptr, fam, opts);
}

FitResult wls_fit(const WeightedData& data) { return wls_solve(data.X, data.y, &data.w); }

}  // namespace repglm
