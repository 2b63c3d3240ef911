// Acceptance gate: one line per criterion, [PASS]/[FAIL] plus the measured
// quantity and its limit.  Exit code = number of failed criteria.  The
// million-row preset (C6) only runs under --long / --only-long (the latter
// exits 77 when REPGLM_LONG is not set, so a test driver can record a skip).
#include "repglm/baselines.hpp"
#include "repglm/distsim.hpp"
#include "repglm/experiment.hpp"
#include "repglm/kernels.hpp"
#include "repglm/parallel.hpp"
#include "repglm/partition.hpp"
#include "repglm/representatives.hpp"
#include "repglm/rng.hpp"
#include "repglm/simgen.hpp"
#include "repglm/solver.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

using namespace repglm;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("[%s] C%d %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int id, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string what;
  bool pass = false;
  try {
    pass = fn(what);
  } catch (const std::exception& e) {
    what += std::string(" [exception: ") + e.what() + "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, pass, what, secs);
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Dataset sim_logit(Index n, int d, std::uint64_t seed) {
  SimConfig cfg;
  cfg.dist = CovDesign::mzNormal;
  cfg.model = ModelKind::logit;
  cfg.n = n;
  cfg.d = d;
  cfg.seed = seed;
  return make_dataset(cfg);
}

const std::vector<GlmFamily>& catalog() {
  static const std::vector<GlmFamily> fams = {
      GlmFamily::make(Family::normal, Link::identity),
      GlmFamily::make(Family::bernoulli, Link::logit),
      GlmFamily::make(Family::bernoulli, Link::probit),
      GlmFamily::make(Family::bernoulli, Link::cloglog),
      GlmFamily::make(Family::bernoulli, Link::loglog),
      GlmFamily::make(Family::bernoulli, Link::cauchit),
      GlmFamily::make(Family::poisson, Link::log),
      GlmFamily::make(Family::gamma, Link::reciprocal),
      GlmFamily::make(Family::inverse_gaussian, Link::inverse_squared),
  };
  return fams;
}

// Random GLM problem with responses drawn around the model mean, so the
// positive-domain families keep their likelihood peak strictly inside
// eta > 0 (undamped scoring can otherwise chase spurious quasi-score roots).
WeightedData random_glm_problem(const GlmFamily& fam, Index n, Index p, std::uint64_t seed) {
  SplitMix64 g = rng::stream(seed, rng::tag("acc-problem"));
  WeightedData d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.w = Vector::Ones(n);
  const bool positive = fam.link == Link::reciprocal || fam.link == Link::inverse_squared;
  Vector truth(p);
  truth(0) = positive ? 1.5 : 0.2;
  for (Index j = 1; j < p; ++j) truth(j) = (j % 2 ? 0.3 : -0.2);
  for (Index i = 0; i < n; ++i) {
    d.X(i, 0) = 1.0;
    for (Index j = 1; j < p; ++j)
      d.X(i, j) = positive ? rng::uniform01(g) : 2.0 * rng::uniform01(g) - 1.0;
    switch (fam.family) {
      case Family::bernoulli: d.y(i) = rng::uniform01(g) < 0.5 ? 0.0 : 1.0; break;
      case Family::poisson: d.y(i) = std::floor(4.0 * rng::uniform01(g)); break;
      case Family::normal: d.y(i) = 2.0 * rng::uniform01(g) - 1.0; break;
      default: {
        const double eta = d.X.row(i).head(p).dot(truth);
        d.y(i) = link_eval(fam, eta).mean * (0.5 + rng::uniform01(g));
        break;
      }
    }
  }
  return d;
}

Vector feasible_start(const GlmFamily& fam, Index p) {
  Vector beta = Vector::Zero(p);
  if (fam.link == Link::reciprocal || fam.link == Link::inverse_squared) beta(0) = 1.5;
  return beta;
}

// ---------------------------------------------------------------------------
// C1: the representative of every non-fallback sub-block carries the
// sub-block's exact score at the coefficients it was built at.
bool c1(std::string& what) {
  const auto fam = GlmFamily::from_name("logit");
  double worst = 0;
  long checked = 0, fallbacks = 0;
  for (int t = 0; t < 100; ++t) {
    SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c1"));
    const Index n = 1000 + static_cast<Index>(rng::bounded(g, 9001));     // <= 1e4
    const int d = 2 + static_cast<int>(rng::bounded(g, 5));               // 2..6
    const int k = 2 + static_cast<int>(rng::bounded(g, 49));              // <= 50
    const Dataset data = sim_logit(n, d, 10000 + static_cast<std::uint64_t>(t));
    const PartitionSpec part = kmeans_partition(data, k, 500 + static_cast<std::uint64_t>(t), 5);
    Vector beta(data.n_cols());
    for (Index j = 0; j < beta.size(); ++j) beta(j) = rng::uniform01(g) - 0.5;

    const RepresentativeSet reps = smr_representatives(data, part, fam, beta);
    for (Index kk = 0; kk < reps.size(); ++kk) {
      if (reps.fallback[static_cast<std::size_t>(kk)] != RepFallback::none) {
        ++fallbacks;
        continue;
      }
      Vector sk = Vector::Zero(data.n_cols());
      for (Index r : reps.rows[static_cast<std::size_t>(kk)]) {
        const LinkEval e = link_eval(fam, data.X.row(r).dot(beta));
        sk += e.nu * (data.y(r) - e.mean) * data.X.row(r).transpose();
      }
      const LinkEval e = link_eval(fam, reps.data.X.row(kk).dot(beta));
      const Vector sr = reps.data.w(kk) * e.nu * (reps.data.y(kk) - e.mean) *
                        reps.data.X.row(kk).transpose();
      const double gap =
          (sk - sr).cwiseAbs().maxCoeff() / (1.0 + sk.cwiseAbs().maxCoeff());
      worst = std::max(worst, gap);
      ++checked;
    }
  }
  what = "score-matching exactness: " + std::to_string(checked) + " sub-blocks, " +
         std::to_string(fallbacks) + " fallbacks, " +
         fmt("worst normalized score gap %.2e (limit 1e-8)", worst);
  return worst <= 1e-8 && checked > 1000;
}

// ---------------------------------------------------------------------------
// C2: when every block is a single distinct predictor vector, block fits and
// the full fit coincide for both a logistic and a linear model.
bool c2(std::string& what) {
  const Index n = 10000;
  SplitMix64 g = rng::stream(2, rng::tag("c2"));
  Dataset d;
  d.X.resize(n, 4);
  d.y.resize(n);
  d.column_names = {"intercept", "x1", "x2", "x3"};
  Vector truth(4);
  truth << 0.0, 0.5, 0.5, 0.5;
  for (Index i = 0; i < n; ++i) {
    d.X(i, 0) = 1.0;
    for (Index j = 1; j < 4; ++j) d.X(i, j) = rng::uniform01(g) < 0.5 ? 0.0 : 1.0;
  }
  const Vector eta = d.X * truth;
  double worst = 0;
  for (const char* name : {"logit", "linear"}) {
    const GlmFamily fam = GlmFamily::from_name(name);
    for (Index i = 0; i < n; ++i) {
      if (fam.family == Family::bernoulli)
        d.y(i) = rng::uniform01(g) < link_eval(fam, eta(i)).mean ? 1.0 : 0.0;
      else  // unit-variance noise via sum of uniforms is biased; use Box-Muller
        d.y(i) = eta(i) + std::sqrt(-2.0 * std::log(rng::uniform01(g) + 1e-300)) *
                              std::cos(6.283185307179586 * rng::uniform01(g));
    }
    const PartitionSpec part = distinct_x_partition(d);
    const Vector full = fisher_scoring_fit(d, fam).beta;
    SmrOptions mr_opts;
    mr_opts.iterations = 0;
    const Vector mr = smr_fit(d, part, fam, mr_opts).fit.beta;
    const Vector smr = smr_fit(d, part, fam).fit.beta;
    worst = std::max({worst, (full - mr).cwiseAbs().maxCoeff(),
                      (full - smr).cwiseAbs().maxCoeff(),
                      (mr - smr).cwiseAbs().maxCoeff()});
  }
  what = fmt("zero-diameter blocks reproduce the full fit: worst pairwise gap %.2e "
             "(limit 1e-6)",
             worst);
  return worst <= 1e-6;
}

// ---------------------------------------------------------------------------
// C3: the full-data solution is a fixed point of the iterated fit.
bool c3(std::string& what) {
  const auto fam = GlmFamily::from_name("logit");
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c3"));
    const Index n = 2000 + static_cast<Index>(rng::bounded(g, 4001));
    const int d = 2 + static_cast<int>(rng::bounded(g, 4));
    const int k = 20 + static_cast<int>(rng::bounded(g, 81));
    const Dataset data = sim_logit(n, d, 30000 + static_cast<std::uint64_t>(t));
    const PartitionSpec part = kmeans_partition(data, k, 700 + static_cast<std::uint64_t>(t), 8);
    const FitResult full = fisher_scoring_fit(data, fam);
    if (!full.converged) continue;
    SmrOptions opts;
    opts.init = full.beta;
    opts.iterations = 1;
    const SmrResult r = smr_fit(data, part, fam, opts);
    const double gap = (r.fit.beta - full.beta).cwiseAbs().maxCoeff() /
                       (1.0 + full.beta.cwiseAbs().maxCoeff());
    worst = std::max(worst, gap);
  }
  what = fmt("full-data solution is a fixed point: worst drift %.2e (limit 1e-8)", worst);
  return worst <= 1e-8;
}

// ---------------------------------------------------------------------------
// C4: linear-model representative estimates are unbiased with covariance
// sigma^2 (sum_k n_k xbar_k xbar_k^T)^{-1}.
bool c4(std::string& what) {
  const int reps_n = 200;
  const Index n = 10000;
  const int d = 7, p = 8, k = 100;
  const auto fam = GlmFamily::from_name("linear");
  Matrix samples(reps_n, p);
  Matrix predicted = Matrix::Zero(p, p);
  SimConfig cfg;
  cfg.dist = CovDesign::mzNormal;
  cfg.model = ModelKind::linear;
  cfg.n = n;
  cfg.d = d;
  cfg.sigma = 1.0;
  const Vector truth = default_beta(cfg);

  for (int r = 0; r < reps_n; ++r) {
    cfg.seed = 40000 + static_cast<std::uint64_t>(r);
    const Dataset data = make_dataset(cfg);
    const PartitionSpec part =
        kmeans_partition(data, k, 900 + static_cast<std::uint64_t>(r));
    SmrOptions opts;
    opts.iterations = 0;  // block-mean representatives
    const SmrResult fit = smr_fit(data, part, fam, opts);
    samples.row(r) = fit.fit.beta.transpose();
    const WeightedData& mean_reps = fit.history[0].data;
    const Matrix m =
        mean_reps.X.transpose() * mean_reps.w.asDiagonal() * mean_reps.X;
    predicted += m.llt().solve(Matrix::Identity(p, p));
  }
  predicted /= static_cast<double>(reps_n);

  const Vector mean = samples.colwise().mean().transpose();
  Matrix centered = samples;
  centered.rowwise() -= mean.transpose();
  const Matrix empirical = centered.transpose() * centered / static_cast<double>(reps_n - 1);

  double worst_z = 0;
  for (int j = 0; j < p; ++j) {
    const double se = std::sqrt(empirical(j, j) / reps_n);
    worst_z = std::max(worst_z, std::abs(mean(j) - truth(j)) / se);
  }
  const double cov_rel = (empirical - predicted).norm() / predicted.norm();
  what = fmt("linear-model estimates: worst mean z-score %.2f (limit 3), covariance "
             "error %.1f%% (limit 25%%)",
             worst_z, 100.0 * cov_rel);
  return worst_z <= 3.0 && cov_rel <= 0.25;
}

// ---------------------------------------------------------------------------
// Shared driver for the table-row presets (C5 and the long C6).
struct TableRow {
  double smr_true = 0, mr_true = 0, smr_full = 0, mr_full = 0, full_true = 0;
};

TableRow table_row(Index n, int reps_n, std::uint64_t seed0, int kmeans_iters) {
  const auto fam = GlmFamily::from_name("logit");
  SimConfig cfg;
  cfg.dist = CovDesign::mzNormal;
  cfg.model = ModelKind::logit;
  cfg.n = n;
  cfg.d = 7;
  const Vector truth = default_beta(cfg);
  TableRow row;
  for (int r = 0; r < reps_n; ++r) {
    cfg.seed = seed0 + static_cast<std::uint64_t>(r);
    const Dataset data = make_dataset(cfg);
    const PartitionSpec part =
        kmeans_partition(data, 1000, seed0 + 100 + static_cast<std::uint64_t>(r), kmeans_iters);
    const FitResult full = fisher_scoring_fit(data, fam);
    SmrOptions mr_opts;
    mr_opts.iterations = 0;
    const Vector mr = smr_fit(data, part, fam, mr_opts).fit.beta;
    const Vector smr = smr_fit(data, part, fam).fit.beta;
    row.full_true += rmse(full.beta, truth);
    row.mr_true += rmse(mr, truth);
    row.smr_true += rmse(smr, truth);
    row.mr_full += rmse(mr, full.beta);
    row.smr_full += rmse(smr, full.beta);
  }
  row.full_true /= reps_n;
  row.mr_true /= reps_n;
  row.smr_true /= reps_n;
  row.mr_full /= reps_n;
  row.smr_full /= reps_n;
  return row;
}

bool c5(std::string& what) {
  const TableRow row = table_row(100000, 20, 50000, 25);
  const bool smr_ok = row.smr_true >= 0.009 && row.smr_true <= 0.016;
  const bool mr_ok = row.mr_true >= 0.017 && row.mr_true <= 0.024;
  const bool ratio_ok = row.smr_full < row.mr_full / 3.0;
  what = fmt("hundred-thousand-row table row: score-matched error-from-true %.4f "
             "(window [0.009,0.016]), block-mean %.4f (window [0.017,0.024])",
             row.smr_true, row.mr_true) +
         fmt(", error-from-full ratio %.2f (limit 0.33)", row.smr_full / row.mr_full);
  return smr_ok && mr_ok && ratio_ok;
}

bool c6(std::string& what) {
  const TableRow row = table_row(1000000, 10, 60000, 10);
  what = fmt("million-row preset: score-matched error-from-true %.4f "
             "(window [0.003,0.007], full-data %.4f)",
             row.smr_true, row.full_true);
  return row.smr_true >= 0.003 && row.smr_true <= 0.007;
}

// ---------------------------------------------------------------------------
// C7: finer equal-depth grids shrink the block-mean fit's distance from the
// full fit, at the expected rate.
bool c7(std::string& what) {
  const auto fam = GlmFamily::from_name("logit");
  SimConfig cfg;
  cfg.dist = CovDesign::mzNormal;
  cfg.model = ModelKind::logit;
  cfg.n = 100000;
  cfg.d = 7;
  double err[3] = {0, 0, 0};
  const int reps_n = 10;
  for (int r = 0; r < reps_n; ++r) {
    cfg.seed = 70000 + static_cast<std::uint64_t>(r);
    const Dataset data = make_dataset(cfg);
    const Vector full = fisher_scoring_fit(data, fam).beta;
    for (int m = 2; m <= 4; ++m) {
      const PartitionSpec part = equal_depth_partition(data, m);
      SmrOptions opts;
      opts.iterations = 0;
      err[m - 2] += rmse(smr_fit(data, part, fam, opts).fit.beta, full);
    }
  }
  for (double& e : err) e /= reps_n;
  const double ratio = err[0] / err[2];
  what = fmt("grid-fineness pattern: block-mean error-from-full %.4f / %.4f / %.4f", err[0],
             err[1], err[2]) +
         fmt(" for 2/3/4 bins, coarse-to-fine ratio %.2f (window [2.5,4.5])", ratio);
  return err[0] > err[1] && err[1] > err[2] && ratio >= 2.5 && ratio <= 4.5;
}

// ---------------------------------------------------------------------------
// C8: on the asymmetric cloglog model, score matching beats block means by a
// wide margin.
bool c8(std::string& what) {
  const auto fam = GlmFamily::from_name("cloglog");
  SimConfig cfg;
  cfg.dist = CovDesign::mzNormal;
  cfg.model = ModelKind::cloglog;
  cfg.n = 100000;
  cfg.d = 7;
  double mr_full = 0, smr_full = 0;
  const int reps_n = 20;
  for (int r = 0; r < reps_n; ++r) {
    cfg.seed = 80000 + static_cast<std::uint64_t>(r);
    const Dataset data = make_dataset(cfg);
    const PartitionSpec part =
        kmeans_partition(data, 200, 80000 + 500 + static_cast<std::uint64_t>(r));
    const Vector full = fisher_scoring_fit(data, fam).beta;
    SmrOptions mr_opts;
    mr_opts.iterations = 0;
    mr_full += rmse(smr_fit(data, part, fam, mr_opts).fit.beta, full);
    smr_full += rmse(smr_fit(data, part, fam).fit.beta, full);
  }
  mr_full /= reps_n;
  smr_full /= reps_n;
  what = fmt("asymmetric-link gap: score-matched error-from-full %.4f vs block-mean %.4f, "
             "ratio %.3f (limit 0.2)",
             smr_full, mr_full, smr_full / mr_full);
  return smr_full <= mr_full / 5.0;
}

// ---------------------------------------------------------------------------
// C9: every analytic piece agrees with its naive reference implementation.
bool c9(std::string& what) {
  // (a) score vs central-difference gradient, 100 cases per family.
  double worst_grad = 0;
  for (const auto& fam : catalog()) {
    for (int t = 0; t < 100; ++t) {
      const WeightedData d = random_glm_problem(
          fam, 20 + t % 50, 3, static_cast<std::uint64_t>(t) * 9 + static_cast<int>(fam.link));
      SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c9-beta"));
      Vector beta = feasible_start(fam, 3);
      for (Index j = 1; j < 3; ++j) beta(j) = 0.3 * rng::uniform01(g) - 0.15;
      const Vector s = score(d, fam, beta);
      const Vector num = oracle::numeric_gradient(
          [&](const Vector& b) { return log_likelihood(d, fam, b); }, beta);
      worst_grad = std::max(worst_grad, (s - num).cwiseAbs().maxCoeff() /
                                            (1.0 + num.cwiseAbs().maxCoeff()));
    }
  }

  // (b) scoring solution vs a damped finite-difference Newton oracle.
  double worst_fit = 0;
  const char* fit_fams[] = {"logit", "probit", "cloglog", "poisson", "gamma"};
  for (int t = 0; t < 50; ++t) {
    const GlmFamily fam = GlmFamily::from_name(fit_fams[t % 5]);
    const WeightedData d = random_glm_problem(fam, 150, 3, 900 + static_cast<std::uint64_t>(t));
    SolveOptions opts;
    opts.init = feasible_start(fam, 3);
    const FitResult fit = fisher_scoring_fit(d, fam, opts);
    if (!fit.converged) {
      worst_fit = 1.0;
      break;
    }
    const Vector ref = oracle::newton_oracle(d, fam, feasible_start(fam, 3));
    worst_fit = std::max(worst_fit, (fit.beta - ref).cwiseAbs().maxCoeff());
  }

  // (c) eta solves vs a dense scan-and-bisect oracle on same-sign blocks.
  double worst_eta = 0;
  int eta_checked = 0;
  const char* eta_fams[] = {"logit", "probit", "cloglog", "poisson"};
  for (int t = 0; eta_checked < 200 && t < 400; ++t) {
    const GlmFamily fam = GlmFamily::from_name(eta_fams[t % 4]);
    SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c9-eta"));
    const Index m = 3 + static_cast<Index>(rng::bounded(g, 25));
    const double sign = t % 2 ? 1.0 : -1.0;
    Vector eta(m), y(m);
    for (Index i = 0; i < m; ++i) {
      eta(i) = sign * (0.05 + 2.5 * rng::uniform01(g));
      y(i) = fam.family == Family::poisson ? std::floor(3.0 * rng::uniform01(g))
                                           : (rng::uniform01(g) < 0.5 ? 0.0 : 1.0);
    }
    std::vector<Index> rows(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
    const SmrResponse resp = smr_response(fam, rows, eta, y);
    if (resp.fallback) continue;
    double target = 0, eta_bar = 0;
    for (Index i = 0; i < m; ++i) {
      const LinkEval e = link_eval(fam, eta(i));
      target += e.nu * (y(i) - e.mean) * eta(i);
      eta_bar += eta(i);
    }
    target /= static_cast<double>(m);
    eta_bar /= static_cast<double>(m);
    const EtaSolve s = solve_eta(fam, rows, eta, resp.ytilde, target, eta_bar);
    if (s.bracket_failed) continue;
    const auto fn = [&](double e) {
      const LinkEval le = link_eval(fam, e);
      return le.nu * (resp.ytilde - le.mean) * e - target;
    };
    const auto roots = oracle::scan_roots(fn, eta.minCoeff(), eta.maxCoeff(), 16384, 1e-13);
    if (roots.empty()) continue;
    double best = roots[0];
    for (double r : roots)
      if (std::abs(r - eta_bar) < std::abs(best - eta_bar)) best = r;
    worst_eta =
        std::max(worst_eta, std::abs(s.eta_tilde - best) / (1.0 + std::abs(best)));
    ++eta_checked;
  }

  // (d) identity-link closed-form quadratic vs the numeric root.
  double worst_quad = 0;
  const GlmFamily lin = GlmFamily::from_name("linear");
  for (int t = 0; t < 100; ++t) {
    SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c9-quad"));
    const Index m = 2 + static_cast<Index>(rng::bounded(g, 15));
    Vector eta(m), y(m);
    for (Index i = 0; i < m; ++i) {
      eta(i) = 0.1 + 3.0 * rng::uniform01(g);
      y(i) = eta(i) + rng::uniform01(g) - 0.5;
    }
    std::vector<Index> rows(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
    const SmrResponse resp = smr_response(lin, rows, eta, y);
    if (resp.fallback) continue;
    double target = 0, eta_bar = 0;
    for (Index i = 0; i < m; ++i) {
      target += (y(i) - eta(i)) * eta(i);
      eta_bar += eta(i);
    }
    target /= static_cast<double>(m);
    eta_bar /= static_cast<double>(m);
    const EtaSolve s = solve_eta(lin, rows, eta, resp.ytilde, target, eta_bar);
    if (s.bracket_failed) continue;
    const auto fn = [&](double e) { return (resp.ytilde - e) * e - target; };
    const auto roots = oracle::scan_roots(fn, eta.minCoeff(), eta.maxCoeff(), 16384, 1e-13);
    if (roots.empty()) continue;
    double best = roots[0];
    for (double r : roots)
      if (std::abs(r - eta_bar) < std::abs(best - eta_bar)) best = r;
    worst_quad = std::max(worst_quad, std::abs(s.eta_tilde - best));
  }

  what = fmt("reference-implementation suite: gradient gap %.1e (limit 1e-6), solver gap "
             "%.1e (limit 1e-6)",
             worst_grad, worst_fit) +
         fmt(", eta-solve gap %.1e (limit 1e-10), quadratic gap %.1e (limit 1e-10); ",
             worst_eta, worst_quad) +
         std::to_string(eta_checked) + " eta solves";
  return worst_grad < 1e-6 && worst_fit < 1e-6 && worst_eta < 1e-10 &&
         worst_quad < 1e-10 && eta_checked >= 200;
}

// ---------------------------------------------------------------------------
// C10: the four-node message-passing fit equals the single-process fit and
// its traffic matches the closed-form word count.
bool c10(std::string& what) {
  const auto fam = GlmFamily::from_name("logit");
  double worst = 0;
  int word_mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    SplitMix64 g = rng::stream(static_cast<std::uint64_t>(t), rng::tag("c10"));
    const Index n = 500 + static_cast<Index>(rng::bounded(g, 2501));
    const int d = 2 + static_cast<int>(rng::bounded(g, 4));
    const int k = 8 + static_cast<int>(rng::bounded(g, 23));
    const int iters = 1 + static_cast<int>(rng::bounded(g, 3));
    const Dataset data = sim_logit(n, d, 91000 + static_cast<std::uint64_t>(t));
    const PartitionSpec part =
        kmeans_partition(data, k, 92000 + static_cast<std::uint64_t>(t), 8);
    SmrOptions opts;
    opts.iterations = iters;

    auto nodes = shard_dataset(data, part, 4);
    const auto [cat, cat_part] = concatenate_shards(nodes);
    const SmrResult reference = smr_fit(cat, cat_part, fam, opts);
    const DistributedResult dist = distributed_smr(std::move(nodes), fam, opts);
    worst = std::max(worst, (dist.fit.beta - reference.fit.beta).cwiseAbs().maxCoeff());

    // Closed form: every stage's representative count times (p + 2) words,
    // plus one p-word broadcast per active node per score-matching round.
    const std::uint64_t p = static_cast<std::uint64_t>(data.n_cols());
    std::uint64_t closed = 0;
    for (const auto& stage : reference.history)
      closed += static_cast<std::uint64_t>(stage.size()) * (p + 2);
    closed += p * static_cast<std::uint64_t>(dist.traffic.nodes_used) *
              static_cast<std::uint64_t>(iters);
    if (closed != dist.traffic.total_words) ++word_mismatches;
  }
  what = fmt("distributed equivalence: worst coefficient gap %.1e (limit 1e-10), ", worst) +
         std::to_string(word_mismatches) + " word-count mismatches (limit 0)";
  return worst <= 1e-10 && word_mismatches == 0;
}

// ---------------------------------------------------------------------------
// C11: with the partition held fixed, fit time grows about linearly in the
// number of rows.
bool c11(std::string& what) {
  const auto fam = GlmFamily::from_name("logit");
  const auto build = [&](Index n, std::uint64_t seed) {
    Dataset data = sim_logit(n, 7, seed);
    PartitionSpec part = kmeans_partition(data, 200, seed + 1, 10);
    return std::make_pair(std::move(data), std::move(part));
  };
  const auto [small, small_part] = build(100000, 111000);
  const auto [big, big_part] = build(1000000, 112000);

  const auto time_fit = [&](const Dataset& data, const PartitionSpec& part) {
    std::vector<double> runs;
    for (int r = 0; r < 5; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const SmrResult fit = smr_fit(data, part, fam);
      const auto t1 = std::chrono::steady_clock::now();
      if (!fit.fit.converged) return -1.0;
      runs.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(runs.begin(), runs.end());
    return runs[runs.size() / 2];
  };
  const double t_small = time_fit(small, small_part);
  const double t_big = time_fit(big, big_part);
  const double ratio = t_big / t_small;
  what = fmt("linear scaling: fit time %.3fs at 1e5 rows, %.3fs at 1e6, ratio %.1f "
             "(window [5,20])",
             t_small, t_big, ratio);
  return t_small > 0 && t_big > 0 && ratio >= 5.0 && ratio <= 20.0;
}

}  // namespace

int main(int argc, char** argv) {
  bool run_long = false, only_long = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) run_long = true;
    if (std::strcmp(argv[i], "--only-long") == 0) only_long = true;
  }
  const char* env = std::getenv("REPGLM_LONG");
  if (env && std::strcmp(env, "1") == 0) run_long = true;

  if (only_long) {
    if (!run_long) {
      std::printf("[SKIP] C6 million-row preset (set REPGLM_LONG=1 or pass --long)\n");
      return 77;
    }
    criterion(6, c6);
    return g_failures;
  }

  criterion(1, c1);
  criterion(2, c2);
  criterion(3, c3);
  criterion(4, c4);
  criterion(5, c5);
  if (run_long)
    criterion(6, c6);
  else
    std::printf("[SKIP] C6 million-row preset (set REPGLM_LONG=1 or pass --long)\n");
  criterion(7, c7);
  criterion(8, c8);
  criterion(9, c9);
  criterion(10, c10);
  criterion(11, c11);

  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
