#include "repglm/solver.hpp"

#include "repglm/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace repglm;

namespace {

// Random regression problem with eta kept strictly positive so every family
// in the catalog (including gamma / inverse-gaussian) can evaluate it.
WeightedData random_problem(const GlmFamily& fam, Index n, Index p, std::uint64_t seed) {
  SplitMix64 g = rng::stream(seed, rng::tag("solver-test"));
  WeightedData d;
  d.X.resize(n, p);
  d.y.resize(n);
  d.w = Vector::Ones(n);
  const bool positive = fam.link == Link::reciprocal || fam.link == Link::inverse_squared;
  Vector truth(p);  // used for the positive-domain families only
  truth(0) = 1.5;
  for (Index j = 1; j < p; ++j) truth(j) = j % 2 ? 0.3 : -0.2;
  for (Index i = 0; i < n; ++i) {
    d.X(i, 0) = 1.0;
    for (Index j = 1; j < p; ++j)
      d.X(i, j) = positive ? rng::uniform01(g) : 2.0 * rng::uniform01(g) - 1.0;
    switch (fam.family) {
      case Family::bernoulli: d.y(i) = rng::uniform01(g) < 0.5 ? 0.0 : 1.0; break;
      case Family::poisson: d.y(i) = std::floor(4.0 * rng::uniform01(g)); break;
      case Family::normal: d.y(i) = 2.0 * rng::uniform01(g) - 1.0; break;
      default: {
        // Gamma / inverse-gaussian: draw responses around the model mean so
        // the likelihood peaks strictly inside the positive-eta domain (the
        // quasi-score equations also have spurious roots with negative
        // means, which pure-noise responses can steer an undamped fit into).
        const double eta = d.X.row(i).head(p).dot(truth);
        d.y(i) = link_eval(fam, eta).mean * (0.5 + rng::uniform01(g));
        break;
      }
    }
  }
  return d;
}

Vector interior_beta(const GlmFamily& fam, Index p, std::uint64_t seed) {
  SplitMix64 g = rng::stream(seed, rng::tag("solver-beta"));
  Vector beta(p);
  const bool positive = fam.link == Link::reciprocal || fam.link == Link::inverse_squared;
  beta(0) = positive ? 1.5 : 0.4 * rng::uniform01(g) - 0.2;
  for (Index j = 1; j < p; ++j) beta(j) = 0.4 * rng::uniform01(g) - 0.2;
  return beta;
}

const std::vector<GlmFamily> kCatalog = {
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

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("two-point weighted least squares interpolates exactly") {
    WeightedData d;
    d.X.resize(2, 2);
    d.X << 1, 0, 1, 1;
    d.y.resize(2);
    d.y << 1, 3;
    d.w.resize(2);
    d.w << 2.0, 0.5;  // weights cannot matter for an interpolating fit
    const FitResult fit = wls_fit(d);
    CHECK(fit.beta(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.beta(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.converged);
  }

  TEST_CASE("weighted least squares matches the Gauss-Jordan oracle") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SplitMix64 g = rng::stream(seed, rng::tag("wls"));
      const Index n = 60, p = 4;
      WeightedData d;
      d.X.resize(n, p);
      d.y.resize(n);
      d.w.resize(n);
      for (Index i = 0; i < n; ++i) {
        d.X(i, 0) = 1.0;
        for (Index j = 1; j < p; ++j) d.X(i, j) = 2.0 * rng::uniform01(g) - 1.0;
        d.y(i) = 3.0 * rng::uniform01(g);
        d.w(i) = 0.5 + rng::uniform01(g);
      }
      const Vector ours = wls_fit(d).beta;
      const Vector ref = oracle::wls_oracle(d.X, d.y, &d.w);
      CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("identity-link scoring is a single weighted least squares solve") {
    const auto fam = GlmFamily::make(Family::normal, Link::identity);
    const WeightedData d = random_problem(fam, 80, 3, 11);
    const FitResult a = fisher_scoring_fit(d, fam);
    const FitResult b = wls_fit(d);
    CHECK(a.beta == b.beta);  // same code path, bitwise
    CHECK(a.iterations == 1);
    CHECK(a.converged);
  }

  TEST_CASE("balanced intercept-only logistic fit lands on zero") {
    WeightedData d;
    d.X = Matrix::Ones(4, 1);
    d.y.resize(4);
    d.y << 0, 0, 1, 1;
    d.w = Vector::Ones(4);
    const FitResult fit = fisher_scoring_fit(d, GlmFamily::make(Family::bernoulli, Link::logit));
    CHECK(std::abs(fit.beta(0)) < 1e-12);
    CHECK(fit.converged);
  }

  TEST_CASE("score equals the numeric gradient of the log-likelihood") {
    for (const auto& fam : kCatalog) {
      const WeightedData d = random_problem(fam, 40, 3, 101 + static_cast<int>(fam.link));
      const Vector beta = interior_beta(fam, 3, 7);
      const Vector s = score(d, fam, beta);
      const Vector num = oracle::numeric_gradient(
          [&](const Vector& b) { return log_likelihood(d, fam, b); }, beta);
      const double scale = 1.0 + num.cwiseAbs().maxCoeff();
      CHECK((s - num).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }

  TEST_CASE("scoring solution matches the finite-difference Newton oracle") {
    for (const char* name : {"logit", "probit", "cloglog", "poisson", "gamma"}) {
      const GlmFamily fam = GlmFamily::from_name(name);
      const WeightedData d = random_problem(fam, 200, 3, rng::tag(name) & 0xffff);
      SolveOptions opts;
      // The zero vector is outside the gamma domain (eta must stay positive),
      // so start every fit from a feasible interior point instead.
      opts.init = interior_beta(fam, 3, 1);
      const FitResult fit = fisher_scoring_fit(d, fam, opts);
      REQUIRE(fit.converged);
      const Vector ref = oracle::newton_oracle(d, fam, interior_beta(fam, 3, 1));
      CHECK((fit.beta - ref).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("refitting from the solution converges immediately") {
    const auto fam = GlmFamily::from_name("logit");
    const WeightedData d = random_problem(fam, 150, 4, 5);
    const FitResult first = fisher_scoring_fit(d, fam);
    REQUIRE(first.converged);
    SolveOptions opts;
    opts.init = first.beta;
    const FitResult again = fisher_scoring_fit(d, fam, opts);
    CHECK(again.iterations <= 1);
    CHECK((again.beta - first.beta).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("integer weights replicate rows") {
    const auto fam = GlmFamily::from_name("poisson");
    WeightedData base = random_problem(fam, 50, 3, 23);

    WeightedData doubled;  // every row twice, unit weights
    doubled.X.resize(100, 3);
    doubled.y.resize(100);
    doubled.w = Vector::Ones(100);
    for (Index i = 0; i < 50; ++i) {
      doubled.X.row(2 * i) = base.X.row(i);
      doubled.X.row(2 * i + 1) = base.X.row(i);
      doubled.y(2 * i) = base.y(i);
      doubled.y(2 * i + 1) = base.y(i);
    }
    WeightedData weighted = base;  // every row once, weight two
    weighted.w = 2.0 * Vector::Ones(50);

    const Vector a = fisher_scoring_fit(doubled, fam).beta;
    const Vector b = fisher_scoring_fit(weighted, fam).beta;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("separated data reports non-convergence instead of throwing") {
    WeightedData d;
    const Index n = 40;
    d.X.resize(n, 2);
    d.y.resize(n);
    d.w = Vector::Ones(n);
    for (Index i = 0; i < n; ++i) {
      const double x = (i < n / 2) ? -1.0 - 0.01 * static_cast<double>(i) : 1.0 + 0.01 * static_cast<double>(i);
      d.X(i, 0) = 1.0;
      d.X(i, 1) = x;
      d.y(i) = x > 0 ? 1.0 : 0.0;  // perfectly separated
    }
    const FitResult fit = fisher_scoring_fit(d, GlmFamily::from_name("logit"));
    CHECK_FALSE(fit.converged);
    CHECK(fit.iterations == 25);  // ran to the iteration cap
  }

  TEST_CASE("redundant column raises rank_error naming the column") {
    const auto fam = GlmFamily::from_name("linear");
    WeightedData d = random_problem(fam, 30, 3, 31);
    WeightedData bad;
    bad.X.resize(30, 4);
    bad.X.leftCols(3) = d.X;
    bad.X.col(3) = d.X.col(1);  // exact copy of column 1
    bad.y = d.y;
    bad.w = d.w;
    try {
      fisher_scoring_fit(bad, fam);
      FAIL("expected rank_error");
    } catch (const rank_error& e) {
      CHECK(e.column == 3);  // the later duplicate is the redundant one
    }
  }

  TEST_CASE("final_score_norm is small at a converged solution") {
    const auto fam = GlmFamily::from_name("cloglog");
    const WeightedData d = random_problem(fam, 300, 3, 77);
    const FitResult fit = fisher_scoring_fit(d, fam);
    REQUIRE(fit.converged);
    const double snorm = score(d, fam, fit.beta).cwiseAbs().maxCoeff();
    CHECK(snorm <= 1e-8 * (1.0 + fit.beta.cwiseAbs().maxCoeff()));
    CHECK(fit.final_score_norm == doctest::Approx(snorm).epsilon(1e-12));
  }
}
