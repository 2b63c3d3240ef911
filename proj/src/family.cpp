#include "repglm/family.hpp"

#include <algorithm>
#include <cmath>

namespace repglm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Phi via erfc so both tails keep full relative accuracy.
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Saturation guards: past these points the bernoulli means are exactly 0/1
// in double precision and the intermediate exponentials would overflow, so
// the evaluation is clamped to the last representable regime.
constexpr double kProbitClamp = 37.0;
constexpr double kExtremeClamp = 700.0;  // cloglog / loglog, exp(eta) near DBL_MAX

}  // namespace

GlmFamily GlmFamily::make(Family family, Link link) {
  bool ok = false;
  switch (family) {
    case Family::normal:
      ok = link == Link::identity;
      break;
    case Family::bernoulli:
      ok = link == Link::logit || link == Link::probit || link == Link::cloglog ||
           link == Link::loglog || link == Link::cauchit;
      break;
    case Family::poisson:
      ok = link == Link::log;
      break;
    case Family::gamma:
      ok = link == Link::reciprocal;
      break;
    case Family::inverse_gaussian:
      ok = link == Link::inverse_squared;
      break;
  }
  if (!ok) throw config_error("unsupported family/link pairing");
  GlmFamily f;
  f.family = family;
  f.link = link;
  f.canonical = (family == Family::normal && link == Link::identity) ||
                (family == Family::bernoulli && link == Link::logit) ||
                (family == Family::poisson && link == Link::log) ||
                (family == Family::gamma && link == Link::reciprocal) ||
                (family == Family::inverse_gaussian && link == Link::inverse_squared);
  return f;
}

GlmFamily GlmFamily::from_name(std::string_view name) {
  if (name == "linear" || name == "gaussian" || name == "normal")
    return make(Family::normal, Link::identity);
  if (name == "logit") return make(Family::bernoulli, Link::logit);
  if (name == "probit") return make(Family::bernoulli, Link::probit);
  if (name == "cloglog") return make(Family::bernoulli, Link::cloglog);
  if (name == "loglog") return make(Family::bernoulli, Link::loglog);
  if (name == "cauchit") return make(Family::bernoulli, Link::cauchit);
  if (name == "poisson") return make(Family::poisson, Link::log);
  if (name == "gamma") return make(Family::gamma, Link::reciprocal);
  if (name == "invgauss" || name == "inverse-gaussian")
    return make(Family::inverse_gaussian, Link::inverse_squared);
  throw config_error("unknown family name: " + std::string(name));
}

std::string GlmFamily::name() const {
  switch (link) {
    case Link::identity: return "linear";
    case Link::logit: return "logit";
    case Link::probit: return "probit";
    case Link::cloglog: return "cloglog";
    case Link::loglog: return "loglog";
    case Link::cauchit: return "cauchit";
    case Link::log: return "poisson";
    case Link::reciprocal: return "gamma";
    case Link::inverse_squared: return "invgauss";
  }
  return "?";
}

LinkEval link_eval(const GlmFamily& fam, double eta) {
  LinkEval e;
  switch (fam.link) {
    case Link::identity:
      e.mean = eta;
      e.dmean = 1.0;
      e.var = 1.0;
      e.nu = 1.0;
      return e;

    case Link::logit: {
      // Numerically stable sigmoid on both sides.
      if (eta >= 0) {
        double t = std::exp(-eta);
        e.mean = 1.0 / (1.0 + t);
      } else {
        double t = std::exp(eta);
        e.mean = t / (1.0 + t);
      }
      e.dmean = e.mean * (1.0 - e.mean);
      e.var = e.dmean;
      e.nu = 1.0;
      return e;
    }

    case Link::probit: {
      double z = std::clamp(eta, -kProbitClamp, kProbitClamp);
      double lo = normal_cdf(-std::abs(z));  // accurate small tail
      double hi = 1.0 - lo;
      e.mean = z >= 0 ? hi : lo;
      e.dmean = normal_pdf(z);
      e.var = lo * hi;
      e.nu = e.dmean / e.var;
      return e;
    }

    case Link::cloglog: {
      double u = std::exp(std::min(eta, kExtremeClamp));
      double one_minus_mean = std::exp(-u);
      e.mean = -std::expm1(-u);  // 1 - exp(-exp(eta)) without cancellation
      e.dmean = u * one_minus_mean;
      e.var = e.mean * one_minus_mean;
      e.nu = u / e.mean;  // = dmean / var, finite for eta -> -inf (limit 1)
      return e;
    }

    case Link::loglog: {
      double u = std::exp(std::min(eta, kExtremeClamp));
      e.mean = std::exp(-u);
      double one_minus_mean = -std::expm1(-u);
      e.dmean = -u * e.mean;
      e.var = e.mean * one_minus_mean;
      e.nu = -u / one_minus_mean;  // negative: the mean decreases in eta
      return e;
    }

    case Link::cauchit: {
      e.mean = std::atan(eta) / kPi + 0.5;
      e.dmean = 1.0 / (kPi * (1.0 + eta * eta));
      e.var = e.mean * (1.0 - e.mean);
      e.nu = e.dmean / e.var;
      return e;
    }

    case Link::log: {
      e.mean = std::exp(eta);
      e.dmean = e.mean;
      e.var = e.mean;
      e.nu = 1.0;
      return e;
    }

    case Link::reciprocal: {
      if (eta == 0.0) throw domain_error("reciprocal link undefined at eta = 0");
      e.mean = 1.0 / eta;
      e.dmean = -e.mean * e.mean;
      e.var = e.mean * e.mean;
      e.nu = -1.0;
      return e;
    }

    case Link::inverse_squared: {
      if (eta <= 0.0) throw domain_error("inverse-squared link requires eta > 0");
      e.mean = 1.0 / std::sqrt(eta);
      e.var = e.mean * e.mean * e.mean;
      e.dmean = -0.5 * e.var;
      e.nu = -0.5;
      return e;
    }
  }
  throw config_error("unreachable link");
}

double log_likelihood_term(const GlmFamily& fam, double y, double eta) {
  switch (fam.link) {
    case Link::identity:
      return y * eta - 0.5 * eta * eta;

    case Link::logit:
      // y*eta - log(1 + exp(eta)), branch for stability.
      return eta > 0 ? y * eta - eta - std::log1p(std::exp(-eta))
                     : y * eta - std::log1p(std::exp(eta));

    case Link::probit: {
      double z = std::clamp(eta, -kProbitClamp, kProbitClamp);
      double lo = normal_cdf(-std::abs(z));
      double log_mean = z >= 0 ? std::log1p(-lo) : std::log(lo);
      double log_comp = z >= 0 ? std::log(lo) : std::log1p(-lo);
      return y * log_mean + (1.0 - y) * log_comp;
    }

    case Link::cloglog: {
      double u = std::exp(std::min(eta, kExtremeClamp));
      return y * std::log(-std::expm1(-u)) + (1.0 - y) * (-u);
    }

    case Link::loglog: {
      double u = std::exp(std::min(eta, kExtremeClamp));
      return y * (-u) + (1.0 - y) * std::log(-std::expm1(-u));
    }

    case Link::cauchit: {
      double mean = std::atan(eta) / kPi + 0.5;
      return y * std::log(mean) + (1.0 - y) * std::log1p(-mean);
    }

    case Link::log:
      return y * eta - std::exp(eta);

    case Link::reciprocal:
      // Derivative is -(y - 1/eta) = nu*(y - mean) with nu = -1.
      if (eta <= 0.0) throw domain_error("gamma log-likelihood requires eta > 0");
      return std::log(eta) - y * eta;

    case Link::inverse_squared:
      // Derivative is -(y - eta^{-1/2})/2, matching nu = -1/2.
      if (eta <= 0.0) throw domain_error("inverse-gaussian log-likelihood requires eta > 0");
      return std::sqrt(eta) - 0.5 * y * eta;
  }
  throw config_error("unreachable link");
}

}  // namespace repglm
