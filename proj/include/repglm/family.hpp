#pragma once

#include "repglm/types.hpp"

#include <string>
#include <string_view>

namespace repglm {

enum class Family { normal, bernoulli, poisson, gamma, inverse_gaussian };
enum class Link { identity, logit, probit, cloglog, loglog, cauchit, log, reciprocal, inverse_squared };

// A validated family/link pairing.  `canonical` marks the five natural pairs
// (normal/identity, bernoulli/logit, poisson/log, gamma/reciprocal,
// inverse-gaussian/inverse-squared), for which the score weight nu(eta) is a
// constant.
struct GlmFamily {
  Family family = Family::normal;
  Link link = Link::identity;
  bool canonical = true;

  // Throws config_error for a pairing outside the supported catalog.
  static GlmFamily make(Family family, Link link);

  // Short CLI names: "linear" (or "gaussian"), "logit", "probit", "cloglog",
  // "loglog", "cauchit", "poisson", "gamma", "invgauss".
  static GlmFamily from_name(std::string_view name);
  std::string name() const;
};

// Pointwise link evaluation at one linear-predictor value.
//   mean  = G(eta), the inverse link
//   dmean = G'(eta)
//   var   = variance function evaluated at the mean (unit dispersion)
//   nu    = G'(eta) / var, the weight that multiplies (y - mean) in the score
// For canonical pairs nu is the exact unit-dispersion constant: +1 for
// normal/identity, bernoulli/logit and poisson/log, -1 for gamma/reciprocal,
// -1/2 for inverse-gaussian/inverse-squared.  Using the exact constant (not
// its absolute value) keeps the score equal to the log-likelihood gradient
// and the weighted information positive definite.
struct LinkEval {
  double mean = 0;
  double dmean = 0;
  double nu = 0;
  double var = 0;
};

// Throws domain_error when eta is outside the inverse link's domain
// (reciprocal: eta == 0; inverse-squared: eta <= 0).
LinkEval link_eval(const GlmFamily& fam, double eta);

// Unit-dispersion log-likelihood contribution of one observation, dropping
// terms that do not depend on eta.  Its eta-derivative is nu*(y - mean), so
// the score is exactly the gradient of the summed terms.
double log_likelihood_term(const GlmFamily& fam, double y, double eta);

}  // namespace repglm
