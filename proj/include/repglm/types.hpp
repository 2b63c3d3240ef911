#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace repglm {

// Row-major storage so one observation (one row) is contiguous in memory;
// every hot kernel streams rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = std::int64_t;

// Invalid argument combinations: bad partition parameters, malformed
// experiment configs, unsupported family/link pairings, ...
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-format problems; the message carries the offending line number when
// one is known.
class io_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear predictor outside the domain of the inverse link (for example a
// non-positive value under the inverse-squared link).
class domain_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Singular (or numerically singular) weighted information matrix.  `column`
// is the index of the first column that the pivoted factorization could not
// use, i.e. a column in the span of the preceding ones.
class rank_error : public std::runtime_error {
 public:
  rank_error(const std::string& what, int column_) : std::runtime_error(what), column(column_) {}
  int column = -1;
};

// Simulated response impossible to draw (e.g. Poisson mean overflow).
class generation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No usable per-block fit survived for divide-and-conquer aggregation.
class aggregation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace repglm
