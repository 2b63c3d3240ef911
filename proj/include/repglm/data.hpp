#pragma once

#include "repglm/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repglm {

// Integer-labelled grouping column (month, day-of-week, ...).  Kept outside
// the design matrix so natural partitions can use labels that are not
// predictors.
struct KeyColumn {
  std::string name;
  std::vector<std::int64_t> labels;
};

// One regression problem: response, design matrix (intercept column
// included when the dataset was built from raw covariates) and optional key
// columns.
struct Dataset {
  Matrix X;
  Vector y;
  std::vector<std::string> column_names;
  std::vector<KeyColumn> keys;

  Index n_rows() const { return X.rows(); }
  Index n_cols() const { return X.cols(); }
  // Index of a predictor column by name, -1 if absent.
  int column(const std::string& name) const;
  const KeyColumn* key(const std::string& name) const;
};

// Weighted observations: the shape every fitting routine consumes.  A raw
// dataset is the special case w = 1.
struct WeightedData {
  Matrix X;
  Vector y;
  Vector w;

  Index n_rows() const { return X.rows(); }
  Index n_cols() const { return X.cols(); }
};

WeightedData unit_weights(const Dataset& data);

// CSV layout: header `y,<covariate names...>[,key:<name>...]`, one row per
// observation, '.' decimal separator, UTF-8.  Key columns carry integer
// labels and are marked by the `key:` prefix.  The reader prepends an
// intercept column of ones (named "intercept") when add_intercept is set;
// the writer drops a leading intercept column so a dataset round-trips.
Dataset read_csv_dataset(const std::string& path, bool add_intercept = true);
void write_csv_dataset(const std::string& path, const Dataset& data);

}  // namespace repglm
