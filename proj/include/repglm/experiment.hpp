#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/simgen.hpp"
#include "repglm/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace repglm {

// Root-mean-square error between two coefficient vectors over the
// non-intercept coordinates (coordinate 0 is the intercept); pass
// include_intercept to average over all coordinates instead.
double rmse(const Vector& a, const Vector& b, bool include_intercept = false);

// Flat INI-style config: `[section]` lines and `key = value` pairs, `#`
// comments.  Sections: experiment (name, replications, seed, methods,
// timing, include_intercept), data (design, n, d, model, beta, sigma, csv,
// family, months, rows_per_month, big_distance_beta), partition (method, k,
// bins, columns, max_iter, distance_bins), smr (iterations), dc (blocks),
// output (csv).
struct ExperimentConfig {
  std::map<std::string, std::map<std::string, std::string>> values;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback = "") const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
};

struct ExperimentRow {
  int replication = 0;
  std::string method;
  double rmse_true = 0;  // NaN when no true coefficients exist (csv data)
  double rmse_full = 0;  // NaN for the full fit itself
  double fit_seconds = 0;
  Index k_used = 0;  // representative points / blocks the method fitted on
  int fallbacks = 0;
};

struct MethodSummary {
  std::string method;
  double mean_rmse_true = 0, sd_rmse_true = 0;
  double mean_rmse_full = 0, sd_rmse_full = 0;
  double mean_seconds = 0;
  double mean_k = 0;
  double mean_fallbacks = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<MethodSummary> summaries;
  const MethodSummary* summary(const std::string& method) const;
};

// Run the configured replications.  Per replication: generate (or load)
// data, build the partition, fit every configured method, and record the
// coefficient errors against the true and the full-data coefficients.
// Methods: full, mr, smr, dc, median, midpoint.  Deterministic for a fixed
// config and seed; with `timing = off` the seconds column is written as 0 so
// the report CSV is byte-identical across runs.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Tidy CSV: `replication,method,rmse_true,rmse_full,fit_seconds,k_used,
// fallbacks` rows followed by per-method `mean` / `sd` summary rows.
void write_report_csv(const std::string& path, const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

}  // namespace repglm
