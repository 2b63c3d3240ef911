#include "repglm/simgen.hpp"

#include "repglm/family.hpp"
#include "repglm/parallel.hpp"
#include "repglm/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>

namespace repglm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Covariance with unit (or given) diagonal and constant 0.5 off-diagonal.
Matrix base_sigma(int d, bool unequal_diag) {
  Matrix s(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      s(i, j) = i == j ? (unequal_diag ? static_cast<double>((i + 1) * (i + 1)) : 1.0) : 0.5;
  return s;
}

Matrix cholesky_factor(const Matrix& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(sigma)};
  if (llt.info() != Eigen::Success) throw config_error("covariate covariance is not positive definite");
  return Matrix(llt.matrixL());
}

}  // namespace

CovDesign cov_design_from_name(std::string_view name) {
  if (name == "mzNormal") return CovDesign::mzNormal;
  if (name == "nzNormal") return CovDesign::nzNormal;
  if (name == "ueNormal") return CovDesign::ueNormal;
  if (name == "mixNormal") return CovDesign::mixNormal;
  if (name == "T3") return CovDesign::T3;
  if (name == "EXP") return CovDesign::EXP;
  if (name == "BETA") return CovDesign::BETA;
  throw config_error("unknown covariate design: " + std::string(name));
}

ModelKind model_from_name(std::string_view name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "logit") return ModelKind::logit;
  if (name == "cloglog") return ModelKind::cloglog;
  if (name == "poisson") return ModelKind::poisson;
  if (name == "logit-interactions") return ModelKind::logit_interactions;
  throw config_error("unknown model: " + std::string(name));
}

const char* to_string(CovDesign d) {
  switch (d) {
    case CovDesign::mzNormal: return "mzNormal";
    case CovDesign::nzNormal: return "nzNormal";
    case CovDesign::ueNormal: return "ueNormal";
    case CovDesign::mixNormal: return "mixNormal";
    case CovDesign::T3: return "T3";
    case CovDesign::EXP: return "EXP";
    case CovDesign::BETA: return "BETA";
  }
  return "?";
}

const char* to_string(ModelKind m) {
  switch (m) {
    case ModelKind::linear: return "linear";
    case ModelKind::logit: return "logit";
    case ModelKind::cloglog: return "cloglog";
    case ModelKind::poisson: return "poisson";
    case ModelKind::logit_interactions: return "logit-interactions";
  }
  return "?";
}

int predictor_count(const SimConfig& cfg) {
  return cfg.model == ModelKind::logit_interactions ? 8 : cfg.d + 1;
}

Vector default_beta(const SimConfig& cfg) {
  Vector b = Vector::Constant(predictor_count(cfg), 0.5);
  b(0) = 0.0;
  return b;
}

Matrix gen_covariates(const SimConfig& cfg) {
  const int d = cfg.model == ModelKind::logit_interactions ? 3 : cfg.d;
  if (d < 1) throw config_error("need at least one covariate");
  if (cfg.n < 1) throw config_error("need at least one row");

  Matrix L;  // Cholesky factor for the correlated designs
  switch (cfg.dist) {
    case CovDesign::mzNormal:
    case CovDesign::nzNormal:
    case CovDesign::mixNormal:
    case CovDesign::T3:
      L = cholesky_factor(base_sigma(d, false));
      break;
    case CovDesign::ueNormal:
      L = cholesky_factor(base_sigma(d, true));
      break;
    default:
      break;
  }

  Matrix X(cfg.n, d);
  const int C = parallel::num_chunks(cfg.n);
  const int nt = parallel::max_threads();

#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = parallel::chunk_range(cfg.n, c);
    Vector z(d);
    for (Index i = lo; i < hi; ++i) {
      SplitMix64 gen = rng::stream(cfg.seed, rng::tag("cov"), static_cast<std::uint64_t>(i));
      std::normal_distribution<double> normal(0.0, 1.0);
      switch (cfg.dist) {
        case CovDesign::mzNormal:
        case CovDesign::nzNormal: {
          for (int j = 0; j < d; ++j) z(j) = normal(gen);
          const double shift = cfg.dist == CovDesign::nzNormal ? 1.5 : 0.0;
          X.row(i) = (L * z).transpose().array() + shift;
          break;
        }
        case CovDesign::ueNormal: {
          for (int j = 0; j < d; ++j) z(j) = normal(gen);
          X.row(i) = (L * z).transpose();
          break;
        }
        case CovDesign::mixNormal: {
          const double mean = rng::uniform01(gen) < 0.5 ? 1.0 : -1.0;
          for (int j = 0; j < d; ++j) z(j) = normal(gen);
          X.row(i) = (L * z).transpose().array() + mean;
          break;
        }
        case CovDesign::T3: {
          for (int j = 0; j < d; ++j) z(j) = normal(gen);
          std::chi_squared_distribution<double> chi2(3.0);
          const double w = chi2(gen);
          X.row(i) = (L * z).transpose() / std::sqrt(w / 3.0) / 10.0;
          break;
        }
        case CovDesign::EXP: {
          std::exponential_distribution<double> expo(2.0);
          for (int j = 0; j < d; ++j) X(i, j) = expo(gen);
          break;
        }
        case CovDesign::BETA: {
          // Beta(1/2, 1/2) by its closed-form inverse CDF.
          for (int j = 0; j < d; ++j) {
            const double u = rng::uniform01(gen);
            const double s = std::sin(kPi * u / 2.0);
            X(i, j) = s * s;
          }
          break;
        }
      }
    }
  }
  return X;
}

Matrix interaction_expand(const Matrix& covariates) {
  if (covariates.cols() != 3)
    throw config_error("interaction expansion is defined for exactly 3 covariates");
  const Index n = covariates.rows();
  Matrix X(n, 8);
  for (Index i = 0; i < n; ++i) {
    const double x1 = covariates(i, 0), x2 = covariates(i, 1), x3 = covariates(i, 2);
    X(i, 0) = 1.0;
    X(i, 1) = x1;
    X(i, 2) = x2;
    X(i, 3) = x3;
    X(i, 4) = x1 * x2;
    X(i, 5) = x1 * x3;
    X(i, 6) = x2 * x3;
    X(i, 7) = x1 * x2 * x3;
  }
  return X;
}

Vector gen_response(const Matrix& predictors, const SimConfig& cfg) {
  const Index n = predictors.rows();
  const Vector beta = cfg.beta.size() ? cfg.beta : default_beta(cfg);
  if (beta.size() != predictors.cols())
    throw config_error("beta length does not match the predictor count");

  const GlmFamily logit = GlmFamily::make(Family::bernoulli, Link::logit);
  const GlmFamily cll = GlmFamily::make(Family::bernoulli, Link::cloglog);

  Vector y(n);
  const int C = parallel::num_chunks(n);
  const int nt = parallel::max_threads();
  bool overflow = false;

#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = parallel::chunk_range(n, c);
    for (Index i = lo; i < hi; ++i) {
      const double eta = predictors.row(i).dot(beta);
      SplitMix64 gen = rng::stream(cfg.seed, rng::tag("resp"), static_cast<std::uint64_t>(i));
      switch (cfg.model) {
        case ModelKind::linear: {
          std::normal_distribution<double> normal(0.0, 1.0);
          y(i) = eta + cfg.sigma * normal(gen);
          break;
        }
        case ModelKind::logit:
        case ModelKind::logit_interactions:
          y(i) = rng::uniform01(gen) < link_eval(logit, eta).mean ? 1.0 : 0.0;
          break;
        case ModelKind::cloglog:
          y(i) = rng::uniform01(gen) < link_eval(cll, eta).mean ? 1.0 : 0.0;
          break;
        case ModelKind::poisson: {
          if (eta > 30.0) {
            overflow = true;
            y(i) = 0.0;
            break;
          }
          std::poisson_distribution<long long> pois(std::exp(eta));
          y(i) = static_cast<double>(pois(gen));
          break;
        }
      }
    }
  }
  if (overflow)
    throw generation_error(
        "poisson mean overflow: a linear predictor exceeded 30; use smaller coefficients");
  return y;
}

Dataset make_dataset(const SimConfig& cfg) {
  Matrix cov = gen_covariates(cfg);
  Dataset data;
  if (cfg.model == ModelKind::logit_interactions) {
    data.X = interaction_expand(cov);
    data.column_names = {"intercept", "x1",    "x2",    "x3",
                         "x1*x2",     "x1*x3", "x2*x3", "x1*x2*x3"};
  } else {
    data.X.resize(cfg.n, cov.cols() + 1);
    data.X.col(0).setOnes();
    data.X.rightCols(cov.cols()) = cov;
    data.column_names = {"intercept"};
    for (Index j = 1; j <= cov.cols(); ++j) data.column_names.push_back("x" + std::to_string(j));
  }
  data.y = gen_response(data.X, cfg);
  return data;
}

Vector airline_beta(bool big_distance_beta) {
  Vector b(14);
  b << -2.3168,            // intercept
      -0.0074, 0.0024, -0.0952,                    // QUARTER2..4
      -0.1200, -0.1079, 0.0632, 0.0369, -0.2321, -0.1041,  // DOW2..7
      0.4678, 1.0978, 1.3058,                      // DepTimeBlk2..4
      big_distance_beta ? 5.87e-4 : 5.87e-5;       // DISTANCE
  return b;
}

Dataset gen_airline_like(const AirlineConfig& cfg) {
  if (cfg.months < 1 || cfg.rows_per_month < 1)
    throw config_error("airline generator needs months >= 1 and rows_per_month >= 1");
  const Index n = static_cast<Index>(cfg.months) * cfg.rows_per_month;
  const Vector beta = airline_beta(cfg.big_distance_beta);
  const GlmFamily logit = GlmFamily::make(Family::bernoulli, Link::logit);

  Dataset data;
  data.X.resize(n, 14);
  data.y.resize(n);
  data.column_names = {"intercept", "QUARTER2",    "QUARTER3",    "QUARTER4", "DOW2",
                       "DOW3",      "DOW4",        "DOW5",        "DOW6",     "DOW7",
                       "DepTimeBlk2", "DepTimeBlk3", "DepTimeBlk4", "DISTANCE"};
  KeyColumn month_key{"month", std::vector<std::int64_t>(static_cast<std::size_t>(n))};
  KeyColumn dow_key{"DayOfWeek", std::vector<std::int64_t>(static_cast<std::size_t>(n))};
  KeyColumn dtb_key{"DepTimeBlk", std::vector<std::int64_t>(static_cast<std::size_t>(n))};

  const int C = parallel::num_chunks(n);
  const int nt = parallel::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = parallel::chunk_range(n, c);
    for (Index i = lo; i < hi; ++i) {
      SplitMix64 gen = rng::stream(cfg.seed, rng::tag("air"), static_cast<std::uint64_t>(i));
      const int month = static_cast<int>(i / cfg.rows_per_month) + 1;
      const int calendar = (month - 1) % 12 + 1;
      const int quarter = (calendar - 1) / 3 + 1;
      const int dow = 1 + static_cast<int>(rng::bounded(gen, 7));
      const int dtb = 1 + static_cast<int>(rng::bounded(gen, 4));
      const double dist = 8.0 + rng::uniform01(gen) * (4983.0 - 8.0);

      data.X(i, 0) = 1.0;
      for (int q = 2; q <= 4; ++q) data.X(i, q - 1) = quarter == q ? 1.0 : 0.0;
      for (int w = 2; w <= 7; ++w) data.X(i, 2 + w) = dow == w ? 1.0 : 0.0;
      for (int t = 2; t <= 4; ++t) data.X(i, 8 + t) = dtb == t ? 1.0 : 0.0;
      data.X(i, 13) = dist;

      const double eta = data.X.row(i).dot(beta);
      data.y(i) = rng::uniform01(gen) < link_eval(logit, eta).mean ? 1.0 : 0.0;

      month_key.labels[static_cast<std::size_t>(i)] = month;
      dow_key.labels[static_cast<std::size_t>(i)] = dow;
      dtb_key.labels[static_cast<std::size_t>(i)] = dtb;
    }
  }
  data.keys = {std::move(month_key), std::move(dow_key), std::move(dtb_key)};
  return data;
}

PartitionSpec airline_partition(const Dataset& data, int distance_bins) {
  const KeyColumn* month = data.key("month");
  const KeyColumn* dow = data.key("DayOfWeek");
  const KeyColumn* dtb = data.key("DepTimeBlk");
  const int dist_col = data.column("DISTANCE");
  if (!month || !dow || !dtb || dist_col < 0)
    throw config_error("airline partition requires month/DayOfWeek/DepTimeBlk keys and DISTANCE");
  if (distance_bins < 1) throw config_error("distance_bins must be >= 1");

  const Index n = data.n_rows();
  // Distance is discretized month by month against that month's quantiles.
  std::map<std::int64_t, std::vector<Index>> by_month;
  for (Index i = 0; i < n; ++i) by_month[month->labels[static_cast<std::size_t>(i)]].push_back(i);

  std::vector<std::int64_t> dist_blk(static_cast<std::size_t>(n));
  for (const auto& [m, rows] : by_month) {
    Vector vals(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) vals(static_cast<Index>(i)) = data.X(rows[i], dist_col);
    const Discretized disc = discretize_column(vals, distance_bins);
    for (std::size_t i = 0; i < rows.size(); ++i)
      dist_blk[static_cast<std::size_t>(rows[i])] = disc.labels[i];
  }

  std::map<std::array<std::int64_t, 4>, std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    groups[{month->labels[idx], dow->labels[idx], dtb->labels[idx], dist_blk[idx]}].push_back(i);
  }

  PartitionSpec part;
  part.method = PartitionMethod::natural;
  part.n_rows = n;
  for (auto& [key, rows] : groups) part.blocks.push_back(std::move(rows));
  return part;
}

}  // namespace repglm
