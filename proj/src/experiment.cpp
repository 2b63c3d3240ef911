#include "repglm/experiment.hpp"

#include "repglm/baselines.hpp"
#include "repglm/partition.hpp"
#include "repglm/representatives.hpp"
#include "repglm/rng.hpp"
#include "repglm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace repglm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t sub_seed(std::uint64_t master, std::uint64_t replication, const char* what) {
  return rng::stream(master, rng::tag(what), replication)();
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void append_csv_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

double rmse(const Vector& a, const Vector& b, bool include_intercept) {
  if (a.size() != b.size()) throw config_error("rmse requires equal-length vectors");
  const Index from = include_intercept ? 0 : 1;
  if (a.size() <= from) throw config_error("rmse has no coordinates to average");
  double s = 0;
  for (Index j = from; j < a.size(); ++j) s += (a(j) - b(j)) * (a(j) - b(j));
  return std::sqrt(s / static_cast<double>(a.size() - from));
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (section.empty())
      throw config_error("config line " + std::to_string(line_no) +
                         ": key outside any [section]");
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("config line " + std::to_string(line_no) + ": empty key");
    cfg.values[section][key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  auto s = values.find(section);
  return s != values.end() && s->second.count(key) > 0;
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
  auto s = values.find(section);
  if (s == values.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

long ExperimentConfig::get_int(const std::string& section, const std::string& key,
                               long fallback) const {
  const std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stol(v);
  } catch (...) {
    throw config_error("config value " + section + "." + key + " is not an integer: " + v);
  }
}

double ExperimentConfig::get_double(const std::string& section, const std::string& key,
                                    double fallback) const {
  const std::string v = get(section, key);
  if (v.empty()) return fallback;
  try {
    return std::stod(v);
  } catch (...) {
    throw config_error("config value " + section + "." + key + " is not a number: " + v);
  }
}

bool ExperimentConfig::get_bool(const std::string& section, const std::string& key,
                                bool fallback) const {
  const std::string v = get(section, key);
  if (v.empty()) return fallback;
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw config_error("config value " + section + "." + key + " is not a flag: " + v);
}

const MethodSummary* ExperimentReport::summary(const std::string& method) const {
  for (const auto& s : summaries)
    if (s.method == method) return &s;
  return nullptr;
}

namespace {

struct ReplicationSetup {
  Dataset data;
  PartitionSpec part;
  GlmFamily fam = GlmFamily::make(Family::normal, Link::identity);
  Vector true_beta;  // empty when unknown
};

ReplicationSetup build_replication(const ExperimentConfig& cfg, std::uint64_t master_seed,
                                   int replication) {
  ReplicationSetup s;
  const std::string design = cfg.get("data", "design", "mzNormal");
  const std::uint64_t data_seed = sub_seed(master_seed, static_cast<std::uint64_t>(replication), "data");

  if (design == "csv") {
    s.data = read_csv_dataset(cfg.get("data", "csv"));
    s.fam = GlmFamily::from_name(cfg.get("data", "family", "logit"));
    if (cfg.has("data", "beta")) {
      auto parts = split_list(cfg.get("data", "beta"));
      s.true_beta.resize(static_cast<Index>(parts.size()));
      for (std::size_t j = 0; j < parts.size(); ++j) s.true_beta(static_cast<Index>(j)) = std::stod(parts[j]);
    }
  } else if (design == "airline") {
    AirlineConfig ac;
    ac.months = static_cast<int>(cfg.get_int("data", "months", 12));
    ac.rows_per_month = cfg.get_int("data", "rows_per_month", 1000);
    ac.big_distance_beta = cfg.get_bool("data", "big_distance_beta", false);
    ac.seed = data_seed;
    s.data = gen_airline_like(ac);
    s.fam = GlmFamily::from_name("logit");
    s.true_beta = airline_beta(ac.big_distance_beta);
  } else {
    SimConfig sc;
    sc.dist = cov_design_from_name(design);
    sc.model = model_from_name(cfg.get("data", "model", "logit"));
    sc.n = cfg.get_int("data", "n", 100000);
    sc.d = static_cast<int>(cfg.get_int("data", "d", 7));
    sc.sigma = cfg.get_double("data", "sigma", 1.0);
    sc.seed = data_seed;
    if (cfg.has("data", "beta")) {
      auto parts = split_list(cfg.get("data", "beta"));
      sc.beta.resize(static_cast<Index>(parts.size()));
      for (std::size_t j = 0; j < parts.size(); ++j) sc.beta(static_cast<Index>(j)) = std::stod(parts[j]);
    }
    s.data = make_dataset(sc);
    s.true_beta = sc.beta.size() ? sc.beta : default_beta(sc);
    switch (sc.model) {
      case ModelKind::linear: s.fam = GlmFamily::from_name("linear"); break;
      case ModelKind::cloglog: s.fam = GlmFamily::from_name("cloglog"); break;
      case ModelKind::poisson: s.fam = GlmFamily::from_name("poisson"); break;
      default: s.fam = GlmFamily::from_name("logit"); break;
    }
  }

  const std::uint64_t part_seed = sub_seed(master_seed, static_cast<std::uint64_t>(replication), "part");
  const std::string pmethod =
      cfg.get("partition", "method", design == "airline" ? "airline-keys" : "kmeans");
  if (design == "airline" || pmethod == "airline-keys") {
    s.part = airline_partition(s.data, static_cast<int>(cfg.get_int("partition", "distance_bins", 8)));
  } else if (pmethod == "kmeans") {
    s.part = kmeans_partition(s.data, static_cast<int>(cfg.get_int("partition", "k", 200)), part_seed,
                              static_cast<int>(cfg.get_int("partition", "max_iter", 25)));
  } else if (pmethod == "equal-depth") {
    std::vector<int> cols;
    for (const auto& name : split_list(cfg.get("partition", "columns"))) {
      const int c = s.data.column(name);
      if (c < 0) throw config_error("unknown partition column '" + name + "'");
      cols.push_back(c);
    }
    s.part = equal_depth_partition(s.data, static_cast<int>(cfg.get_int("partition", "bins", 4)), cols);
  } else if (pmethod == "natural") {
    s.part = natural_partition(s.data, split_list(cfg.get("partition", "columns")));
  } else if (pmethod == "distinct-x") {
    s.part = distinct_x_partition(s.data);
  } else {
    throw config_error("unknown partition method: " + pmethod);
  }
  return s;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const int replications = static_cast<int>(cfg.get_int("experiment", "replications", 1));
  if (replications < 0) throw config_error("replications must be >= 0");
  const auto master_seed = static_cast<std::uint64_t>(cfg.get_int("experiment", "seed", 0));
  const bool timing = cfg.get_bool("experiment", "timing", true);
  const bool include_intercept = cfg.get_bool("experiment", "include_intercept", false);
  const int smr_iters = static_cast<int>(cfg.get_int("smr", "iterations", 3));
  const int dc_blocks = static_cast<int>(cfg.get_int("dc", "blocks", 100));

  std::vector<std::string> methods = split_list(cfg.get("experiment", "methods", "full,mr,smr"));
  for (const auto& m : methods)
    if (m != "full" && m != "mr" && m != "smr" && m != "dc" && m != "median" && m != "midpoint")
      throw config_error("unknown method: " + m);

  ExperimentReport report;

  for (int rep = 0; rep < replications; ++rep) {
    ReplicationSetup setup = build_replication(cfg, master_seed, rep);

    // The full-data fit anchors the from-full column for every method.
    const auto t_full = std::chrono::steady_clock::now();
    FitResult full = full_fit(setup.data, setup.fam);
    const double full_seconds = elapsed_seconds(t_full);

    auto error_columns = [&](const Vector& beta, ExperimentRow& row) {
      row.rmse_true = setup.true_beta.size() && setup.true_beta.size() == beta.size()
                          ? rmse(setup.true_beta, beta, include_intercept)
                          : kNaN;
      row.rmse_full = rmse(full.beta, beta, include_intercept);
    };

    for (const auto& method : methods) {
      ExperimentRow row;
      row.replication = rep;
      row.method = method;

      if (method == "full") {
        row.rmse_true = setup.true_beta.size() && setup.true_beta.size() == full.beta.size()
                            ? rmse(setup.true_beta, full.beta, include_intercept)
                            : kNaN;
        row.rmse_full = kNaN;
        row.fit_seconds = full_seconds;
        row.k_used = setup.data.n_rows();
      } else if (method == "mr" || method == "smr") {
        SmrOptions so;
        so.iterations = method == "mr" ? 0 : smr_iters;
        const auto t0 = std::chrono::steady_clock::now();
        SmrResult r = smr_fit(setup.data, setup.part, setup.fam, so);
        row.fit_seconds = elapsed_seconds(t0);
        error_columns(r.fit.beta, row);
        row.k_used = r.history.empty() ? static_cast<Index>(setup.part.n_blocks())
                                       : r.history.back().size();
        row.fallbacks = r.total_fallbacks;
      } else if (method == "dc") {
        const std::uint64_t dc_seed = sub_seed(master_seed, static_cast<std::uint64_t>(rep), "dc");
        const auto t0 = std::chrono::steady_clock::now();
        DcResult r = dc_fit(setup.data, setup.fam, dc_blocks, dc_seed);
        row.fit_seconds = elapsed_seconds(t0);
        error_columns(r.fit.beta, row);
        row.k_used = r.blocks_used;
        row.fallbacks = r.blocks_dropped;
      } else {  // median / midpoint
        const auto t0 = std::chrono::steady_clock::now();
        RepresentativeSet reps = method == "median"
                                     ? median_representatives(setup.data, setup.part)
                                     : midpoint_representatives(setup.data, setup.part);
        FitResult f = fisher_scoring_fit(reps.data, setup.fam);
        row.fit_seconds = elapsed_seconds(t0);
        error_columns(f.beta, row);
        row.k_used = reps.size();
      }

      if (!timing) row.fit_seconds = 0;
      report.rows.push_back(std::move(row));
    }
  }

  // Per-method summaries (sample standard deviation; 0 for one replication).
  for (const auto& method : methods) {
    MethodSummary s;
    s.method = method;
    std::vector<double> vt, vf, secs, ks, fbs;
    for (const auto& row : report.rows)
      if (row.method == method) {
        vt.push_back(row.rmse_true);
        vf.push_back(row.rmse_full);
        secs.push_back(row.fit_seconds);
        ks.push_back(static_cast<double>(row.k_used));
        fbs.push_back(row.fallbacks);
      }
    auto mean_of = [](const std::vector<double>& v) {
      if (v.empty()) return kNaN;
      double m = 0;
      for (double x : v) m += x;
      return m / static_cast<double>(v.size());
    };
    auto sd_of = [&](const std::vector<double>& v, double m) {
      if (v.size() < 2) return 0.0;
      double s2 = 0;
      for (double x : v) s2 += (x - m) * (x - m);
      return std::sqrt(s2 / static_cast<double>(v.size() - 1));
    };
    s.mean_rmse_true = mean_of(vt);
    s.sd_rmse_true = sd_of(vt, s.mean_rmse_true);
    s.mean_rmse_full = mean_of(vf);
    s.sd_rmse_full = sd_of(vf, s.mean_rmse_full);
    s.mean_seconds = mean_of(secs);
    s.mean_k = mean_of(ks);
    s.mean_fallbacks = mean_of(fbs);
    report.summaries.push_back(std::move(s));
  }
  return report;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::string out = "replication,method,rmse_true,rmse_full,fit_seconds,k_used,fallbacks\n";
  for (const auto& row : report.rows) {
    out += std::to_string(row.replication);
    out += ',';
    out += row.method;
    out += ',';
    append_csv_value(out, row.rmse_true);
    out += ',';
    append_csv_value(out, row.rmse_full);
    out += ',';
    append_csv_value(out, row.fit_seconds);
    out += ',';
    out += std::to_string(row.k_used);
    out += ',';
    out += std::to_string(row.fallbacks);
    out += '\n';
  }
  for (const auto& s : report.summaries) {
    for (const char* what : {"mean", "sd"}) {
      out += what;
      out += ',';
      out += s.method;
      out += ',';
      append_csv_value(out, std::string(what) == "mean" ? s.mean_rmse_true : s.sd_rmse_true);
      out += ',';
      append_csv_value(out, std::string(what) == "mean" ? s.mean_rmse_full : s.sd_rmse_full);
      out += ',';
      append_csv_value(out, std::string(what) == "mean" ? s.mean_seconds : 0.0);
      out += ',';
      append_csv_value(out, std::string(what) == "mean" ? s.mean_k : 0.0);
      out += ',';
      append_csv_value(out, std::string(what) == "mean" ? s.mean_fallbacks : 0.0);
      out += '\n';
    }
  }
  return out;
}

void write_report_csv(const std::string& path, const ExperimentReport& report) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open " + path + " for writing");
  const std::string csv = report_to_csv(report);
  std::fwrite(csv.data(), 1, csv.size(), f);
  std::fclose(f);
}

}  // namespace repglm
