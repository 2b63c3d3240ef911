// Command-line front end: simulate data, build partitions, fit models,
// run benchmark configs and the distributed-traffic simulation.
#include "repglm/baselines.hpp"
#include "repglm/data.hpp"
#include "repglm/distsim.hpp"
#include "repglm/experiment.hpp"
#include "repglm/parallel.hpp"
#include "repglm/partition.hpp"
#include "repglm/representatives.hpp"
#include "repglm/rng.hpp"
#include "repglm/simgen.hpp"
#include "repglm/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace repglm;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// Partition specs on the command line: `equal-depth:BINS[:col,col,...]`,
// `kmeans:K`, `natural:col,col,...`, `distinct-x`, `airline-keys[:BINS]`.
PartitionSpec build_partition(const Dataset& data, const std::string& spec, std::uint64_t seed) {
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (kind == "equal-depth") {
    const std::size_t colon2 = rest.find(':');
    const int bins = std::stoi(rest.substr(0, colon2));
    std::vector<int> cols;
    if (colon2 != std::string::npos)
      for (const auto& name : split_csv(rest.substr(colon2 + 1))) {
        const int c = data.column(name);
        if (c < 0) throw config_error("unknown column '" + name + "'");
        cols.push_back(c);
      }
    return equal_depth_partition(data, bins, cols);
  }
  if (kind == "kmeans") return kmeans_partition(data, std::stoi(rest), seed);
  if (kind == "natural") return natural_partition(data, split_csv(rest));
  if (kind == "distinct-x") return distinct_x_partition(data);
  if (kind == "airline-keys") return airline_partition(data, rest.empty() ? 8 : std::stoi(rest));
  throw config_error("unknown partition spec '" + spec + "'");
}

json fit_to_json(const FitResult& fit, const Dataset& data) {
  json j;
  j["beta"] = std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size());
  j["column_names"] = data.column_names;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["final_score_norm"] = fit.final_score_norm;
  j["ill_conditioned"] = fit.ill_conditioned;
  j["n"] = data.n_rows();
  j["p"] = data.n_cols();
  return j;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw io_error("cannot open " + out_path + " for writing");
    out << j.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"representative-point GLM fitting for block-partitioned data"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "max worker threads (default: all)");

  // --- simulate -------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  std::string sim_dist = "mzNormal", sim_model = "logit", sim_beta, sim_out;
  std::int64_t sim_n = 100000, sim_rpm = 1000;
  int sim_d = 7, sim_months = 12;
  double sim_sigma = 1.0;
  std::uint64_t sim_seed = 0;
  bool sim_big_beta = false;
  sim->add_option("--dist", sim_dist,
                  "mzNormal|nzNormal|ueNormal|mixNormal|T3|EXP|BETA|airline");
  sim->add_option("--n", sim_n, "rows");
  sim->add_option("--d", sim_d, "covariates");
  sim->add_option("--model", sim_model, "linear|logit|cloglog|poisson|logit-interactions");
  sim->add_option("--beta", sim_beta, "true coefficients, comma-separated");
  sim->add_option("--sigma", sim_sigma, "linear-model noise sd");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--months", sim_months, "airline: number of month files");
  sim->add_option("--rows-per-month", sim_rpm, "airline: rows per month");
  sim->add_flag("--big-distance-beta", sim_big_beta, "airline: x10 DISTANCE coefficient");
  sim->add_option("--out", sim_out, "output CSV path")->required();

  // --- partition ------------------------------------------------------------
  auto* part_cmd = app.add_subcommand("partition", "partition a dataset into blocks");
  std::string part_data, part_spec, part_out, part_disc;
  std::uint64_t part_seed = 0;
  part_cmd->add_option("--data", part_data, "input CSV")->required();
  part_cmd->add_option("--partition", part_spec,
                       "equal-depth:BINS[:cols]|kmeans:K|natural:cols|distinct-x|airline-keys[:BINS]")
      ->required();
  part_cmd->add_option("--discretize", part_disc,
                       "col:bins - derive a key column from a numeric column first");
  part_cmd->add_option("--seed", part_seed, "RNG seed (kmeans)");
  part_cmd->add_option("--out", part_out, "output partition file")->required();

  // --- fit ------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "fit coefficients to a dataset");
  std::string fit_data, fit_family = "logit", fit_method = "smr", fit_spec, fit_part_file, fit_out;
  int fit_iters = 3, fit_dc_blocks = 100;
  std::uint64_t fit_seed = 0;
  fit_cmd->add_option("--data", fit_data, "input CSV")->required();
  fit_cmd->add_option("--family", fit_family,
                      "linear|logit|probit|cloglog|loglog|cauchit|poisson|gamma|invgauss");
  fit_cmd->add_option("--method", fit_method, "full|mr|smr|median|midpoint|dc");
  fit_cmd->add_option("--partition", fit_spec, "partition spec (see partition command)");
  fit_cmd->add_option("--partition-file", fit_part_file, "previously written partition file");
  fit_cmd->add_option("--iterations", fit_iters, "score-matching passes");
  fit_cmd->add_option("--dc-blocks", fit_dc_blocks, "divide-and-conquer block count");
  fit_cmd->add_option("--seed", fit_seed, "RNG seed (kmeans partition / dc shuffle)");
  fit_cmd->add_option("--out", fit_out, "write the JSON report here instead of stdout");

  // --- bench ----------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "run a replicated experiment config");
  std::string bench_config, bench_out;
  bench_cmd->add_option("--config", bench_config, "experiment config file")->required();
  bench_cmd->add_option("--out", bench_out, "report CSV (default: [output] csv in the config)");

  // --- distsim --------------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("distsim", "simulate the distributed fit and its traffic");
  std::string ds_data, ds_spec, ds_family = "logit", ds_out;
  int ds_nodes = 4, ds_iters = 3;
  std::uint64_t ds_seed = 0;
  dist_cmd->add_option("--data", ds_data, "input CSV")->required();
  dist_cmd->add_option("--partition", ds_spec, "partition spec")->required();
  dist_cmd->add_option("--nodes", ds_nodes, "number of simulated nodes");
  dist_cmd->add_option("--family", ds_family, "model family");
  dist_cmd->add_option("--iterations", ds_iters, "score-matching rounds");
  dist_cmd->add_option("--seed", ds_seed, "RNG seed (kmeans partition)");
  dist_cmd->add_option("--out", ds_out, "traffic CSV path");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) parallel::set_max_threads(threads);

  try {
    if (sim->parsed()) {
      if (sim_dist == "airline") {
        AirlineConfig ac;
        ac.months = sim_months;
        ac.rows_per_month = sim_rpm;
        ac.big_distance_beta = sim_big_beta;
        ac.seed = sim_seed;
        write_csv_dataset(sim_out, gen_airline_like(ac));
      } else {
        SimConfig sc;
        sc.dist = cov_design_from_name(sim_dist);
        sc.model = model_from_name(sim_model);
        sc.n = sim_n;
        sc.d = sim_d;
        sc.sigma = sim_sigma;
        sc.seed = sim_seed;
        if (!sim_beta.empty()) {
          auto parts = split_csv(sim_beta);
          sc.beta.resize(static_cast<Index>(parts.size()));
          for (std::size_t i = 0; i < parts.size(); ++i) sc.beta(static_cast<Index>(i)) = std::stod(parts[i]);
        }
        write_csv_dataset(sim_out, make_dataset(sc));
      }
      return 0;
    }

    if (part_cmd->parsed()) {
      Dataset data = read_csv_dataset(part_data);
      if (!part_disc.empty()) {
        const std::size_t colon = part_disc.find(':');
        if (colon == std::string::npos) throw config_error("--discretize expects col:bins");
        const std::string col = part_disc.substr(0, colon);
        const int bins = std::stoi(part_disc.substr(colon + 1));
        const int c = data.column(col);
        if (c < 0) throw config_error("unknown column '" + col + "'");
        Discretized disc = discretize_column(Vector(data.X.col(c)), bins);
        data.keys.push_back(KeyColumn{col + "_blk", std::move(disc.labels)});
      }
      PartitionSpec part = build_partition(data, part_spec, part_seed);
      write_partition(part_out, part);
      std::cout << "wrote " << part.n_blocks() << " blocks for " << data.n_rows() << " rows to "
                << part_out << "\n";
      return 0;
    }

    if (fit_cmd->parsed()) {
      Dataset data = read_csv_dataset(fit_data);
      const GlmFamily fam = GlmFamily::from_name(fit_family);
      json j;
      FitResult fit;

      if (fit_method == "full") {
        fit = full_fit(data, fam);
        j = fit_to_json(fit, data);
      } else if (fit_method == "dc") {
        DcResult r = dc_fit(data, fam, fit_dc_blocks, fit_seed);
        fit = r.fit;
        j = fit_to_json(fit, data);
        j["blocks_used"] = r.blocks_used;
        j["blocks_dropped"] = r.blocks_dropped;
      } else {
        PartitionSpec part;
        if (!fit_part_file.empty())
          part = read_partition(fit_part_file, data.n_rows());
        else if (!fit_spec.empty())
          part = build_partition(data, fit_spec, fit_seed);
        else
          throw config_error("method '" + fit_method +
                             "' needs --partition or --partition-file");

        if (fit_method == "mr" || fit_method == "smr") {
          SmrOptions so;
          so.iterations = fit_method == "mr" ? 0 : fit_iters;
          SmrResult r = smr_fit(data, part, fam, so);
          fit = r.fit;
          j = fit_to_json(fit, data);
          j["representatives"] = r.history.empty() ? 0 : static_cast<long long>(r.history.back().size());
          j["fallbacks"] = r.total_fallbacks;
          int brackets = 0;
          for (const auto& h : r.history) brackets += h.bracket_failures;
          j["bracket_failures"] = brackets;
        } else if (fit_method == "median" || fit_method == "midpoint") {
          RepresentativeSet reps = fit_method == "median" ? median_representatives(data, part)
                                                          : midpoint_representatives(data, part);
          fit = fisher_scoring_fit(reps.data, fam);
          j = fit_to_json(fit, data);
          j["representatives"] = static_cast<long long>(reps.size());
        } else {
          throw config_error("unknown method '" + fit_method + "'");
        }
        j["blocks"] = static_cast<long long>(part.n_blocks());
      }
      j["method"] = fit_method;
      j["family"] = fam.name();
      emit(j, fit_out);
      return fit.converged ? 0 : 2;
    }

    if (bench_cmd->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_file(bench_config);
      ExperimentReport report = run_experiment(cfg);
      const std::string out = bench_out.empty() ? cfg.get("output", "csv") : bench_out;
      if (out.empty())
        std::cout << report_to_csv(report);
      else
        write_report_csv(out, report);
      return 0;
    }

    if (dist_cmd->parsed()) {
      Dataset data = read_csv_dataset(ds_data);
      PartitionSpec part = build_partition(data, ds_spec, ds_seed);
      SmrOptions so;
      so.iterations = ds_iters;
      DistributedResult r =
          distributed_smr(shard_dataset(data, part, ds_nodes), GlmFamily::from_name(ds_family), so);
      if (!ds_out.empty()) write_traffic_csv(ds_out, r.traffic);
      json j = fit_to_json(r.fit, data);
      j["total_words"] = r.traffic.total_words;
      j["raw_shuffle_words"] = r.traffic.raw_shuffle_words;
      j["nodes_used"] = r.traffic.nodes_used;
      j["nodes_excluded"] = r.traffic.nodes_excluded;
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
