// Microbenchmark comparing the serial reference kernels against the
// OpenMP-parallel ones.  Both share the same fixed-chunk reduction tree, so
// this also spot-checks that their outputs agree bitwise.
#include "repglm/kernels.hpp"
#include "repglm/parallel.hpp"
#include "repglm/partition.hpp"
#include "repglm/representatives.hpp"
#include "repglm/simgen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace repglm;

double median_seconds(const std::function<void()>& body, int repeats) {
  body();  // warm-up
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void report_row(const std::string& name, double serial_s, double parallel_s, bool bit_equal) {
  std::printf("%-24s %12.4f ms %12.4f ms %8.2fx   %s\n", name.c_str(), serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s, bit_equal ? "bit-equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  std::int64_t n = 200000;
  int d = 7, repeats = 5, threads = 0, blocks = 200;
  app.add_option("--n", n, "rows");
  app.add_option("--d", d, "covariates");
  app.add_option("--repeats", repeats, "timed repetitions (median reported)");
  app.add_option("--threads", threads, "parallel thread count (default: all)");
  app.add_option("--blocks", blocks, "kmeans block count for the representative pass");
  CLI11_PARSE(app, argc, argv);

  SimConfig sc;
  sc.dist = CovDesign::mzNormal;
  sc.model = ModelKind::logit;
  sc.n = n;
  sc.d = d;
  sc.seed = 42;
  const Dataset data = make_dataset(sc);
  const GlmFamily fam = GlmFamily::make(Family::bernoulli, Link::logit);
  Vector beta = Vector::Zero(data.n_cols());
  beta(1) = 0.5;

  const int parallel_threads = threads > 0 ? threads : parallel::max_threads();
  parallel::set_max_threads(1);  // serial bodies run first in each pair
  std::printf("n=%lld d=%d threads(parallel)=%d repeats=%d\n",
              static_cast<long long>(n), d, parallel_threads, repeats);
  std::printf("%-24s %15s %15s %9s\n", "kernel", "serial", "parallel", "speedup");

  Vector eta_s(data.n_rows()), eta_p(data.n_rows());
  {
    const double ts = median_seconds(
        [&] { kernels::serial::linear_predictor(data.X, beta, eta_s); }, repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp = median_seconds(
        [&] { kernels::omp::linear_predictor(data.X, beta, eta_p); }, repeats);
    parallel::set_max_threads(1);
    report_row("linear_predictor", ts, tp, eta_s == eta_p);
  }

  {
    kernels::ScoreInfo si_s, si_p;
    const double ts = median_seconds(
        [&] { si_s = kernels::serial::score_info(data.X, data.y, nullptr, fam, beta); }, repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp = median_seconds(
        [&] { si_p = kernels::omp::score_info(data.X, data.y, nullptr, fam, beta); }, repeats);
    parallel::set_max_threads(1);
    report_row("score_info (logit)", ts, tp,
               si_s.score == si_p.score && si_s.info == si_p.info);
  }

  {
    Matrix xtwx_s, xtwx_p;
    Vector xtwy_s, xtwy_p;
    const double ts = median_seconds(
        [&] { kernels::serial::normal_equations(data.X, data.y, nullptr, xtwx_s, xtwy_s); },
        repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp = median_seconds(
        [&] { kernels::omp::normal_equations(data.X, data.y, nullptr, xtwx_p, xtwy_p); }, repeats);
    parallel::set_max_threads(1);
    report_row("normal_equations", ts, tp, xtwx_s == xtwx_p && xtwy_s == xtwy_p);
  }

  {
    PartitionSpec part_s, part_p;
    const double ts =
        median_seconds([&] { part_s = kmeans_partition(data, blocks, 7); }, repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp =
        median_seconds([&] { part_p = kmeans_partition(data, blocks, 7); }, repeats);
    parallel::set_max_threads(1);
    report_row("kmeans_partition", ts, tp, part_s.blocks == part_p.blocks);

    RepresentativeSet reps_s, reps_p;
    const double ts2 = median_seconds(
        [&] { reps_s = smr_representatives(data, part_s, fam, beta); }, repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp2 = median_seconds(
        [&] { reps_p = smr_representatives(data, part_p, fam, beta); }, repeats);
    parallel::set_max_threads(1);
    report_row("smr_representatives", ts2, tp2,
               reps_s.data.X == reps_p.data.X && reps_s.data.y == reps_p.data.y);
  }

  {
    SimConfig gen = sc;
    const double ts = median_seconds([&] { (void)gen_covariates(gen); }, repeats);
    parallel::set_max_threads(parallel_threads);
    const double tp = median_seconds([&] { (void)gen_covariates(gen); }, repeats);
    parallel::set_max_threads(1);
    Matrix a, b;
    {
      a = gen_covariates(gen);
      parallel::set_max_threads(parallel_threads);
      b = gen_covariates(gen);
      parallel::set_max_threads(1);
    }
    report_row("gen_covariates", ts, tp, a == b);
  }

  parallel::set_max_threads(parallel_threads);
  return 0;
}
