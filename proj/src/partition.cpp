#include "repglm/partition.hpp"

#include "repglm/kernels.hpp"
#include "repglm/parallel.hpp"
#include "repglm/representatives.hpp"
#include "repglm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace repglm {

namespace {

std::vector<int> non_constant_columns(const Dataset& data) {
  std::vector<int> cols;
  for (Index j = 0; j < data.n_cols(); ++j) {
    const double first = data.X(0, j);
    for (Index i = 1; i < data.n_rows(); ++i) {
      if (data.X(i, j) != first) {
        cols.push_back(static_cast<int>(j));
        break;
      }
    }
  }
  return cols;
}

double sq_dist_row(const Matrix& A, Index i, const double* c, int q) {
  double d = 0;
  for (int j = 0; j < q; ++j) {
    const double t = A(i, j) - c[j];
    d += t * t;
  }
  return d;
}

}  // namespace

void PartitionSpec::validate(Index n) const {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Index total = 0;
  for (const auto& block : blocks) {
    if (block.empty()) throw config_error("partition contains an empty block");
    Index prev = -1;
    for (Index r : block) {
      if (r < 0 || r >= n) throw config_error("partition row index out of range");
      if (r <= prev) throw config_error("block rows not in ascending order");
      if (seen[static_cast<std::size_t>(r)]) throw config_error("row assigned to two blocks");
      seen[static_cast<std::size_t>(r)] = 1;
      prev = r;
      ++total;
    }
  }
  if (total != n) throw config_error("partition does not cover every row");
}

PartitionSpec equal_depth_partition(const Dataset& data, int bins, std::vector<int> columns,
                                    Index max_cells) {
  if (bins < 1) throw config_error("equal-depth bins must be >= 1");
  const Index n = data.n_rows();
  if (n == 0) throw config_error("empty dataset");
  if (columns.empty()) columns = non_constant_columns(data);
  if (columns.empty()) columns = {0};  // all-constant data: one cell
  for (int c : columns)
    if (c < 0 || c >= data.n_cols()) throw config_error("grid column out of range");

  // Cell-count cap before any work.
  double cells = 1;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    cells *= bins;
    if (cells > static_cast<double>(max_cells))
      throw config_error("equal-depth grid would have more than " + std::to_string(max_cells) +
                         " cells");
  }

  PartitionSpec part;
  part.method = PartitionMethod::equal_depth;
  part.n_rows = n;
  part.grid_columns = columns;

  // Nearest-rank cuts per column: the value at rank ceil(j*n/bins).
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (int c : columns) {
    for (Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = data.X(i, c);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    cuts.reserve(static_cast<std::size_t>(bins - 1));
    for (int j = 1; j < bins; ++j) {
      const auto rank = static_cast<std::size_t>(
          (static_cast<long long>(j) * n + bins - 1) / bins);  // ceil(j*n/bins)
      cuts.push_back(sorted[rank - 1]);
    }
    part.cut_points.push_back(std::move(cuts));
    part.column_range.emplace_back(sorted.front(), sorted.back());
  }

  // Mixed-radix cell key per row; ties (value == cut) fall to the lower cell
  // because the label counts cuts strictly below the value.
  std::unordered_map<std::int64_t, std::vector<Index>> cells_map;
  for (Index i = 0; i < n; ++i) {
    std::int64_t key = 0;
    for (std::size_t jc = 0; jc < columns.size(); ++jc) {
      const auto& cuts = part.cut_points[jc];
      const double v = data.X(i, columns[jc]);
      const auto label = static_cast<std::int64_t>(
          std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
      key = key * bins + label;
    }
    cells_map[key].push_back(i);
  }

  std::vector<std::int64_t> keys;
  keys.reserve(cells_map.size());
  for (const auto& [key, rows] : cells_map) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  for (std::int64_t key : keys) {
    part.blocks.push_back(std::move(cells_map[key]));
    std::vector<int> cell(columns.size());
    std::int64_t k = key;
    for (std::size_t jc = columns.size(); jc-- > 0;) {
      cell[jc] = static_cast<int>(k % bins);
      k /= bins;
    }
    part.cell_index.push_back(std::move(cell));
  }
  return part;
}

PartitionSpec kmeans_partition(const Dataset& data, int k, std::uint64_t seed, int max_iter,
                               std::vector<double>* wcss_trace) {
  const Index n = data.n_rows();
  if (n == 0) throw config_error("empty dataset");
  if (k < 1) throw config_error("k-means requires k >= 1");
  if (k > n) throw config_error("k-means requires k <= number of rows");

  std::vector<int> cols = non_constant_columns(data);
  if (cols.empty()) cols = {0};
  const int q = static_cast<int>(cols.size());

  // Compact row-major copy of the clustering columns.
  Matrix B(n, q);
  for (Index i = 0; i < n; ++i)
    for (int j = 0; j < q; ++j) B(i, j) = data.X(i, cols[j]);

  const int nt = parallel::max_threads();
  const int C = parallel::num_chunks(n);

  // --- k-means++ seeding ---------------------------------------------------
  Matrix centers(k, q);
  std::vector<double> mindist(static_cast<std::size_t>(n));
  SplitMix64 gen = rng::stream(seed, rng::tag("kmeans++"));

  const Index first = static_cast<Index>(rng::bounded(gen, static_cast<std::uint64_t>(n)));
  centers.row(0) = B.row(first);
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int c = 0; c < C; ++c) {
    auto [lo, hi] = parallel::chunk_range(n, c);
    for (Index i = lo; i < hi; ++i)
      mindist[static_cast<std::size_t>(i)] = sq_dist_row(B, i, centers.row(0).data(), q);
  }

  for (int kk = 1; kk < k; ++kk) {
    // Serial prefix walk keeps the choice independent of threading.
    double total = 0;
    for (Index i = 0; i < n; ++i) total += mindist[static_cast<std::size_t>(i)];
    Index chosen = -1;
    if (total > 0) {
      const double u = rng::uniform01(gen) * total;
      double acc = 0;
      for (Index i = 0; i < n; ++i) {
        acc += mindist[static_cast<std::size_t>(i)];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
      if (chosen < 0) chosen = n - 1;
    } else {
      // All remaining distances zero (duplicate rows): first unused row.
      chosen = 0;
      for (Index i = 0; i < n; ++i)
        if (mindist[static_cast<std::size_t>(i)] > 0 || i == n - 1) {
          chosen = i;
          break;
        }
    }
    centers.row(kk) = B.row(chosen);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int c = 0; c < C; ++c) {
      auto [lo, hi] = parallel::chunk_range(n, c);
      for (Index i = lo; i < hi; ++i) {
        const double d = sq_dist_row(B, i, centers.row(kk).data(), q);
        auto& m = mindist[static_cast<std::size_t>(i)];
        if (d < m) m = d;
      }
    }
  }

  // --- Lloyd iterations ----------------------------------------------------
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::vector<int> prev_labels;
  std::vector<Index> counts(static_cast<std::size_t>(k));

  auto assign_all = [&]() {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int c = 0; c < C; ++c) {
      auto [lo, hi] = parallel::chunk_range(n, c);
      for (Index i = lo; i < hi; ++i) {
        double best = sq_dist_row(B, i, centers.row(0).data(), q);
        int best_k = 0;
        for (int kk = 1; kk < k; ++kk) {
          const double d = sq_dist_row(B, i, centers.row(kk).data(), q);
          if (d < best) {  // strict: ties stay with the lower center index
            best = d;
            best_k = kk;
          }
        }
        labels[static_cast<std::size_t>(i)] = best_k;
        mindist[static_cast<std::size_t>(i)] = best;
      }
    }
    std::fill(counts.begin(), counts.end(), Index{0});
    for (Index i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    assign_all();

    // Empty clusters: reseed at the row farthest from its assigned center
    // (ties to the smaller row index), then reassign.
    for (int guard = 0; guard < k; ++guard) {
      int empty = -1;
      for (int kk = 0; kk < k; ++kk)
        if (counts[static_cast<std::size_t>(kk)] == 0) {
          empty = kk;
          break;
        }
      if (empty < 0) break;
      Index far_row = 0;
      double far_d = -1;
      for (Index i = 0; i < n; ++i)
        if (mindist[static_cast<std::size_t>(i)] > far_d) {
          far_d = mindist[static_cast<std::size_t>(i)];
          far_row = i;
        }
      centers.row(empty) = B.row(far_row);
      assign_all();
    }

    double wcss = 0;
    for (int c = 0; c < C; ++c) {
      auto [lo, hi] = parallel::chunk_range(n, c);
      double partial = 0;
      for (Index i = lo; i < hi; ++i) partial += mindist[static_cast<std::size_t>(i)];
      wcss += partial;
    }
    if (wcss_trace) wcss_trace->push_back(wcss);

    if (labels == prev_labels) break;
    prev_labels = labels;

    // Center update: per-chunk partial sums merged in chunk order.
    std::vector<Matrix> sums(C);
    std::vector<std::vector<Index>> cnts(C);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int c = 0; c < C; ++c) {
      auto [lo, hi] = parallel::chunk_range(n, c);
      sums[c] = Matrix::Zero(k, q);
      cnts[c].assign(static_cast<std::size_t>(k), 0);
      for (Index i = lo; i < hi; ++i) {
        const int kk = labels[static_cast<std::size_t>(i)];
        sums[c].row(kk) += B.row(i);
        ++cnts[c][static_cast<std::size_t>(kk)];
      }
    }
    Matrix total_sum = Matrix::Zero(k, q);
    std::vector<Index> total_cnt(static_cast<std::size_t>(k), 0);
    for (int c = 0; c < C; ++c) {
      total_sum += sums[c];
      for (int kk = 0; kk < k; ++kk) total_cnt[static_cast<std::size_t>(kk)] += cnts[c][static_cast<std::size_t>(kk)];
    }
    for (int kk = 0; kk < k; ++kk)
      if (total_cnt[static_cast<std::size_t>(kk)] > 0)
        centers.row(kk) = total_sum.row(kk) / static_cast<double>(total_cnt[static_cast<std::size_t>(kk)]);
  }

  PartitionSpec part;
  part.method = PartitionMethod::kmeans;
  part.n_rows = n;
  part.cluster_columns = cols;
  part.blocks.assign(static_cast<std::size_t>(k), {});
  for (Index i = 0; i < n; ++i)
    part.blocks[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
  // Drop empty clusters (possible only if the reseed guard ran out).
  std::vector<std::vector<Index>> kept;
  Matrix kept_centers(k, q);
  int kc = 0;
  for (int kk = 0; kk < k; ++kk) {
    if (part.blocks[static_cast<std::size_t>(kk)].empty()) continue;
    kept.push_back(std::move(part.blocks[static_cast<std::size_t>(kk)]));
    kept_centers.row(kc++) = centers.row(kk);
  }
  part.blocks = std::move(kept);
  part.centers = kept_centers.topRows(kc);
  return part;
}

PartitionSpec natural_partition(const Dataset& data, const std::vector<std::string>& key_names) {
  const Index n = data.n_rows();
  if (n == 0) throw config_error("empty dataset");
  if (key_names.empty()) throw config_error("natural partition requires at least one key");

  // Resolve each name: key column first, then predictor column.
  std::vector<const KeyColumn*> key_cols;
  std::vector<int> pred_cols;
  std::vector<bool> is_key;
  for (const auto& name : key_names) {
    if (const KeyColumn* k = data.key(name)) {
      key_cols.push_back(k);
      pred_cols.push_back(-1);
      is_key.push_back(true);
    } else {
      int c = data.column(name);
      if (c < 0) throw config_error("unknown partition key '" + name + "'");
      key_cols.push_back(nullptr);
      pred_cols.push_back(c);
      is_key.push_back(false);
    }
  }

  std::map<std::vector<double>, std::vector<Index>> groups;
  std::vector<double> tuple(key_names.size());
  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < key_names.size(); ++j)
      tuple[j] = is_key[j]
                     ? static_cast<double>(key_cols[j]->labels[static_cast<std::size_t>(i)])
                     : data.X(i, pred_cols[j]);
    groups[tuple].push_back(i);
  }

  PartitionSpec part;
  part.method = PartitionMethod::natural;
  part.n_rows = n;
  for (auto& [tup, rows] : groups) part.blocks.push_back(std::move(rows));
  return part;
}

PartitionSpec distinct_x_partition(const Dataset& data) {
  const Index n = data.n_rows();
  if (n == 0) throw config_error("empty dataset");
  std::map<std::vector<double>, std::vector<Index>> groups;
  std::vector<double> row(static_cast<std::size_t>(data.n_cols()));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < data.n_cols(); ++j) row[static_cast<std::size_t>(j)] = data.X(i, j);
    groups[row].push_back(i);
  }
  PartitionSpec part;
  part.method = PartitionMethod::by_distinct_x;
  part.n_rows = n;
  for (auto& [tup, rows] : groups) part.blocks.push_back(std::move(rows));
  return part;
}

Discretized discretize_column(const Vector& values, int bins) {
  if (bins < 1) throw config_error("discretize requires bins >= 1");
  const Index n = values.size();
  if (n == 0) throw config_error("discretize requires a non-empty column");
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());
  Discretized out;
  for (int j = 1; j < bins; ++j) {
    const auto rank =
        static_cast<std::size_t>((static_cast<long long>(j) * n + bins - 1) / bins);
    out.cuts.push_back(sorted[rank - 1]);
  }
  out.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    out.labels[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
        std::lower_bound(out.cuts.begin(), out.cuts.end(), values(i)) - out.cuts.begin());
  return out;
}

BlockGeometry block_geometry(const Dataset& data, const PartitionSpec& part,
                             const RepresentativeSet* reps, Index exact_limit) {
  const auto n_blocks = static_cast<int>(part.n_blocks());
  BlockGeometry geo;
  geo.delta.assign(static_cast<std::size_t>(n_blocks), 0.0);
  geo.exact.assign(static_cast<std::size_t>(n_blocks), 1);
  const int nt = parallel::max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int b = 0; b < n_blocks; ++b) {
    const auto& rows = part.blocks[static_cast<std::size_t>(b)];
    const auto nk = static_cast<Index>(rows.size());
    if (nk <= 1) continue;
    if (nk <= exact_limit) {
      double best = 0;
      for (Index a = 0; a < nk; ++a)
        for (Index c = a + 1; c < nk; ++c) {
          const double d = (data.X.row(rows[static_cast<std::size_t>(a)]) -
                            data.X.row(rows[static_cast<std::size_t>(c)]))
                               .squaredNorm();
          if (d > best) best = d;
        }
      geo.delta[static_cast<std::size_t>(b)] = std::sqrt(best);
    } else {
      // 2-approximation: twice the largest distance to the centroid.
      Vector centroid = Vector::Zero(data.n_cols());
      for (Index r : rows) centroid += data.X.row(r).transpose();
      centroid /= static_cast<double>(nk);
      double best = 0;
      for (Index r : rows) {
        const double d = (data.X.row(r).transpose() - centroid).squaredNorm();
        if (d > best) best = d;
      }
      geo.delta[static_cast<std::size_t>(b)] = 2.0 * std::sqrt(best);
      geo.exact[static_cast<std::size_t>(b)] = 0;
    }
  }

  geo.max_delta = 0;
  geo.bound_statistic = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const double d = geo.delta[static_cast<std::size_t>(b)];
    geo.max_delta = std::max(geo.max_delta, d);
    geo.bound_statistic += static_cast<double>(part.blocks[static_cast<std::size_t>(b)].size()) * d * d;
  }

  if (reps) {
    double far = 0;
    for (std::size_t r = 0; r < reps->rows.size(); ++r)
      for (Index i : reps->rows[r])
        far = std::max(far,
                       (data.X.row(i) - reps->data.X.row(static_cast<Index>(r))).norm());
    geo.max_rep_distance = far;
  }
  return geo;
}

void write_partition(const std::string& path, const PartitionSpec& part) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open " + path + " for writing");
  std::fputs("row,block\n", f);
  for (std::size_t b = 0; b < part.blocks.size(); ++b)
    for (Index r : part.blocks[b])
      std::fprintf(f, "%lld,%zu\n", static_cast<long long>(r), b);
  std::fclose(f);
}

PartitionSpec read_partition(const std::string& path, Index n_rows) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "row,block") throw io_error(path + ": expected header 'row,block'");

  std::map<std::int64_t, std::vector<Index>> blocks;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    long long row = 0, block = 0;
    if (std::sscanf(line.c_str(), "%lld,%lld", &row, &block) != 2)
      throw io_error(path + ": line " + std::to_string(line_no) + ": expected 'row,block'");
    blocks[block].push_back(static_cast<Index>(row));
  }

  PartitionSpec part;
  part.method = PartitionMethod::natural;
  part.n_rows = n_rows;
  for (auto& [id, rows] : blocks) {
    std::sort(rows.begin(), rows.end());
    part.blocks.push_back(std::move(rows));
  }
  part.validate(n_rows);
  return part;
}

}  // namespace repglm
