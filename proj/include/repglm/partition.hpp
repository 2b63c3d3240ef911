#pragma once

#include "repglm/data.hpp"
#include "repglm/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repglm {

struct RepresentativeSet;  // representatives.hpp

enum class PartitionMethod { equal_depth, kmeans, natural, by_distinct_x };

// A disjoint cover of the row indices 0..n_rows-1.  Blocks are emitted in a
// deterministic order (grid cell order, cluster index, sorted key tuples)
// and each block lists its rows in ascending order.
struct PartitionSpec {
  PartitionMethod method = PartitionMethod::natural;
  std::vector<std::vector<Index>> blocks;
  Index n_rows = 0;

  // Equal-depth bookkeeping: which dataset columns span the grid, the
  // per-column cut points, per-column observed min/max (for midpoint cells)
  // and each block's cell coordinates.
  std::vector<int> grid_columns;
  std::vector<std::vector<double>> cut_points;
  std::vector<std::pair<double, double>> column_range;
  std::vector<std::vector<int>> cell_index;

  // K-means bookkeeping: final centers (rows) over cluster_columns.
  Matrix centers;
  std::vector<int> cluster_columns;

  std::size_t n_blocks() const { return blocks.size(); }
  // Throws config_error unless the blocks exactly cover 0..n-1 without
  // overlap and each block is sorted ascending.
  void validate(Index n) const;
};

// Per-axis equal-depth (quantile) grid over the given predictor columns
// (default: every non-constant column).  Cut points sit at the nearest-rank
// quantiles j/bins; a value equal to a cut goes to the lower cell.  Empty
// cells are dropped.  Throws config_error when bins^columns would exceed
// max_cells.
PartitionSpec equal_depth_partition(const Dataset& data, int bins,
                                    std::vector<int> columns = {},
                                    Index max_cells = 1000000);

// Lloyd's algorithm with k-means++ seeding on the non-constant predictor
// columns (the intercept is constant and carries no distance information).
// Deterministic for a fixed seed: ties in assignment go to the lower center
// index, empty clusters are reseeded at the point farthest from its current
// center, per-chunk partial sums merge in fixed order.  If wcss_trace is
// given it receives the objective after every iteration (non-increasing).
PartitionSpec kmeans_partition(const Dataset& data, int k, std::uint64_t seed, int max_iter = 25,
                               std::vector<double>* wcss_trace = nullptr);

// Group rows by exact value tuples of the named columns.  Names resolve to
// key columns first, then to predictor columns.  Blocks are ordered by
// ascending tuple.
PartitionSpec natural_partition(const Dataset& data, const std::vector<std::string>& key_names);

// One block per distinct predictor row.
PartitionSpec distinct_x_partition(const Dataset& data);

// Nearest-rank quantile binning of one column: labels in 0..bins-1 plus the
// bins-1 cut values.  A constant column yields a single label.
struct Discretized {
  std::vector<std::int64_t> labels;
  std::vector<double> cuts;
};
Discretized discretize_column(const Vector& values, int bins);

// Block diameters delta_k = max pairwise distance of predictor rows within
// a block.  Exact for blocks up to exact_limit rows; larger blocks use the
// 2-approximation 2 * max distance to the block centroid (always within
// [exact, 2*exact]).  max_rep_distance is the largest distance from any row
// to its block's representative when a representative set is supplied.
struct BlockGeometry {
  std::vector<double> delta;
  std::vector<char> exact;
  double max_delta = 0;              // the partition mesh
  double bound_statistic = 0;        // sum_k n_k delta_k^2
  double max_rep_distance = std::numeric_limits<double>::quiet_NaN();
};
BlockGeometry block_geometry(const Dataset& data, const PartitionSpec& part,
                             const RepresentativeSet* reps = nullptr, Index exact_limit = 2000);

// Partition file: header `row,block`, one `row,block` pair per data row,
// rows 0-based in file order.  The method tag and grid metadata are not
// stored; an imported partition supports every representative method except
// midpoint (which needs the grid cuts).
void write_partition(const std::string& path, const PartitionSpec& part);
PartitionSpec read_partition(const std::string& path, Index n_rows);

}  // namespace repglm
