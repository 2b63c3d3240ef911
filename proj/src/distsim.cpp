#include "repglm/distsim.hpp"

#include "repglm/solver.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <numeric>

namespace repglm {

namespace {

constexpr std::uint64_t kWordBytes = 8;

// Stack per-node representative sets in node order into one weighted sample.
WeightedData gather_representatives(const std::vector<RepresentativeSet>& sets, Index p) {
  Index total = 0;
  for (const auto& s : sets) total += s.size();
  WeightedData all;
  all.X.resize(total, p);
  all.y.resize(total);
  all.w.resize(total);
  Index at = 0;
  for (const auto& s : sets) {
    all.X.middleRows(at, s.size()) = s.data.X;
    all.y.segment(at, s.size()) = s.data.y;
    all.w.segment(at, s.size()) = s.data.w;
    at += s.size();
  }
  return all;
}

std::uint64_t upload_words(const RepresentativeSet& s, Index p) {
  return static_cast<std::uint64_t>(s.size()) * static_cast<std::uint64_t>(p + 2);
}

}  // namespace

std::vector<NodeState> shard_dataset(const Dataset& data, const PartitionSpec& part, int nodes) {
  if (nodes < 1) throw config_error("need at least one node");
  const Index p = data.n_cols();

  std::vector<NodeState> out(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) out[static_cast<std::size_t>(k)].id = k;

  // Blocks dealt round-robin; each node keeps its blocks in ascending
  // original order with row order preserved inside a block.
  for (std::size_t b = 0; b < part.n_blocks(); ++b) {
    NodeState& node = out[b % static_cast<std::size_t>(nodes)];
    const auto& rows = part.blocks[b];
    const Index base = node.shard.n_rows();
    Matrix X(base + static_cast<Index>(rows.size()), p);
    Vector y(base + static_cast<Index>(rows.size()));
    if (base > 0) {
      X.topRows(base) = node.shard.X;
      y.head(base) = node.shard.y;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      X.row(base + static_cast<Index>(i)) = data.X.row(rows[i]);
      y(base + static_cast<Index>(i)) = data.y(rows[i]);
    }
    node.shard.X = std::move(X);
    node.shard.y = std::move(y);
    node.shard.column_names = data.column_names;
    std::vector<Index> local(rows.size());
    std::iota(local.begin(), local.end(), base);
    node.part.blocks.push_back(std::move(local));
    node.part.method = part.method;
  }
  for (auto& node : out) node.part.n_rows = node.shard.n_rows();
  return out;
}

std::pair<Dataset, PartitionSpec> concatenate_shards(const std::vector<NodeState>& nodes) {
  Index n = 0;
  Index p = 0;
  for (const auto& node : nodes) {
    n += node.shard.n_rows();
    if (node.shard.n_rows() > 0) p = node.shard.n_cols();
  }
  Dataset data;
  data.X.resize(n, p);
  data.y.resize(n);
  PartitionSpec part;
  part.n_rows = n;
  Index base = 0;
  for (const auto& node : nodes) {
    if (node.shard.n_rows() == 0) continue;
    data.X.middleRows(base, node.shard.n_rows()) = node.shard.X;
    data.y.segment(base, node.shard.n_rows()) = node.shard.y;
    data.column_names = node.shard.column_names;
    for (const auto& block : node.part.blocks) {
      std::vector<Index> shifted(block.size());
      for (std::size_t i = 0; i < block.size(); ++i) shifted[i] = block[i] + base;
      part.blocks.push_back(std::move(shifted));
    }
    part.method = node.part.method;
    base += node.shard.n_rows();
  }
  return {std::move(data), std::move(part)};
}

DistributedResult distributed_smr(std::vector<NodeState> nodes, const GlmFamily& fam,
                                  const SmrOptions& opts) {
  if (opts.iterations < 0) throw config_error("iterations must be >= 0");

  std::sort(nodes.begin(), nodes.end(),
            [](const NodeState& a, const NodeState& b) { return a.id < b.id; });

  DistributedResult out;
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].shard.n_rows() > 0) {
      active.push_back(k);
    } else {
      std::cerr << "warning: node " << nodes[k].id << " holds no rows and is excluded\n";
      ++out.traffic.nodes_excluded;
    }
  }
  out.traffic.nodes_used = static_cast<int>(active.size());
  if (active.empty()) throw config_error("no node holds any data");

  const Index p = nodes[active.front()].shard.n_cols();
  for (std::size_t k : active) {
    if (nodes[k].shard.n_cols() != p) throw config_error("nodes disagree on predictor count");
    out.traffic.raw_shuffle_words +=
        static_cast<std::uint64_t>(nodes[k].shard.n_rows()) * static_cast<std::uint64_t>(p + 1);
  }

  auto record = [&](int round, int node_id, WireKind kind, std::uint64_t words) {
    out.traffic.log.push_back(WireMessage{round, node_id, kind, words});
    out.traffic.total_words += words;
  };

  Vector beta;
  if (opts.init.size()) {
    if (opts.iterations < 1)
      throw config_error("an explicit starting point requires at least one iteration");
    beta = opts.init;
  } else {
    // Round 0: mean representatives, no coefficients needed on the nodes.
    std::vector<RepresentativeSet> sets;
    for (std::size_t k : active) {
      RepresentativeSet reps = mean_representatives(nodes[k].shard, nodes[k].part);
      const std::uint64_t words = upload_words(reps, p);
      record(0, nodes[k].id, WireKind::representative_upload, words);
      nodes[k].bytes_sent += words * kWordBytes;
      sets.push_back(std::move(reps));
    }
    SolveOptions s0 = opts.solve;
    s0.init = Vector();
    FitResult f0 = fisher_scoring_fit(gather_representatives(sets, p), fam, s0);
    beta = f0.beta;
    out.stage_fits.push_back(f0);
    out.fit = std::move(f0);
  }

  for (int t = 1; t <= opts.iterations; ++t) {
    std::vector<RepresentativeSet> sets;
    for (std::size_t k : active) {
      record(t, nodes[k].id, WireKind::beta_broadcast, static_cast<std::uint64_t>(p));
      nodes[k].bytes_received += static_cast<std::uint64_t>(p) * kWordBytes;
      RepresentativeSet reps = smr_representatives(nodes[k].shard, nodes[k].part, fam, beta);
      const std::uint64_t words = upload_words(reps, p);
      record(t, nodes[k].id, WireKind::representative_upload, words);
      nodes[k].bytes_sent += words * kWordBytes;
      sets.push_back(std::move(reps));
    }
    SolveOptions st = opts.solve;
    st.init = beta;
    FitResult ft = fisher_scoring_fit(gather_representatives(sets, p), fam, st);
    beta = ft.beta;
    out.stage_fits.push_back(ft);
    out.fit = std::move(ft);
  }

  out.nodes = std::move(nodes);
  return out;
}

void write_traffic_csv(const std::string& path, const TrafficReport& report) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open " + path + " for writing");
  std::fputs("round,node,kind,words\n", f);
  for (const auto& m : report.log)
    std::fprintf(f, "%d,%d,%s,%llu\n", m.round, m.node,
                 m.kind == WireKind::beta_broadcast ? "beta-broadcast" : "representative-upload",
                 static_cast<unsigned long long>(m.words));
  std::fclose(f);
}

}  // namespace repglm
