#pragma once

#include "repglm/data.hpp"
#include "repglm/family.hpp"
#include "repglm/partition.hpp"
#include "repglm/representatives.hpp"
#include "repglm/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace repglm {

// One simulated worker: a shard of the rows plus its local partition.
// Counters accumulate the wire traffic attributed to this node.
struct NodeState {
  int id = 0;
  Dataset shard;
  PartitionSpec part;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
};

// Only two message kinds ever cross the wire: coefficient broadcasts
// (p words) and representative uploads (points * (p + 2) words: weight,
// response and p predictor coordinates per point).  A word is one 8-byte
// float.  Raw rows never leave a node.
enum class WireKind { beta_broadcast, representative_upload };

struct WireMessage {
  int round = 0;  // 0 = initial center-representative round
  int node = 0;
  WireKind kind = WireKind::representative_upload;
  std::uint64_t words = 0;
};

struct TrafficReport {
  std::vector<WireMessage> log;
  std::uint64_t total_words = 0;
  // What shipping every raw row to the coordinator would cost: n * (p + 1).
  std::uint64_t raw_shuffle_words = 0;
  int nodes_used = 0;
  int nodes_excluded = 0;
};

// Split a partitioned dataset into node shards, assigning blocks round-robin
// by block index.  Node k receives blocks k, k + nodes, ... with their rows
// re-indexed locally (block-internal row order preserved).
std::vector<NodeState> shard_dataset(const Dataset& data, const PartitionSpec& part, int nodes);

struct DistributedResult {
  FitResult fit;
  TrafficReport traffic;
  std::vector<NodeState> nodes;  // with final counters
  std::vector<FitResult> stage_fits;
};

// The iterated score-matching fit run through the message-passing model:
// round 0 uploads each node's mean representatives and fits at the
// coordinator; every later round broadcasts the coefficients, builds local
// score-matching representatives on each node, uploads them and refits
// warm-started.  Representative sets are concatenated in node-id order, so
// the coordinator solves exactly the same sequence of problems as the
// single-process fit on the concatenated data and partition.  Nodes with an
// empty shard are excluded with a warning.
DistributedResult distributed_smr(std::vector<NodeState> nodes, const GlmFamily& fam,
                                  const SmrOptions& opts = {});

// Traffic CSV: header `round,node,kind,words`.
void write_traffic_csv(const std::string& path, const TrafficReport& report);

// Stack the node shards back into one dataset and partition (node-major
// block order).  The distributed fit equals the single-process fit on this
// concatenation.
std::pair<Dataset, PartitionSpec> concatenate_shards(const std::vector<NodeState>& nodes);

}  // namespace repglm
