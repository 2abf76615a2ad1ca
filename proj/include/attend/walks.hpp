#pragma once

// Second-order biased random walks (node2vec).

#include <cstdint>
#include <vector>

#include "attend/graph.hpp"

namespace attend {

struct WalkConfig {
  double p = 1.0;  ///< return parameter
  double q = 1.0;  ///< in-out parameter
  std::size_t walk_length = 80;
  std::size_t walks_per_node = 10;
  std::uint64_t seed = 1;

  void validate() const;
};

using Walk = std::vector<NodeId>;
using WalkCorpus = std::vector<Walk>;

/// Unnormalized bias for stepping cur -> candidate having arrived from prev:
/// 1/p for a return to prev, 1 if candidate is adjacent to prev, 1/q
/// otherwise. Throws if candidate is not a neighbor of cur.
double transition_weight(NodeId prev, NodeId cur, NodeId candidate, const Graph& graph,
                         double p, double q);

/// `walks_per_node` rounds; each round visits every node once in a shuffled
/// order and walks up to `walk_length` nodes from it. Isolated nodes yield a
/// single-node walk.
WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config);

}  // namespace attend
