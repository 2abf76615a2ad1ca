#pragma once

// Hierarchical embedding: coarsen the graph by star and edge collapsing,
// embed the coarsest graph, then prolongate and refine level by level.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "attend/embedding.hpp"
#include "attend/sgns.hpp"
#include "attend/walks.hpp"

namespace attend {

struct CoarseningLevel {
  Graph graph;
  /// For every node of the next finer level, its node in `graph`. Empty for
  /// the finest level.
  std::vector<NodeId> fine_to_coarse;
};

struct Hierarchy {
  std::vector<CoarseningLevel> levels;  ///< finest (the input) to coarsest
  std::size_t threshold = 0;
};

/// Merges each group of fine nodes that share a coarse id. Coarse ids follow
/// the smallest fine id in each group; rewired edges are deduplicated and
/// self-loops dropped.
CoarseningLevel contract(const Graph& graph, std::span<const NodeId> fine_to_coarse);

/// Hubs in decreasing-degree order (ties by id) pair up their still
/// unmatched neighbors in a seeded random order; each pair merges.
CoarseningLevel star_collapse(const Graph& graph, std::uint64_t seed);

/// Greedy maximal matching over the edges in the given order.
CoarseningLevel edge_collapse(const Graph& graph, std::span<const Edge> edge_order);
/// Greedy maximal matching over a seeded shuffle of the edges.
CoarseningLevel edge_collapse(const Graph& graph, std::uint64_t seed);

/// Default stop size: max(100, |V| / 32).
std::size_t default_threshold(std::size_t node_count);

/// Applies star then edge collapsing per round until the graph has at most
/// `threshold` nodes or a round removes nothing.
Hierarchy build_hierarchy(const Graph& graph, std::size_t threshold, std::uint64_t seed);

/// Each fine node receives a copy of its coarse node's row.
EmbeddingMatrix prolongate(const EmbeddingMatrix& coarse, std::span<const NodeId> fine_to_coarse);

/// Writes "level i: N nodes, M edges" per level.
void dump_hierarchy(const Hierarchy& hierarchy, std::ostream& out);

struct HarpOptions {
  std::size_t threshold = 0;  ///< 0 selects default_threshold
  std::uint64_t seed = 1;
  /// Called with (level index, fine_to_coarse, prolongated matrix) right
  /// before each refinement.
  std::function<void(std::size_t, std::span<const NodeId>, const EmbeddingMatrix&)> on_prolongate;
};

/// Refinement levels train for max(1, epochs / 2) epochs at half the
/// learning rate, starting from the prolongated coarse vectors.
EmbeddingMatrix harp_embed(const Graph& graph, const SgnsConfig& sgns, const WalkConfig& walks,
                           const HarpOptions& options = {});

}  // namespace attend
