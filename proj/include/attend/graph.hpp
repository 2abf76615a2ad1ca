#pragma once

// Undirected, unweighted social graph with dense node ids.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "attend/random.hpp"

namespace attend {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Error raised while reading a text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Immutable CSR graph. Adjacency lists are sorted and free of duplicates and
/// self-loops; every edge is stored in both directions.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph over `node_count` nodes. Duplicate and reversed edges
  /// collapse; a self-loop or out-of-range endpoint throws. External ids
  /// default to the decimal dense id.
  Graph(std::size_t node_count, std::span<const Edge> edges,
        std::vector<std::string> external_ids = {});

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  bool empty() const { return node_count() == 0; }

  /// Sorted neighbor ids of `u`; throws std::out_of_range if u >= node_count.
  std::span<const NodeId> neighbors(NodeId u) const;
  std::size_t degree(NodeId u) const { return neighbors(u).size(); }
  bool has_edge(NodeId u, NodeId v) const;

  /// Each undirected edge once, as (u, v) with u < v, in dense-id order.
  std::vector<Edge> edges() const;

  const std::string& external_id(NodeId u) const;
  /// Looks up the dense id of an external id; false if unknown.
  bool find(const std::string& external_id, NodeId& out) const;
  std::span<const std::string> external_ids() const { return ext_ids_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::string> ext_ids_;
  std::unordered_map<std::string, NodeId> ext_index_;
};

/// Reads "a b" lines (external ids); `#` lines and blank lines are skipped.
/// Dense ids follow first appearance.
Graph load_edge_list(std::istream& in);
/// Writes each edge once with u < v in dense-id order, using external ids.
void write_edge_list(const Graph& graph, std::ostream& out);

/// Returns a copy of `graph` with extra nodes appended for external ids it
/// does not know yet; the new nodes are isolated.
Graph with_nodes(const Graph& graph, std::span<const std::string> external_ids);

/// Returns a copy of `graph` with `extra` edges added (same node set).
Graph with_edges(const Graph& graph, std::span<const Edge> extra);

struct GroupAssignment {
  std::vector<std::vector<NodeId>> groups;
  std::vector<Edge> added_edges;
};

/// Splits `lone_users` into `group_count` near-equal groups and links each
/// group: a uniformly random spanning tree, then every remaining pair inside
/// the group independently with probability `extra_edge_prob`. A group that
/// would hold a single user is merged into the smallest other group.
GroupAssignment make_artificial_groups(std::span<const NodeId> lone_users,
                                       std::size_t group_count, std::uint64_t seed,
                                       double extra_edge_prob = 0.3);

/// Edges of a uniformly random labeled spanning tree over `members`
/// (random Pruefer sequence).
std::vector<Edge> random_spanning_tree(std::span<const NodeId> members, Rng& rng);

/// Components in order of their smallest node; each list is sorted.
std::vector<std::vector<NodeId>> connected_components(const Graph& graph);

}  // namespace attend
