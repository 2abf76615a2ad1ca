#include "attend/harp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace attend {

namespace {
constexpr NodeId kUnmatched = std::numeric_limits<NodeId>::max();

CoarseningLevel from_partner(const Graph& graph, const std::vector<NodeId>& partner) {
  std::vector<NodeId> group(graph.node_count());
  for (NodeId u = 0; u < graph.node_count(); ++u) {
    group[u] = partner[u] == kUnmatched ? u : std::min(u, partner[u]);
  }
  return contract(graph, group);
}
}  // namespace

CoarseningLevel contract(const Graph& graph, std::span<const NodeId> fine_to_coarse) {
  const std::size_t n = graph.node_count();
  if (fine_to_coarse.size() != n) throw std::invalid_argument("mapping size mismatch");
  // Renumber groups by first appearance in fine-id order.
  std::vector<NodeId> renumber(n, kUnmatched);
  std::vector<NodeId> mapping(n);
  NodeId next = 0;
  for (NodeId u = 0; u < n; ++u) {
    const NodeId key = fine_to_coarse[u];
    if (key >= n) throw std::out_of_range("group key out of range");
    if (renumber[key] == kUnmatched) renumber[key] = next++;
    mapping[u] = renumber[key];
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : graph.edges()) {
    const NodeId cu = mapping[u];
    const NodeId cv = mapping[v];
    if (cu != cv) edges.emplace_back(std::min(cu, cv), std::max(cu, cv));
  }
  return {Graph(next, edges), std::move(mapping)};
}

CoarseningLevel star_collapse(const Graph& graph, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  Rng rng(seed);
  std::vector<NodeId> hubs(n);
  std::iota(hubs.begin(), hubs.end(), NodeId{0});
  std::stable_sort(hubs.begin(), hubs.end(),
                   [&](NodeId a, NodeId b) { return graph.degree(a) > graph.degree(b); });

  std::vector<NodeId> partner(n, kUnmatched);
  std::vector<bool> matched(n, false);
  std::vector<NodeId> free_neighbors;
  for (NodeId hub : hubs) {
    free_neighbors.clear();
    for (NodeId v : graph.neighbors(hub)) {
      if (!matched[v]) free_neighbors.push_back(v);
    }
    if (free_neighbors.size() < 2) continue;
    shuffle(free_neighbors, rng);
    for (std::size_t i = 0; i + 1 < free_neighbors.size(); i += 2) {
      const NodeId a = free_neighbors[i];
      const NodeId b = free_neighbors[i + 1];
      partner[a] = b;
      partner[b] = a;
      matched[a] = matched[b] = true;
    }
  }
  return from_partner(graph, partner);
}

CoarseningLevel edge_collapse(const Graph& graph, std::span<const Edge> edge_order) {
  std::vector<NodeId> partner(graph.node_count(), kUnmatched);
  for (const auto& [u, v] : edge_order) {
    if (!graph.has_edge(u, v)) throw std::invalid_argument("edge order contains a non-edge");
    if (partner[u] == kUnmatched && partner[v] == kUnmatched) {
      partner[u] = v;
      partner[v] = u;
    }
  }
  return from_partner(graph, partner);
}

CoarseningLevel edge_collapse(const Graph& graph, std::uint64_t seed) {
  auto order = graph.edges();
  Rng rng(seed);
  shuffle(order, rng);
  return edge_collapse(graph, order);
}

std::size_t default_threshold(std::size_t node_count) {
  return std::max<std::size_t>(100, node_count / 32);
}

Hierarchy build_hierarchy(const Graph& graph, std::size_t threshold, std::uint64_t seed) {
  if (threshold < 1) throw std::invalid_argument("coarsening threshold must be >= 1");
  Hierarchy hierarchy;
  hierarchy.threshold = threshold;
  hierarchy.levels.push_back({graph, {}});
  for (std::uint64_t round = 0;; ++round) {
    const Graph& current = hierarchy.levels.back().graph;
    if (current.node_count() <= threshold) break;
    const auto star = star_collapse(current, derive_seed(seed, 2 * round));
    auto edge = edge_collapse(star.graph, derive_seed(seed, 2 * round + 1));
    if (edge.graph.node_count() >= current.node_count()) break;
    std::vector<NodeId> composed(current.node_count());
    for (NodeId u = 0; u < current.node_count(); ++u) {
      composed[u] = edge.fine_to_coarse[star.fine_to_coarse[u]];
    }
    hierarchy.levels.push_back({std::move(edge.graph), std::move(composed)});
  }
  return hierarchy;
}

EmbeddingMatrix prolongate(const EmbeddingMatrix& coarse, std::span<const NodeId> fine_to_coarse) {
  EmbeddingMatrix fine(fine_to_coarse.size(), coarse.dim());
  for (std::size_t u = 0; u < fine_to_coarse.size(); ++u) {
    const NodeId c = fine_to_coarse[u];
    if (c >= coarse.rows()) {
      throw std::out_of_range("fine node " + std::to_string(u) + " maps to missing coarse node " +
                              std::to_string(c));
    }
    const auto src = coarse.row(c);
    std::copy(src.begin(), src.end(), fine.row(u).begin());
  }
  return fine;
}

void dump_hierarchy(const Hierarchy& hierarchy, std::ostream& out) {
  for (std::size_t i = 0; i < hierarchy.levels.size(); ++i) {
    const auto& g = hierarchy.levels[i].graph;
    out << "level " << i << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  }
}

EmbeddingMatrix harp_embed(const Graph& graph, const SgnsConfig& sgns, const WalkConfig& walks,
                           const HarpOptions& options) {
  if (graph.empty()) throw std::invalid_argument("cannot embed an empty graph");
  const std::size_t threshold =
      options.threshold == 0 ? default_threshold(graph.node_count()) : options.threshold;
  const Hierarchy hierarchy = build_hierarchy(graph, threshold, derive_seed(options.seed, 0));
  const std::size_t coarsest = hierarchy.levels.size() - 1;

  auto level_configs = [&](std::size_t level, bool refine) {
    WalkConfig w = walks;
    w.seed = derive_seed(walks.seed, 100 + level);
    SgnsConfig s = sgns;
    s.seed = derive_seed(sgns.seed, 200 + level);
    if (refine) {
      s.epochs = std::max<std::size_t>(1, sgns.epochs / 2);
      s.learning_rate = sgns.learning_rate / 2.0;
      s.min_learning_rate = std::min(s.min_learning_rate, s.learning_rate);
    }
    return std::pair{w, s};
  };

  const auto& top = hierarchy.levels[coarsest].graph;
  auto [top_walks, top_sgns] = level_configs(coarsest, false);
  EmbeddingMatrix current = train_sgns(generate_walks(top, top_walks), top_sgns, top.node_count());

  for (std::size_t level = coarsest; level-- > 0;) {
    const auto& mapping = hierarchy.levels[level + 1].fine_to_coarse;
    const auto& fine = hierarchy.levels[level].graph;
    EmbeddingMatrix init = prolongate(current, mapping);
    if (options.on_prolongate) options.on_prolongate(level, mapping, init);
    auto [w, s] = level_configs(level, true);
    current = train_sgns(generate_walks(fine, w), s, fine.node_count(), &init);
  }
  return current;
}

}  // namespace attend
