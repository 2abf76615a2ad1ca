#include "attend/walks.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "attend/alias.hpp"

namespace attend {

void WalkConfig::validate() const {
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("walk p and q must be positive");
  if (walk_length < 1) throw std::invalid_argument("walk_length must be >= 1");
  if (walks_per_node < 1) throw std::invalid_argument("walks_per_node must be >= 1");
}

double transition_weight(NodeId prev, NodeId cur, NodeId candidate, const Graph& graph,
                         double p, double q) {
  if (!graph.has_edge(cur, candidate)) {
    throw std::invalid_argument("candidate " + std::to_string(candidate) +
                                " is not a neighbor of " + std::to_string(cur));
  }
  if (candidate == prev) return 1.0 / p;
  if (graph.has_edge(prev, candidate)) return 1.0;
  return 1.0 / q;
}

namespace {

// One alias table per directed edge (prev -> cur) over the neighbors of cur.
class EdgeSamplers {
 public:
  EdgeSamplers(const Graph& graph, double p, double q) : graph_(graph) {
    const std::size_t n = graph.node_count();
    base_.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) base_[u + 1] = base_[u] + graph.degree(u);
    tables_.reserve(base_.back());
    std::vector<double> weights;
    for (NodeId prev = 0; prev < n; ++prev) {
      for (NodeId cur : graph.neighbors(prev)) {
        const auto candidates = graph.neighbors(cur);
        weights.resize(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          weights[i] = transition_weight(prev, cur, candidates[i], graph, p, q);
        }
        tables_.emplace_back(weights);
      }
    }
  }

  NodeId next(NodeId prev, NodeId cur, Rng& rng) const {
    const auto from_prev = graph_.neighbors(prev);
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(from_prev.begin(), from_prev.end(), cur) - from_prev.begin());
    const auto& table = tables_[base_[prev] + pos];
    return graph_.neighbors(cur)[table.sample(rng)];
  }

 private:
  const Graph& graph_;
  std::vector<std::size_t> base_;
  std::vector<AliasTable> tables_;
};

}  // namespace

WalkCorpus generate_walks(const Graph& graph, const WalkConfig& config) {
  config.validate();
  if (graph.empty()) throw std::invalid_argument("cannot walk an empty graph");

  const EdgeSamplers samplers(graph, config.p, config.q);
  Rng rng(config.seed);
  std::vector<NodeId> order(graph.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});

  WalkCorpus corpus;
  corpus.reserve(graph.node_count() * config.walks_per_node);
  for (std::size_t round = 0; round < config.walks_per_node; ++round) {
    shuffle(order, rng);
    for (NodeId start : order) {
      Walk walk;
      walk.reserve(config.walk_length);
      walk.push_back(start);
      while (walk.size() < config.walk_length) {
        const NodeId cur = walk.back();
        const auto candidates = graph.neighbors(cur);
        if (candidates.empty()) break;
        if (walk.size() == 1) {
          walk.push_back(candidates[uniform_index(rng, candidates.size())]);
        } else {
          walk.push_back(samplers.next(walk[walk.size() - 2], cur, rng));
        }
      }
      corpus.push_back(std::move(walk));
    }
  }
  return corpus;
}

}  // namespace attend
