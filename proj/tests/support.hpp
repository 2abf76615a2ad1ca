#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "attend/graph.hpp"
#include "attend/random.hpp"

namespace attend::fixture {

inline double rel_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

// Erdos-Renyi graph with a random node count in [lo, hi].
inline Graph random_graph(Rng& rng, std::size_t lo, std::size_t hi, double p) {
  const std::size_t n = lo + uniform_index(rng, hi - lo + 1);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (bernoulli(rng, p)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

// Component label per node by breadth-first search over the raw edge list.
inline std::vector<std::size_t> bfs_labels(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::size_t> label(n, SIZE_MAX);
  std::size_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != SIZE_MAX) continue;
    std::vector<NodeId> queue{s};
    label[s] = next;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId w : adj[queue[head]]) {
        if (label[w] == SIZE_MAX) {
          label[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace attend::fixture
