#include "attend/graph.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

namespace attend {

Graph::Graph(std::size_t node_count, std::span<const Edge> edges,
             std::vector<std::string> external_ids)
    : ext_ids_(std::move(external_ids)) {
  if (ext_ids_.empty()) {
    ext_ids_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) ext_ids_.push_back(std::to_string(i));
  } else if (ext_ids_.size() != node_count) {
    throw std::invalid_argument("external id count does not match node count");
  }
  ext_index_.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    if (!ext_index_.emplace(ext_ids_[i], static_cast<NodeId>(i)).second) {
      throw std::invalid_argument("duplicate external id '" + ext_ids_[i] + "'");
    }
  }

  std::vector<std::vector<NodeId>> adjacency(node_count);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  offsets_.assign(node_count + 1, 0);
  for (std::size_t u = 0; u < node_count; ++u) {
    auto& list = adjacency[u];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    offsets_[u + 1] = offsets_[u] + list.size();
  }
  targets_.reserve(offsets_.back());
  for (const auto& list : adjacency) targets_.insert(targets_.end(), list.begin(), list.end());
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  if (u >= node_count()) {
    throw std::out_of_range("node " + std::to_string(u) + " out of range (node_count " +
                            std::to_string(node_count()) + ")");
  }
  return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

const std::string& Graph::external_id(NodeId u) const {
  if (u >= ext_ids_.size()) throw std::out_of_range("node id out of range");
  return ext_ids_[u];
}

bool Graph::find(const std::string& external_id, NodeId& out) const {
  const auto it = ext_index_.find(external_id);
  if (it == ext_index_.end()) return false;
  out = it->second;
  return true;
}

Graph load_edge_list(std::istream& in) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& token) {
    const auto [it, inserted] = index.emplace(token, static_cast<NodeId>(ids.size()));
    if (inserted) ids.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(line_no, "malformed edge line");
    }
    if (a == b) throw ParseError(line_no, "self-loop");
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    edges.emplace_back(u, v);
  }
  const std::size_t count = ids.size();
  return Graph(count, edges, std::move(ids));
}

void write_edge_list(const Graph& graph, std::ostream& out) {
  for (const auto& [u, v] : graph.edges()) {
    out << graph.external_id(u) << ' ' << graph.external_id(v) << '\n';
  }
}

Graph with_nodes(const Graph& graph, std::span<const std::string> external_ids) {
  std::vector<std::string> ids(graph.external_ids().begin(), graph.external_ids().end());
  std::unordered_map<std::string, NodeId> seen;
  for (const auto& id : external_ids) {
    NodeId existing;
    if (graph.find(id, existing) || seen.count(id)) continue;
    seen.emplace(id, static_cast<NodeId>(ids.size()));
    ids.push_back(id);
  }
  const auto edges = graph.edges();
  const std::size_t count = ids.size();
  return Graph(count, edges, std::move(ids));
}

Graph with_edges(const Graph& graph, std::span<const Edge> extra) {
  auto edges = graph.edges();
  edges.insert(edges.end(), extra.begin(), extra.end());
  return Graph(graph.node_count(), edges,
               std::vector<std::string>(graph.external_ids().begin(), graph.external_ids().end()));
}

std::vector<Edge> random_spanning_tree(std::span<const NodeId> members, Rng& rng) {
  const std::size_t m = members.size();
  std::vector<Edge> tree;
  if (m < 2) return tree;
  auto add = [&](std::size_t i, std::size_t j) {
    tree.emplace_back(std::min(members[i], members[j]), std::max(members[i], members[j]));
  };
  if (m == 2) {
    add(0, 1);
    return tree;
  }
  std::vector<std::size_t> code(m - 2);
  for (auto& c : code) c = uniform_index(rng, m);

  std::vector<std::size_t> degree(m, 1);
  for (std::size_t c : code) ++degree[c];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> leaves;
  for (std::size_t i = 0; i < m; ++i) {
    if (degree[i] == 1) leaves.push(i);
  }
  for (std::size_t c : code) {
    const std::size_t leaf = leaves.top();
    leaves.pop();
    add(leaf, c);
    if (--degree[c] == 1) leaves.push(c);
  }
  const std::size_t a = leaves.top();
  leaves.pop();
  add(a, leaves.top());
  return tree;
}

GroupAssignment make_artificial_groups(std::span<const NodeId> lone_users,
                                       std::size_t group_count, std::uint64_t seed,
                                       double extra_edge_prob) {
  if (group_count < 1) throw std::invalid_argument("group_count must be >= 1");
  GroupAssignment result;
  if (lone_users.size() < 2) return result;

  Rng rng(seed);
  std::vector<NodeId> users(lone_users.begin(), lone_users.end());
  shuffle(users, rng);

  const std::size_t n = users.size();
  const std::size_t base = n / group_count;
  const std::size_t remainder = n % group_count;
  std::size_t cursor = 0;
  for (std::size_t g = 0; g < group_count; ++g) {
    const std::size_t size = base + (g < remainder ? 1 : 0);
    if (size == 0) continue;
    result.groups.emplace_back(users.begin() + static_cast<std::ptrdiff_t>(cursor),
                               users.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
  }

  // Fold singletons, last first, into the smallest remaining group.
  auto& groups = result.groups;
  for (std::size_t g = groups.size(); g-- > 0;) {
    if (groups[g].size() != 1 || groups.size() < 2) continue;
    std::size_t target = g == 0 ? 1 : 0;
    for (std::size_t h = 0; h < groups.size(); ++h) {
      if (h != g && groups[h].size() < groups[target].size()) target = h;
    }
    groups[target].push_back(groups[g].front());
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(g));
  }

  for (const auto& group : groups) {
    auto tree = random_spanning_tree(group, rng);
    std::sort(tree.begin(), tree.end());
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const Edge e{std::min(group[i], group[j]), std::max(group[i], group[j])};
        if (std::binary_search(tree.begin(), tree.end(), e)) continue;
        if (bernoulli(rng, extra_edge_prob)) result.added_edges.push_back(e);
      }
    }
    result.added_edges.insert(result.added_edges.end(), tree.begin(), tree.end());
  }
  return result;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<NodeId>> components;
  std::vector<NodeId> frontier;
  for (NodeId start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> component{start};
    seen[start] = true;
    frontier.assign(1, start);
    while (!frontier.empty()) {
      const NodeId u = frontier.back();
      frontier.pop_back();
      for (NodeId v : graph.neighbors(u)) {
        if (!seen[v]) {
          seen[v] = true;
          component.push_back(v);
          frontier.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

}  // namespace attend
