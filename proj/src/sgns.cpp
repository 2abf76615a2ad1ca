#include "attend/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <stdexcept>

#include "attend/alias.hpp"
#include "attend/simd.hpp"

namespace attend {

void SgnsConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("sgns dim must be >= 1");
  if (window < 1) throw std::invalid_argument("sgns window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("sgns negatives must be >= 1");
  if (epochs < 1) throw std::invalid_argument("sgns epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("sgns learning_rate must be > 0");
}

namespace {

// log s(x) without overflow for large |x|.
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

void accumulate(std::vector<std::pair<NodeId, std::vector<double>>>& grads, NodeId row,
                double scale, std::span<const double> direction) {
  auto it = std::find_if(grads.begin(), grads.end(), [row](const auto& g) { return g.first == row; });
  if (it == grads.end()) {
    grads.emplace_back(row, std::vector<double>(direction.size(), 0.0));
    it = std::prev(grads.end());
  }
  simd::axpy(scale, direction, it->second);
}

}  // namespace

SgnsGradient sgns_objective(NodeId center, NodeId context, std::span<const NodeId> negatives,
                            const EmbeddingMatrix& target, const EmbeddingMatrix& context_rows) {
  const auto u = target.row(center);
  SgnsGradient out;
  out.center.assign(target.dim(), 0.0);

  const auto pos = context_rows.row(context);
  const double s_pos = simd::dot(u, pos);
  out.loss -= log_sigmoid(s_pos);
  // d/ds [-log s(s)] = s(s) - 1
  const double g_pos = sigmoid(s_pos) - 1.0;
  simd::axpy(g_pos, pos, out.center);
  accumulate(out.context, context, g_pos, u);

  for (NodeId n : negatives) {
    const auto neg = context_rows.row(n);
    const double s_neg = simd::dot(u, neg);
    out.loss -= log_sigmoid(-s_neg);
    // d/ds [-log s(-s)] = s(s)
    const double g_neg = sigmoid(s_neg);
    simd::axpy(g_neg, neg, out.center);
    accumulate(out.context, n, g_neg, u);
  }
  return out;
}

EmbeddingMatrix train_sgns(const WalkCorpus& corpus, const SgnsConfig& config,
                           std::size_t node_count, const EmbeddingMatrix* init) {
  config.validate();
  if (corpus.empty()) throw std::invalid_argument("sgns corpus is empty");

  std::vector<double> frequency(node_count, 0.0);
  std::size_t total_tokens = 0;
  for (const auto& walk : corpus) {
    for (NodeId v : walk) {
      if (v >= node_count) {
        throw std::out_of_range("corpus node " + std::to_string(v) + " >= node_count " +
                                std::to_string(node_count));
      }
      frequency[v] += 1.0;
    }
    total_tokens += walk.size();
  }
  for (double& f : frequency) f = std::pow(f, 0.75);
  const AliasTable noise(frequency);

  const std::size_t d = config.dim;
  Rng rng(config.seed);
  EmbeddingMatrix target(node_count, d);
  if (init != nullptr) {
    if (init->rows() != node_count || init->dim() != d) {
      throw std::invalid_argument("sgns init matrix has the wrong shape");
    }
    target = *init;
  } else {
    const double half_width = 0.5 / static_cast<double>(d);
    for (double& x : target.data()) x = (uniform01(rng) * 2.0 - 1.0) * half_width;
  }
  EmbeddingMatrix context(node_count, d);

  std::vector<double> center_update(d);
  const double total_steps = static_cast<double>(config.epochs * total_tokens);
  const double lr_span = config.learning_rate - config.min_learning_rate;
  std::size_t processed = 0;

  auto train_pair = [&](NodeId u, NodeId c, double lr) {
    auto u_row = target.row(u);
    std::fill(center_update.begin(), center_update.end(), 0.0);
    for (std::size_t s = 0; s <= config.negatives; ++s) {
      NodeId x = c;
      double label = 1.0;
      if (s > 0) {
        x = static_cast<NodeId>(noise.sample(rng));
        if (x == c) continue;
        label = 0.0;
      }
      auto x_row = context.row(x);
      const double g = (label - sigmoid(simd::dot(u_row, x_row))) * lr;
      simd::axpy(g, x_row, center_update);
      simd::axpy(g, u_row, x_row);
    }
    simd::axpy(1.0, center_update, u_row);
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& walk : corpus) {
      for (std::size_t i = 0; i < walk.size(); ++i, ++processed) {
        const double progress = static_cast<double>(processed) / total_steps;
        const double lr = std::max(config.min_learning_rate, config.learning_rate - lr_span * progress);
        const std::size_t lo = i >= config.window ? i - config.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, i + config.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j != i) train_pair(walk[i], walk[j], lr);
        }
      }
    }
  }
  return target;
}

}  // namespace attend
