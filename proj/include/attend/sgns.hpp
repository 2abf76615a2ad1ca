#pragma once

// Skip-gram with negative sampling over a walk corpus.

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "attend/embedding.hpp"
#include "attend/walks.hpp"

namespace attend {

struct SgnsConfig {
  std::size_t dim = 128;
  std::size_t window = 4;  ///< context radius: positions i-window .. i+window
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SgnsGradient {
  double loss = 0.0;
  std::vector<double> center;  ///< d loss / d target[center]
  /// d loss / d context[x] for every touched context row, merged per row.
  std::vector<std::pair<NodeId, std::vector<double>>> context;
};

/// loss = -log s(t_u . c_c) - sum_n log s(-t_u . c_n), with analytic gradients.
SgnsGradient sgns_objective(NodeId center, NodeId context, std::span<const NodeId> negatives,
                            const EmbeddingMatrix& target, const EmbeddingMatrix& context_rows);

/// Trains target vectors. Target rows start uniform in [-0.5/d, 0.5/d] (or
/// at `init` when given) and context rows at zero. Negatives come from the
/// corpus frequency distribution raised to 0.75; the step size decays
/// linearly from learning_rate to min_learning_rate.
EmbeddingMatrix train_sgns(const WalkCorpus& corpus, const SgnsConfig& config,
                           std::size_t node_count, const EmbeddingMatrix* init = nullptr);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace attend
