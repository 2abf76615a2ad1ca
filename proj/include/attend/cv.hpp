#pragma once

// Stratified k-fold splits and binary classification metrics.

#include <cstdint>
#include <span>
#include <vector>

namespace attend {

/// Splits indices into k folds keeping the class proportion: each class is
/// shuffled and dealt round-robin, the negatives continuing where the
/// positives stopped. Throws if k < 2 or either class has fewer than k
/// members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred);

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  ///< 0 when nothing is predicted positive
  double recall = 0.0;     ///< 0 when there are no positives
  double f1 = 0.0;         ///< 0 when precision + recall is 0
};

Metrics metrics_from(const Confusion& c);
/// Positive class is 1. Throws on length mismatch or empty input.
Metrics compute_metrics(std::span<const int> y_true, std::span<const int> y_pred);

}  // namespace attend
