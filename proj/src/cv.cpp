#include "attend/cv.hpp"

#include <stdexcept>
#include <string>

#include "attend/random.hpp"

namespace attend {

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> labels, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_kfold needs k >= 2");
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) positives.push_back(i);
    else if (labels[i] == 0) negatives.push_back(i);
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (positives.size() < k || negatives.size() < k) {
    throw std::invalid_argument("each class needs at least k=" + std::to_string(k) +
                                " members (positives " + std::to_string(positives.size()) +
                                ", negatives " + std::to_string(negatives.size()) + ")");
  }
  Rng rng(seed);
  shuffle(positives, rng);
  shuffle(negatives, rng);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t slot = 0;
  for (std::size_t i : positives) folds[slot++ % k].push_back(i);
  for (std::size_t i : negatives) folds[slot++ % k].push_back(i);
  return folds;
}

Confusion confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("label and prediction lengths differ");
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool truth = y_true[i] == 1;
    const bool pred = y_pred[i] == 1;
    if (truth && pred) ++c.tp;
    else if (!truth && pred) ++c.fp;
    else if (truth && !pred) ++c.fn;
    else ++c.tn;
  }
  return c;
}

Metrics metrics_from(const Confusion& c) {
  Metrics m;
  const auto total = static_cast<double>(c.tp + c.fp + c.fn + c.tn);
  if (total > 0) m.accuracy = static_cast<double>(c.tp + c.tn) / total;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall > 0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics compute_metrics(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty()) throw std::invalid_argument("metrics need at least one sample");
  return metrics_from(confusion(y_true, y_pred));
}

}  // namespace attend
