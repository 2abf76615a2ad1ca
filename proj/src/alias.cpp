#include "attend/alias.hpp"

#include <cmath>
#include <stdexcept>

namespace attend {

AliasTable::AliasTable(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("alias weights must be finite and nonnegative");
    }
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("alias weights are all zero");

  const std::size_t n = weights.size();
  prob_.resize(n);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (std::uint32_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::uint32_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::vector<double> AliasTable::implied_distribution() const {
  const std::size_t n = prob_.size();
  std::vector<double> dist(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    dist[i] += prob_[i];
    if (alias_[i] != i) dist[alias_[i]] += 1.0 - prob_[i];
  }
  for (double& p : dist) p /= static_cast<double>(n);
  return dist;
}

}  // namespace attend
