#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "attend/random.hpp"

namespace attend {

/// Walker/Vose alias table for O(1) sampling from a discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  /// Throws std::invalid_argument on an empty list, a negative or non-finite
  /// weight, or an all-zero list.
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const { return prob_.size(); }
  std::span<const double> prob() const { return prob_; }
  std::span<const std::uint32_t> alias() const { return alias_; }

  std::size_t sample(Rng& rng) const {
    const std::size_t column = uniform_index(rng, prob_.size());
    return uniform01(rng) < prob_[column] ? column : alias_[column];
  }

  /// The distribution the table samples from, recovered exactly from the
  /// (prob, alias) columns.
  std::vector<double> implied_distribution() const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace attend
