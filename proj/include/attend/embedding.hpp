#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace attend {

/// Row-major |V| x d matrix of node vectors.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim) {}

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Embedding rows keyed by external node id.
struct LabeledEmbedding {
  std::vector<std::string> ids;
  EmbeddingMatrix matrix;
};

/// Text format: first line "N d", then N lines "<external-id> v1 ... vd".
/// Values are written with round-trip precision.
void write_embedding(std::ostream& out, std::span<const std::string> ids,
                     const EmbeddingMatrix& matrix);
LabeledEmbedding read_embedding(std::istream& in);

}  // namespace attend
