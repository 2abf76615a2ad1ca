#include "attend/embedding.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "attend/graph.hpp"
#include "attend/simd.hpp"

namespace attend {

bool EmbeddingMatrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na2 = simd::squared_norm(a);
  const double nb2 = simd::squared_norm(b);
  if (na2 == 0.0 || nb2 == 0.0) return 0.0;
  // Exactly 1 for identical rows: sqrt(x * x) == x.
  return simd::dot(a, b) / std::sqrt(na2 * nb2);
}

void write_embedding(std::ostream& out, std::span<const std::string> ids,
                     const EmbeddingMatrix& matrix) {
  if (ids.size() != matrix.rows()) throw std::invalid_argument("id count does not match rows");
  out << matrix.rows() << ' ' << matrix.dim() << '\n';
  char buffer[64];
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out << ids[i];
    for (double x : matrix.row(i)) {
      const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
      out << ' ' << std::string_view(buffer, static_cast<std::size_t>(result.ptr - buffer));
    }
    out << '\n';
  }
}

LabeledEmbedding read_embedding(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "missing embedding header");
  std::istringstream header(line);
  std::size_t rows = 0, dim = 0;
  if (!(header >> rows >> dim) || dim == 0) throw ParseError(line_no, "bad embedding header");

  LabeledEmbedding result{{}, EmbeddingMatrix(rows, dim)};
  result.ids.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "missing embedding row");
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) throw ParseError(line_no, "missing node id");
    auto row = result.matrix.row(r);
    for (std::size_t j = 0; j < dim; ++j) {
      std::string token;
      if (!(fields >> token)) throw ParseError(line_no, "too few values");
      const auto parsed = std::from_chars(token.data(), token.data() + token.size(), row[j]);
      if (parsed.ec != std::errc() || parsed.ptr != token.data() + token.size()) {
        throw ParseError(line_no, "bad value '" + token + "'");
      }
    }
    std::string extra;
    if (fields >> extra) throw ParseError(line_no, "too many values");
    result.ids.push_back(std::move(id));
  }
  return result;
}

}  // namespace attend
