#pragma once

// Bag-of-n-grams text features (uni-, bi- and trigrams of normalized tokens).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace attend {

using Tokens = std::vector<std::string>;

/// Lowercases, drops URLs and punctuation, strips a leading '@' or '#', and
/// keeps emoji and other symbols as one token per codepoint.
Tokens tokenize(std::string_view text);

/// Suffix-rule lemma proxy, applied until a fixed point:
///   'x's -> x;  -ies -> -y;  -es after s/x/z/ch/sh -> drop;  -s -> drop
/// (length > 3, not after s/u/i). Tokens that do not start with an ASCII
/// letter are returned unchanged.
std::string normalize(std::string_view token);

/// tokenize + normalize.
Tokens analyze(std::string_view text);

/// Grams of one document: every unigram, then bigrams, then trigrams, keys
/// joined by a single space.
std::vector<std::string> ngrams(std::span<const std::string> tokens);

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  /// Index of `key`, or -1 when unknown.
  std::int64_t index(const std::string& key) const;
  const std::string& key(std::size_t index) const { return keys_[index]; }
  std::size_t doc_freq(std::size_t index) const { return doc_freq_[index]; }
  std::size_t min_df() const { return min_df_; }

  friend Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t min_df);
  friend Vocabulary read_vocab(std::istream& in);
  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.keys_ == b.keys_ && a.doc_freq_ == b.doc_freq_;
  }

 private:
  std::vector<std::string> keys_;
  std::vector<std::size_t> doc_freq_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t min_df_ = 1;
};

/// All 1/2/3-grams with document frequency >= min_df, indexed in sorted key
/// order.
Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t min_df = 2);

/// Lines "index<TAB>gram_key<TAB>doc_freq".
void write_vocab(const Vocabulary& vocab, std::ostream& out);
Vocabulary read_vocab(std::istream& in);

/// Sparse counts over a vocabulary; indices strictly increasing.
struct TextVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
  friend bool operator==(const TextVector&, const TextVector&) = default;
};

/// Counts of the known grams of `tokens`; unknown grams are ignored. With
/// `binary`, every present gram has value 1.
TextVector vectorize(std::span<const std::string> tokens, const Vocabulary& vocab,
                     bool binary = false);

std::vector<double> densify(const TextVector& vector, std::size_t size);

}  // namespace attend
