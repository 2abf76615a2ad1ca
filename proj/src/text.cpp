#include "attend/text.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "attend/graph.hpp"

namespace attend {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Decodes one UTF-8 sequence at `pos`; returns its length (0 if invalid).
std::size_t decode_utf8(std::string_view s, std::size_t pos, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  return len;
}

bool is_latin_letter(char32_t cp) { return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7; }

// Joiners and variation selectors carry no meaning on their own.
bool is_format_char(char32_t cp) {
  return cp == 0x200D || cp == 0x200C || cp == 0x200B || (cp >= 0xFE00 && cp <= 0xFE0F) ||
         cp == 0xFEFF;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

void flush_word(std::string& word, Tokens& out) {
  const auto first = word.find_first_not_of('\'');
  if (first != std::string::npos) {
    const auto last = word.find_last_not_of('\'');
    out.push_back(word.substr(first, last - first + 1));
  }
  word.clear();
}

void tokenize_chunk(std::string_view chunk, Tokens& out) {
  std::string lowered(chunk);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
  if (starts_with(lowered, "http://") || starts_with(lowered, "https://") ||
      starts_with(lowered, "www.")) {
    return;
  }
  std::string_view rest(lowered);
  while (!rest.empty() && (rest.front() == '@' || rest.front() == '#')) rest.remove_prefix(1);

  std::string word;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    char32_t cp = 0;
    std::size_t len = decode_utf8(rest, pos, cp);
    if (len == 0) {
      flush_word(word, out);
      ++pos;
      continue;
    }
    const std::string_view bytes = rest.substr(pos, len);
    pos += len;
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (is_ascii_alnum(c) || c == '\'') {
        word.push_back(c);
      } else {
        flush_word(word, out);
      }
    } else if (cp == 0x2019) {
      word.push_back('\'');
    } else if (is_latin_letter(cp)) {
      word.append(bytes);
    } else {
      flush_word(word, out);
      if (!is_format_char(cp)) out.emplace_back(bytes);
    }
  }
  flush_word(word, out);
}

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// One pass of the suffix rules; false when nothing applies.
bool strip_once(std::string& t) {
  const std::size_t n = t.size();
  if (ends_with(t, "'s") && n > 2) {
    t.resize(n - 2);
    return true;
  }
  if (ends_with(t, "ies") && n > 4) {
    t.resize(n - 3);
    t.push_back('y');
    return true;
  }
  if (ends_with(t, "es") && n > 4) {
    const std::string_view stem(t.data(), n - 2);
    if (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") ||
        ends_with(stem, "ch") || ends_with(stem, "sh")) {
      t.resize(n - 2);
      return true;
    }
  }
  if (t.back() == 's' && n > 3) {
    const char before = t[n - 2];
    if (before != 's' && before != 'u' && before != 'i') {
      t.resize(n - 1);
      return true;
    }
  }
  return false;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_ascii_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_ascii_space(text[pos])) ++pos;
    if (pos > start) tokenize_chunk(text.substr(start, pos - start), out);
  }
  return out;
}

std::string normalize(std::string_view token) {
  std::string t(token);
  if (t.empty() || !is_ascii_letter(t.front())) return t;
  while (strip_once(t)) {
  }
  return t;
}

Tokens analyze(std::string_view text) {
  Tokens tokens = tokenize(text);
  for (auto& t : tokens) t = normalize(t);
  return tokens;
}

std::vector<std::string> ngrams(std::span<const std::string> tokens) {
  std::vector<std::string> grams;
  const std::size_t n = tokens.size();
  grams.reserve(3 * n);
  grams.insert(grams.end(), tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < n; ++i) grams.push_back(tokens[i] + ' ' + tokens[i + 1]);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    grams.push_back(tokens[i] + ' ' + tokens[i + 1] + ' ' + tokens[i + 2]);
  }
  return grams;
}

std::int64_t Vocabulary::index(const std::string& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

Vocabulary build_vocab(std::span<const Tokens> corpus, std::size_t min_df) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& doc : corpus) {
    auto grams = ngrams(doc);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  Vocabulary vocab;
  vocab.min_df_ = min_df;
  for (auto& [key, count] : df) {
    if (count < min_df) continue;
    vocab.index_.emplace(key, vocab.keys_.size());
    vocab.keys_.push_back(key);
    vocab.doc_freq_.push_back(count);
  }
  return vocab;
}

void write_vocab(const Vocabulary& vocab, std::ostream& out) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << i << '\t' << vocab.key(i) << '\t' << vocab.doc_freq(i) << '\n';
  }
}

Vocabulary read_vocab(std::istream& in) {
  Vocabulary vocab;
  vocab.min_df_ = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = line.rfind('\t');
    if (tab1 == std::string::npos || tab2 == tab1) throw ParseError(line_no, "malformed vocabulary line");
    std::size_t index = 0, df = 0;
    try {
      index = std::stoul(line.substr(0, tab1));
      df = std::stoul(line.substr(tab2 + 1));
    } catch (const std::exception&) {
      throw ParseError(line_no, "malformed vocabulary line");
    }
    if (index != vocab.keys_.size()) throw ParseError(line_no, "vocabulary index out of order");
    std::string key = line.substr(tab1 + 1, tab2 - tab1 - 1);
    vocab.index_.emplace(key, index);
    vocab.keys_.push_back(std::move(key));
    vocab.doc_freq_.push_back(df);
    vocab.min_df_ = vocab.min_df_ == 0 ? df : std::min(vocab.min_df_, df);
  }
  if (vocab.min_df_ == 0) vocab.min_df_ = 1;
  return vocab;
}

TextVector vectorize(std::span<const std::string> tokens, const Vocabulary& vocab, bool binary) {
  std::map<std::uint32_t, double> counts;
  for (const auto& gram : ngrams(tokens)) {
    const auto idx = vocab.index(gram);
    if (idx < 0) continue;
    double& c = counts[static_cast<std::uint32_t>(idx)];
    c = binary ? 1.0 : c + 1.0;
  }
  TextVector out;
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

std::vector<double> densify(const TextVector& vector, std::size_t size) {
  std::vector<double> dense(size, 0.0);
  for (const auto& [idx, value] : vector.entries) {
    if (idx >= size) throw std::out_of_range("text vector index exceeds size");
    dense[idx] = value;
  }
  return dense;
}

}  // namespace attend
