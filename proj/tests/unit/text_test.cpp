#include <gtest/gtest.h>

#include <sstream>

#include "attend/text.hpp"

using namespace attend;

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Going to @VFest!! \xF0\x9F\x98\x80"),
            (Tokens{"going", "to", "vfest", "\xF0\x9F\x98\x80"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("http://x.co fun"), (Tokens{"fun"}));
  EXPECT_EQ(tokenize("see https://a.b/c?d=1 and www.x.org now"), (Tokens{"see", "and", "now"}));
}

TEST(Tokenize, HashtagsDigitsAndAccents) {
  EXPECT_EQ(tokenize("#Glasto2016 rocks"), (Tokens{"glasto2016", "rocks"}));
  EXPECT_EQ(tokenize("Caf\xC3\xA9 time"), (Tokens{"caf\xC3\xA9", "time"}));
  EXPECT_EQ(tokenize("\xF0\x9F\x8E\xB5\xF0\x9F\x8E\xB6"),
            (Tokens{"\xF0\x9F\x8E\xB5", "\xF0\x9F\x8E\xB6"}));
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize("festivals"), "festival");
  EXPECT_EQ(normalize("parties"), "party");
  EXPECT_EQ(normalize("\xF0\x9F\x98\x80"), "\xF0\x9F\x98\x80");
  EXPECT_EQ(normalize("friend's"), "friend");
  EXPECT_EQ(normalize("boxes"), "box");
  EXPECT_EQ(normalize("matches"), "match");
  EXPECT_EQ(normalize("bus"), "bus");
  EXPECT_EQ(normalize("glass"), "glass");
  EXPECT_EQ(normalize("its"), "its");
}

TEST(Normalize, Idempotent) {
  const std::string corpus =
      "festivals parties friend's boxes buses classes series stories days tickets "
      "crowds lyrics bands stages queues wristbands status campus radius tennis "
      "dresses glasses kisses 's s es ies sses xes chess churches wishes lies dies";
  for (const auto& tok : tokenize(corpus)) {
    const auto once = normalize(tok);
    EXPECT_EQ(normalize(once), once) << tok;
  }
}

TEST(Ngrams, CountsPositions) {
  for (std::size_t n = 0; n < 8; ++n) {
    Tokens doc;
    for (std::size_t i = 0; i < n; ++i) doc.push_back("t" + std::to_string(i));
    const std::size_t expected = n == 0 ? 0 : n + (n >= 2 ? n - 1 : 0) + (n >= 3 ? n - 2 : 0);
    EXPECT_EQ(ngrams(doc).size(), expected);
  }
  EXPECT_EQ(ngrams(Tokens{"a", "b", "c"}),
            (std::vector<std::string>{"a", "b", "c", "a b", "b c", "a b c"}));
}

TEST(Vocab, SingleDocument) {
  const std::vector<Tokens> corpus{{"a", "b", "c"}};
  const auto v = build_vocab(corpus, 1);
  ASSERT_EQ(v.size(), 6u);
  EXPECT_EQ(v.key(0), "a");
  EXPECT_EQ(v.key(1), "a b");
  EXPECT_EQ(v.key(2), "a b c");
  EXPECT_EQ(v.index("b c"), 4);
  EXPECT_EQ(v.index("c b"), -1);
}

TEST(Vocab, MinDocumentFrequency) {
  const std::vector<Tokens> corpus{{"a", "b"}, {"a", "c"}};
  const auto v = build_vocab(corpus, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.key(0), "a");
  EXPECT_EQ(v.doc_freq(0), 2u);
  const std::vector<Tokens> repeated{{"x", "x", "x"}};
  EXPECT_TRUE(build_vocab(repeated, 2).empty());
  EXPECT_TRUE(build_vocab(std::vector<Tokens>{}, 1).empty());
}

TEST(Vocab, DeterministicAndRoundTrip) {
  const std::vector<Tokens> corpus{analyze("fun at the festival"), analyze("the festival was fun"),
                                   analyze("at the gate")};
  const auto a = build_vocab(corpus, 1);
  const auto b = build_vocab(corpus, 1);
  EXPECT_EQ(a, b);
  std::ostringstream out;
  write_vocab(a, out);
  std::istringstream in(out.str());
  EXPECT_EQ(read_vocab(in), a);
}

TEST(Vectorize, Examples) {
  const std::vector<Tokens> corpus{{"a", "b"}, {"b", "a", "b"}};
  const auto v = build_vocab(corpus, 2);
  ASSERT_EQ(v.size(), 3u);  // a, a b, b
  const Tokens doc{"a", "a", "b"};
  const auto tv = vectorize(doc, v);
  const std::uint32_t a = v.index("a"), b = v.index("b"), ab = v.index("a b");
  std::vector<std::pair<std::uint32_t, double>> expected{{a, 2.0}, {b, 1.0}, {ab, 1.0}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(tv.entries, expected);
  EXPECT_TRUE(vectorize(Tokens{"z", "y"}, v).entries.empty());
  EXPECT_TRUE(vectorize(Tokens{}, v).entries.empty());
  const auto bin = vectorize(doc, v, true);
  for (const auto& [i, x] : bin.entries) EXPECT_EQ(x, 1.0);
  EXPECT_EQ(densify(tv, 3)[a], 2.0);
}

TEST(Vectorize, IndicesInRangeAndIncreasing) {
  const std::vector<Tokens> corpus{analyze("we love the big festival"),
                                   analyze("the festival line up"), analyze("we love it")};
  const auto v = build_vocab(corpus, 1);
  for (const auto& doc : {analyze("we love the festival line up"), analyze("nothing known")}) {
    const auto tv = vectorize(doc, v);
    for (std::size_t i = 0; i < tv.entries.size(); ++i) {
      EXPECT_LT(tv.entries[i].first, v.size());
      if (i > 0) {
        EXPECT_LT(tv.entries[i - 1].first, tv.entries[i].first);
      }
    }
  }
}
