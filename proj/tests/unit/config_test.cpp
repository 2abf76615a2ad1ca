#include <gtest/gtest.h>

#include "attend/config.hpp"
#include "attend/graph.hpp"

using namespace attend;

TEST(ConfigFile, ParsesSectionsAndComments) {
  const auto c = Config::parse_string(
      "# top\n[node2vec]\ndim = 64\n; note\n  window=  6 \n[mlp]\nbinary = yes\n"
      "list = a, b ,c\n");
  EXPECT_EQ(c.get_size("node2vec", "dim", 0), 64u);
  EXPECT_EQ(c.get_size("node2vec", "window", 0), 6u);
  EXPECT_EQ(c.get_size("node2vec", "epochs", 7), 7u);
  EXPECT_TRUE(c.get_bool("mlp", "binary", false));
  EXPECT_EQ(c.get_list("mlp", "list", {}), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(c.has("mlp", "list"));
  EXPECT_FALSE(c.has("mlp", "dim"));
}

TEST(ConfigFile, TypeErrors) {
  const auto c = Config::parse_string("[a]\nn = -3\nx = abc\nb = maybe\nd = 1.5e\n");
  EXPECT_THROW(c.get_size("a", "n", 0), std::invalid_argument);
  EXPECT_THROW(c.get_double("a", "x", 0), std::invalid_argument);
  EXPECT_THROW(c.get_bool("a", "b", false), std::invalid_argument);
  EXPECT_THROW(c.get_double("a", "d", 0), std::invalid_argument);
}

TEST(ConfigFile, SyntaxErrors) {
  EXPECT_THROW(Config::parse_string("[a\nx = 1\n"), ParseError);
  EXPECT_THROW(Config::parse_string("x = 1\n"), ParseError);
  EXPECT_THROW(Config::parse_string("[a]\njust words\n"), ParseError);
  EXPECT_THROW(Config::load("/nonexistent/config.ini"), std::runtime_error);
}

TEST(ConfigFile, StrictKeys) {
  const auto c = Config::parse_string("[a]\nx = 1\ny = 2\n");
  EXPECT_NO_THROW(c.require_known("a", {"x", "y"}));
  EXPECT_THROW(c.require_known("a", {"x"}), std::invalid_argument);
  EXPECT_THROW(c.require_sections({"b"}), std::invalid_argument);
}

TEST(ConfigFile, CanonicalOrderIndependent) {
  const auto a = Config::parse_string("[b]\ny = 2\n[a]\nx = 1\n");
  const auto b = Config::parse_string("[a]\nx=1\n[b]\ny =2\n");
  EXPECT_EQ(a.canonical(), b.canonical());
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Strings, TrimAndSplit) {
  EXPECT_EQ(trim("  x y \t"), "x y");
  EXPECT_EQ(split_list("1, 2,,3"), (std::vector<std::string>{"1", "2", "3"}));
}
