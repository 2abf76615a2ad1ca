#include <gtest/gtest.h>

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "attend/dataset.hpp"
#include "attend/text.hpp"

using namespace attend;

namespace {

// Background words look like "w042".
bool is_event_word(const std::string& t) {
  return !(t.size() == 4 && t[0] == 'w' && std::isdigit(static_cast<unsigned char>(t[1])));
}

}  // namespace

TEST(Synthetic, FourteenComponents) {
  SyntheticConfig cfg;
  cfg.n_users = 303;
  cfg.n_groups = 14;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seed = seed;
    const auto data = generate_synthetic(cfg);
    EXPECT_EQ(data.graph.node_count(), 303u);
    EXPECT_EQ(connected_components(data.graph).size(), 14u);
    EXPECT_EQ(data.posts.size(), 303u);
  }
}

TEST(Synthetic, PerfectSignalCorner) {
  SyntheticConfig cfg;
  cfg.n_users = 120;
  cfg.n_groups = 6;
  cfg.coherence = 1.0;
  cfg.signal = 1.0;
  const auto data = generate_synthetic(cfg);
  std::map<std::string, int> label_of;
  for (const auto& p : data.posts) label_of[p.user_id] = p.label;
  for (const auto& comp : connected_components(data.graph)) {
    std::set<int> labels;
    for (NodeId u : comp) labels.insert(label_of.at(data.graph.external_id(u)));
    EXPECT_EQ(labels.size(), 1u);
  }
  for (const auto& p : data.posts) {
    for (const auto& tok : tokenize(p.text)) EXPECT_EQ(is_event_word(tok), p.label == 1) << tok;
  }
  const auto c = data.counts();
  EXPECT_GT(c.positive, 0u);
  EXPECT_GT(c.negative, 0u);
}

TEST(Synthetic, NoSignalCorner) {
  SyntheticConfig cfg;
  cfg.coherence = 0.5;
  cfg.signal = 0.5;
  cfg.n_users = 2000;
  cfg.post_length = 20;
  const auto data = generate_synthetic(cfg);
  double event_pos = 0, total_pos = 0, event_neg = 0, total_neg = 0;
  for (const auto& p : data.posts) {
    for (const auto& tok : tokenize(p.text)) {
      (p.label ? total_pos : total_neg) += 1;
      if (is_event_word(tok)) (p.label ? event_pos : event_neg) += 1;
    }
  }
  EXPECT_NEAR(event_pos / total_pos, 0.5, 0.02);
  EXPECT_NEAR(event_neg / total_neg, 0.5, 0.02);
}

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticConfig cfg;
  cfg.seed = 5;
  const auto a = generate_synthetic(cfg);
  const auto b = generate_synthetic(cfg);
  EXPECT_EQ(a.posts, b.posts);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  cfg.seed = 6;
  EXPECT_NE(generate_synthetic(cfg).posts, a.posts);
}

TEST(Synthetic, MultiplePostsAlternatePhases) {
  SyntheticConfig cfg;
  cfg.n_users = 20;
  cfg.n_groups = 2;
  cfg.posts_per_user = 2;
  const auto data = generate_synthetic(cfg);
  ASSERT_EQ(data.posts.size(), 40u);
  EXPECT_EQ(data.posts[0].phase, Phase::Before);
  EXPECT_EQ(data.posts[1].phase, Phase::During);
  EXPECT_EQ(data.posts[0].user_id, data.posts[1].user_id);
  const auto before = data.counts(Phase::Before);
  EXPECT_EQ(before.positive + before.negative, 20u);
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticConfig cfg;
  cfg.coherence = 1.5;
  EXPECT_THROW(generate_synthetic(cfg), std::invalid_argument);
}

TEST(Posts, RoundTrip) {
  SyntheticConfig cfg;
  cfg.n_users = 30;
  cfg.n_groups = 3;
  const auto data = generate_synthetic(cfg);
  std::stringstream io;
  write_posts(data.posts, io);
  EXPECT_EQ(read_posts(io), data.posts);
}

TEST(Posts, ParseErrors) {
  std::istringstream missing("u1\tbefore\t1\n");
  EXPECT_THROW(read_posts(missing), ParseError);
  std::istringstream label("u1\tbefore\t2\thello\n");
  EXPECT_THROW(read_posts(label), ParseError);
  std::istringstream phase("u1\tafter\t1\thello\n");
  EXPECT_THROW(read_posts(phase), ParseError);
  std::istringstream ok("u1\tduring\t0\thello there\n");
  const auto posts = read_posts(ok);
  ASSERT_EQ(posts.size(), 1u);
  EXPECT_EQ(posts[0].phase, Phase::During);
  EXPECT_EQ(posts[0].text, "hello there");
}
