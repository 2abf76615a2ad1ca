#include "attend/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace attend {

std::string_view phase_name(Phase phase) { return phase == Phase::Before ? "before" : "during"; }

Phase parse_phase(std::string_view name) {
  if (name == "before") return Phase::Before;
  if (name == "during") return Phase::During;
  throw std::invalid_argument("unknown phase '" + std::string(name) + "' (expected before|during)");
}

PhaseCounts Dataset::counts(Phase phase) const {
  PhaseCounts c;
  for (const auto& post : posts) {
    if (post.phase != phase) continue;
    (post.label == 1 ? c.positive : c.negative)++;
  }
  return c;
}

PhaseCounts Dataset::counts() const {
  const auto before = counts(Phase::Before);
  const auto during = counts(Phase::During);
  return {before.positive + during.positive, before.negative + during.negative};
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(posts.size());
  for (const auto& post : posts) out.push_back(post.label);
  return out;
}

std::vector<LabeledPost> read_posts(std::istream& in) {
  std::vector<LabeledPost> posts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    const auto t3 = t2 == std::string::npos ? t2 : line.find('\t', t2 + 1);
    if (t3 == std::string::npos) throw ParseError(line_no, "expected 4 tab-separated fields");
    LabeledPost post;
    post.user_id = line.substr(0, t1);
    if (post.user_id.empty()) throw ParseError(line_no, "empty user id");
    try {
      post.phase = parse_phase(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    const std::string label = line.substr(t2 + 1, t3 - t2 - 1);
    if (label != "0" && label != "1") throw ParseError(line_no, "label must be 0 or 1");
    post.label = label == "1" ? 1 : 0;
    post.text = line.substr(t3 + 1);
    posts.push_back(std::move(post));
  }
  return posts;
}

void write_posts(const std::vector<LabeledPost>& posts, std::ostream& out) {
  for (const auto& post : posts) {
    if (post.text.find_first_of("\t\n") != std::string::npos) {
      throw std::invalid_argument("post text of user " + post.user_id + " contains a tab or newline");
    }
    out << post.user_id << '\t' << phase_name(post.phase) << '\t' << post.label << '\t' << post.text
        << '\n';
  }
}

void SyntheticConfig::validate() const {
  if (n_groups < 1) throw std::invalid_argument("synthetic n_groups must be >= 1");
  if (!(coherence >= 0.0 && coherence <= 1.0)) throw std::invalid_argument("coherence must be in [0,1]");
  if (!(signal >= 0.0 && signal <= 1.0)) throw std::invalid_argument("signal must be in [0,1]");
  if (vocab_size < 1 || event_tokens < 1) throw std::invalid_argument("token pools must be nonempty");
  if (post_length < 1 || posts_per_user < 1) throw std::invalid_argument("posts must be nonempty");
}

namespace {

const char* const kEventWords[] = {
    "festival", "ticket", "lineup", "stage", "camping", "wristband", "headliner", "crowd",
    "mainstage", "tent", "setlist", "encore", "moshpit", "arena", "gig", "backstage",
};

std::string event_token(std::size_t i) {
  constexpr std::size_t named = std::size(kEventWords);
  return i < named ? kEventWords[i] : "event" + std::to_string(i);
}

std::string background_token(std::size_t i) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "w%03zu", i);
  return buffer;
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t n = config.n_users;
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "u%04zu", i);
    ids.emplace_back(buffer);
  }

  std::vector<NodeId> users(n);
  std::iota(users.begin(), users.end(), NodeId{0});
  const auto grouping = make_artificial_groups(users, config.n_groups, derive_seed(config.seed, 1),
                                               config.extra_edge_prob);

  Dataset data;
  data.graph = Graph(n, grouping.added_edges, ids);

  const std::size_t groups = grouping.groups.size();
  std::vector<std::size_t> order(groups);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);
  std::size_t leaning = groups / 2;
  if (groups % 2 == 1 && bernoulli(rng, 0.5)) ++leaning;
  std::vector<int> majority(groups, 0);
  for (std::size_t i = 0; i < leaning; ++i) majority[order[i]] = 1;

  std::vector<int> label(n, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    for (NodeId u : grouping.groups[g]) {
      label[u] = bernoulli(rng, config.coherence) ? majority[g] : 1 - majority[g];
    }
  }
  // Users left out of the grouping (fewer than two users overall).
  std::vector<bool> grouped(n, false);
  for (const auto& group : grouping.groups) {
    for (NodeId u : group) grouped[u] = true;
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (!grouped[u]) label[u] = bernoulli(rng, 0.5) ? 1 : 0;
  }

  for (std::size_t u = 0; u < n; ++u) {
    const double event_prob = label[u] == 1 ? config.signal : 1.0 - config.signal;
    for (std::size_t k = 0; k < config.posts_per_user; ++k) {
      LabeledPost post;
      post.user_id = ids[u];
      post.label = label[u];
      post.phase = config.posts_per_user == 1 ? (bernoulli(rng, 0.5) ? Phase::During : Phase::Before)
                                              : (k % 2 == 0 ? Phase::Before : Phase::During);
      for (std::size_t s = 0; s < config.post_length; ++s) {
        if (s > 0) post.text.push_back(' ');
        post.text += bernoulli(rng, event_prob)
                         ? event_token(uniform_index(rng, config.event_tokens))
                         : background_token(uniform_index(rng, config.vocab_size));
      }
      data.posts.push_back(std::move(post));
    }
  }
  return data;
}

}  // namespace attend
