#pragma once

// Labeled posts plus the social graph of their authors, and a seeded
// generator of such datasets with a controllable amount of signal.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "attend/graph.hpp"

namespace attend {

enum class Phase { Before, During };

std::string_view phase_name(Phase phase);
Phase parse_phase(std::string_view name);

struct LabeledPost {
  std::string user_id;
  Phase phase = Phase::Before;
  int label = 0;
  std::string text;

  friend bool operator==(const LabeledPost&, const LabeledPost&) = default;
};

struct PhaseCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};

struct Dataset {
  std::vector<LabeledPost> posts;
  Graph graph;

  PhaseCounts counts(Phase phase) const;
  PhaseCounts counts() const;
  std::vector<int> labels() const;
};

/// Tab-separated "user_id<TAB>phase<TAB>label<TAB>text" lines.
std::vector<LabeledPost> read_posts(std::istream& in);
void write_posts(const std::vector<LabeledPost>& posts, std::ostream& out);

struct SyntheticConfig {
  std::size_t n_users = 303;
  std::size_t n_groups = 14;
  /// Probability that a user's label matches the majority label of their
  /// group; 0.5 makes labels independent of the graph.
  double coherence = 0.9;
  /// Per-token probability that an attendee draws an event token; a
  /// non-attendee draws one with probability 1 - signal, so 0.5 carries no
  /// textual signal.
  double signal = 0.6;
  std::size_t vocab_size = 100;  ///< background tokens
  std::size_t event_tokens = 8;
  std::size_t post_length = 12;
  std::size_t posts_per_user = 1;
  double extra_edge_prob = 0.15;  ///< intra-group edges beyond the spanning tree
  std::uint64_t seed = 1;

  void validate() const;
};

/// Users are split into connected groups (random spanning tree plus extra
/// intra-group edges, no edges between groups); half the groups lean
/// towards attending.
Dataset generate_synthetic(const SyntheticConfig& config);

}  // namespace attend
