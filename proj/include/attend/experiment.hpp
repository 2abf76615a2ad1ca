#pragma once

// End-to-end evaluation: embeddings on the full graph, per-fold vocabulary
// and classifier, stratified k-fold metrics for each feature variant.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attend/config.hpp"
#include "attend/cv.hpp"
#include "attend/dataset.hpp"
#include "attend/embedding.hpp"
#include "attend/mlp.hpp"
#include "attend/poincare.hpp"
#include "attend/sgns.hpp"
#include "attend/text.hpp"
#include "attend/walks.hpp"

namespace attend {

enum class EmbeddingMethod { None, Node2Vec, Harp, Poincare };

std::string_view method_name(EmbeddingMethod method);
EmbeddingMethod parse_method(std::string_view name);

struct Variant {
  std::string name;
  bool use_text = false;
  EmbeddingMethod embedding = EmbeddingMethod::None;
};

/// Accepts T+HARP, T+N2V, T+Poincare, T and HARP (case-insensitive; a
/// bare method name such as N2V or Poincare also works). Throws on
/// anything else.
Variant parse_variant(std::string_view name);
std::vector<Variant> default_variants();

/// Text block first, embedding block second: length |text| + d. Throws
/// std::out_of_range when `node` has no embedding row.
std::vector<double> concat_features(std::span<const double> text, const EmbeddingMatrix& embedding,
                                    NodeId node);

/// Sparse form of the same layout. Either block may be absent; the text
/// block occupies `text_width` columns even when the post has no known grams.
SparseRow feature_row(const TextVector* text, std::size_t text_width,
                      const EmbeddingMatrix* embedding, NodeId node);

/// Vocabulary of the documents listed in `train_idx`; nothing outside
/// them is read.
Vocabulary fold_vocabulary(std::span<const Tokens> docs, std::span<const std::size_t> train_idx,
                           std::size_t min_df);

struct EmbeddingSettings {
  WalkConfig walks;
  SgnsConfig sgns;
  std::size_t harp_threshold = 0;  ///< 0 selects the default rule
  PoincareConfig poincare;
};

/// Embeds every node of `graph` with the given method.
EmbeddingMatrix compute_embedding(const Graph& graph, EmbeddingMethod method,
                                  const EmbeddingSettings& settings);

struct ExperimentConfig {
  std::string posts_path;
  std::string edges_path;  ///< optional; users without edges become isolated nodes
  std::optional<SyntheticConfig> synthetic;  ///< used when posts_path is empty

  std::size_t min_df = 2;
  bool binary_text = false;
  EmbeddingSettings embedding;
  TrainConfig mlp;
  std::size_t hidden_cap = 0;
  std::size_t lone_attendee_groups = 0;  ///< 0 leaves lone attendees isolated

  std::vector<Variant> variants = default_variants();
  std::size_t folds = 4;
  std::uint64_t seed = 1;
  std::string fingerprint;  ///< hash of the canonical config text

  /// Reads sections [data] [synth] [text] [node2vec] [harp] [poincare] [mlp]
  /// [experiment]; unknown sections or keys are errors.
  static ExperimentConfig from_config(const Config& config);
};

struct VariantResult {
  Variant variant;
  std::vector<Metrics> folds;
  Metrics mean;
  /// Accuracy of the pooled out-of-fold predictions per phase.
  double accuracy_before = 0.0;
  double accuracy_during = 0.0;
};

struct EvalReport {
  std::vector<VariantResult> variants;
  std::vector<double> majority_accuracy;  ///< per fold: predict the training majority
  double majority_mean = 0.0;
  std::string fingerprint;
  std::vector<std::pair<std::string, std::string>> notes;

  const VariantResult* find(std::string_view name) const;
};

/// Builds the dataset (file-backed or synthetic) with every post's author
/// present in the graph.
Dataset load_dataset(const ExperimentConfig& config);

/// Runs every variant over the same stratified folds. Vocabularies and
/// models only ever see the training fold.
EvalReport run_experiment(const ExperimentConfig& config);
EvalReport run_experiment(const ExperimentConfig& config, const Dataset& data);

/// CSV block "variant,fold,accuracy,precision,recall,f1" (fold rows, then a
/// "mean" row per variant and the majority baseline) followed by '#'
/// summary lines.
void write_report(const EvalReport& report, std::ostream& out);

/// Mean CV accuracy of the text+embedding variant for each value of one
/// embedding parameter. `parameter` is "d" (dimension) or "k" (context
/// window; negatives for Poincare).
struct SweepPoint {
  std::string parameter;
  std::size_t value = 0;
  double accuracy = 0.0;
};
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, const Dataset& data,
                                  EmbeddingMethod method, const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& windows);

}  // namespace attend
