#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "attend/experiment.hpp"
#include "attend/random.hpp"

using namespace attend;

namespace {

ExperimentConfig small_config(std::uint64_t seed) {
  const std::string text =
      "[synth]\nusers = 60\ngroups = 4\nseed = " + std::to_string(seed) +
      "\n[node2vec]\ndim = 8\nwalk_length = 10\nwalks_per_node = 2\nepochs = 1\n"
      "[harp]\nthreshold = 10\n"
      "[poincare]\ndim = 4\nepochs = 3\nburn_in_epochs = 1\n"
      "[mlp]\nepochs = 10\n"
      "[experiment]\nseed = " + std::to_string(seed) + "\n";
  return ExperimentConfig::from_config(Config::parse_string(text));
}

}  // namespace

TEST(Variants, Parsing) {
  const auto v = default_variants();
  std::vector<std::string> names;
  for (const auto& x : v) names.push_back(x.name);
  EXPECT_EQ(names, (std::vector<std::string>{"T+HARP", "T+N2V", "T+Poincare", "T", "HARP"}));
  const auto th = parse_variant("t+harp");
  EXPECT_TRUE(th.use_text);
  EXPECT_EQ(th.embedding, EmbeddingMethod::Harp);
  const auto t = parse_variant("T");
  EXPECT_TRUE(t.use_text);
  EXPECT_EQ(t.embedding, EmbeddingMethod::None);
  EXPECT_FALSE(parse_variant("HARP").use_text);
  EXPECT_THROW(parse_variant("T+GloVe"), std::invalid_argument);
  EXPECT_THROW(parse_method("deepwalk"), std::invalid_argument);
}

TEST(ConcatFeatures, Examples) {
  EmbeddingMatrix e(1, 2);
  e.row(0)[0] = 0.5;
  e.row(0)[1] = -0.5;
  const std::vector<double> text{1, 0, 2};
  EXPECT_EQ(concat_features(text, e, 0), (std::vector<double>{1, 0, 2, 0.5, -0.5}));
  EXPECT_THROW(concat_features(text, e, 1), std::out_of_range);

  EmbeddingMatrix wide(1, 128);
  for (std::size_t i = 0; i < 128; ++i) wide.row(0)[i] = 1.0 + static_cast<double>(i);
  const auto x = concat_features(std::vector<double>(5, 0.0), wide, 0);
  ASSERT_EQ(x.size(), 133u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(x[i], 0.0);
  for (std::size_t i = 0; i < 128; ++i) EXPECT_EQ(x[5 + i], 1.0 + static_cast<double>(i));
}

TEST(ConcatFeatures, SparseRowMatchesDenseLayout) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t width = 1 + uniform_index(rng, 20);
    const std::size_t dim = 1 + uniform_index(rng, 6);
    TextVector tv;
    for (std::uint32_t i = 0; i < width; ++i) {
      if (bernoulli(rng, 0.3)) tv.entries.emplace_back(i, 1.0 + static_cast<double>(uniform_index(rng, 3)));
    }
    EmbeddingMatrix emb(3, dim);
    for (double& v : emb.data()) v = uniform01(rng) - 0.5;
    const NodeId node = static_cast<NodeId>(uniform_index(rng, 3));
    const auto dense = concat_features(densify(tv, width), emb, node);
    const auto row = feature_row(&tv, width, &emb, node);
    const auto expected = SparseRow::from_dense(dense);
    EXPECT_EQ(row.indices, expected.indices);
    EXPECT_EQ(row.values, expected.values);

    const auto text_only = feature_row(&tv, width, nullptr, node);
    EXPECT_EQ(text_only.indices, SparseRow::from_dense(densify(tv, width)).indices);
    const auto emb_only = feature_row(nullptr, 0, &emb, node);
    EXPECT_EQ(emb_only.values, SparseRow::from_dense(emb.row(node)).values);
  }
}

TEST(FoldVocabulary, IgnoresHeldOutDocuments) {
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 8 + uniform_index(rng, 30);
    std::vector<Tokens> docs(n);
    for (auto& d : docs) {
      const std::size_t len = 1 + uniform_index(rng, 6);
      for (std::size_t i = 0; i < len; ++i) d.push_back("t" + std::to_string(uniform_index(rng, 8)));
    }
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
    const auto folds = stratified_kfold(labels, 4, 10 + trial);
    for (const auto& test : folds) {
      std::set<std::size_t> held(test.begin(), test.end());
      std::vector<std::size_t> train_idx;
      std::vector<Tokens> kept;
      for (std::size_t i = 0; i < n; ++i) {
        if (!held.count(i)) {
          train_idx.push_back(i);
          kept.push_back(docs[i]);
        }
      }
      const auto vocab = fold_vocabulary(docs, train_idx, 1);
      EXPECT_EQ(vocab, build_vocab(kept, 1));
      // Rewriting the held-out posts must not change anything.
      auto poisoned = docs;
      for (std::size_t i : test) poisoned[i] = {"leak", "leak", "leak"};
      EXPECT_EQ(fold_vocabulary(poisoned, train_idx, 1), vocab);
      EXPECT_EQ(vocab.index("leak"), -1);
    }
  }
}

TEST(Config, ExperimentDefaultsAndErrors) {
  const auto c = ExperimentConfig::from_config(Config::parse_string(""));
  EXPECT_EQ(c.embedding.sgns.dim, 128u);
  EXPECT_EQ(c.embedding.sgns.window, 4u);
  EXPECT_EQ(c.embedding.walks.p, 1.0);
  EXPECT_EQ(c.embedding.walks.q, 1.0);
  EXPECT_EQ(c.folds, 4u);
  EXPECT_EQ(c.variants.size(), 5u);
  ASSERT_TRUE(c.synthetic.has_value());
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_string("[mlp]\nepoch = 3\n")),
               std::invalid_argument);
  EXPECT_THROW(ExperimentConfig::from_config(Config::parse_string("[bogus]\nx = 1\n")),
               std::invalid_argument);
  EXPECT_THROW(
      ExperimentConfig::from_config(Config::parse_string("[experiment]\nvariants = T, X\n")),
      std::invalid_argument);
  const auto a = ExperimentConfig::from_config(Config::parse_string("[mlp]\nepochs = 3\n"));
  const auto b = ExperimentConfig::from_config(Config::parse_string("[mlp]\nepochs=3\n\n"));
  EXPECT_EQ(a.fingerprint, b.fingerprint);
  EXPECT_NE(a.fingerprint, c.fingerprint);
}

TEST(RunExperiment, ReportIsByteIdenticalAcrossRuns) {
  const auto cfg = small_config(3);
  std::ostringstream a, b;
  write_report(run_experiment(cfg), a);
  write_report(run_experiment(cfg), b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("variant,fold,accuracy,precision,recall,f1\n", 0), 0u);
}

TEST(RunExperiment, ReportShape) {
  const auto cfg = small_config(4);
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.variants.size(), 5u);
  EXPECT_EQ(report.majority_accuracy.size(), 4u);
  for (const auto& v : report.variants) {
    ASSERT_EQ(v.folds.size(), 4u);
    double sum = 0;
    for (const auto& m : v.folds) {
      EXPECT_GE(m.accuracy, 0.0);
      EXPECT_LE(m.accuracy, 1.0);
      sum += m.accuracy;
    }
    EXPECT_NEAR(v.mean.accuracy, sum / 4, 1e-12);
  }
  ASSERT_NE(report.find("T+HARP"), nullptr);
  EXPECT_EQ(report.find("nope"), nullptr);
  std::ostringstream out;
  write_report(report, out);
  const std::string s = out.str();
  EXPECT_NE(s.find("\nT+HARP,mean,"), std::string::npos);
  EXPECT_NE(s.find("\nmajority,mean,"), std::string::npos);
  EXPECT_NE(s.find("# embeddings: trained once on the full graph"), std::string::npos);
}

TEST(RunExperiment, MissingUserIsAnError) {
  auto cfg = small_config(5);
  auto data = load_dataset(cfg);
  data.posts.push_back({"ghost", Phase::Before, 1, "hello"});
  EXPECT_THROW(run_experiment(cfg, data), std::invalid_argument);
}

TEST(RunExperiment, EmbeddingsAreDeterministic) {
  const auto cfg = small_config(6);
  const auto data = load_dataset(cfg);
  for (auto method : {EmbeddingMethod::Node2Vec, EmbeddingMethod::Harp, EmbeddingMethod::Poincare}) {
    EXPECT_EQ(compute_embedding(data.graph, method, cfg.embedding),
              compute_embedding(data.graph, method, cfg.embedding));
  }
}
