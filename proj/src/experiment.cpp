#include "attend/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "attend/harp.hpp"
#include "attend/simd.hpp"
#include "attend/text.hpp"

namespace attend {

std::string_view method_name(EmbeddingMethod method) {
  switch (method) {
    case EmbeddingMethod::None:
      return "none";
    case EmbeddingMethod::Node2Vec:
      return "node2vec";
    case EmbeddingMethod::Harp:
      return "harp";
    case EmbeddingMethod::Poincare:
      return "poincare";
  }
  return "none";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<EmbeddingMethod> method_from_token(const std::string& token) {
  if (token == "node2vec" || token == "n2v") return EmbeddingMethod::Node2Vec;
  if (token == "harp") return EmbeddingMethod::Harp;
  if (token == "poincare") return EmbeddingMethod::Poincare;
  return std::nullopt;
}

}  // namespace

EmbeddingMethod parse_method(std::string_view name) {
  if (auto m = method_from_token(lower(name))) return *m;
  throw std::invalid_argument("unknown embedding method '" + std::string(name) +
                              "' (expected node2vec|harp|poincare)");
}

Variant parse_variant(std::string_view name) {
  const std::string key = lower(trim(name));
  Variant v;
  std::string method_part = key;
  if (key == "t") {
    v.name = "T";
    v.use_text = true;
    return v;
  }
  if (key.rfind("t+", 0) == 0) {
    v.use_text = true;
    method_part = key.substr(2);
  }
  const auto method = method_from_token(method_part);
  if (!method) throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
  v.embedding = *method;
  static const std::map<EmbeddingMethod, std::string> short_names{
      {EmbeddingMethod::Node2Vec, "N2V"}, {EmbeddingMethod::Harp, "HARP"},
      {EmbeddingMethod::Poincare, "Poincare"}};
  v.name = (v.use_text ? "T+" : "") + short_names.at(v.embedding);
  return v;
}

std::vector<Variant> default_variants() {
  return {parse_variant("T+HARP"), parse_variant("T+N2V"), parse_variant("T+Poincare"),
          parse_variant("T"), parse_variant("HARP")};
}

EmbeddingMatrix compute_embedding(const Graph& graph, EmbeddingMethod method,
                                  const EmbeddingSettings& settings) {
  switch (method) {
    case EmbeddingMethod::Node2Vec:
      return train_sgns(generate_walks(graph, settings.walks), settings.sgns, graph.node_count());
    case EmbeddingMethod::Harp: {
      HarpOptions options;
      options.threshold = settings.harp_threshold;
      options.seed = derive_seed(settings.sgns.seed, 7);
      return harp_embed(graph, settings.sgns, settings.walks, options);
    }
    case EmbeddingMethod::Poincare:
      return train_poincare(graph, settings.poincare);
    case EmbeddingMethod::None:
      break;
  }
  throw std::invalid_argument("no embedding method selected");
}

ExperimentConfig ExperimentConfig::from_config(const Config& c) {
  c.require_sections({"data", "synth", "text", "node2vec", "harp", "poincare", "mlp", "experiment"});
  c.require_known("data", {"posts", "edges"});
  c.require_known("synth", {"users", "groups", "coherence", "signal", "vocab_size", "event_tokens",
                            "post_length", "posts_per_user", "extra_edge_prob", "seed"});
  c.require_known("text", {"min_df", "binary"});
  c.require_known("node2vec", {"p", "q", "walk_length", "walks_per_node", "dim", "window",
                               "negatives", "epochs", "learning_rate", "min_learning_rate", "seed"});
  c.require_known("harp", {"threshold"});
  c.require_known("poincare", {"dim", "epochs", "learning_rate", "negatives", "burn_in_epochs",
                               "burn_in_factor", "ball_eps", "seed"});
  c.require_known("mlp", {"epochs", "batch_size", "learning_rate", "patience", "holdout_fraction",
                          "hidden_cap", "seed"});
  c.require_known("experiment", {"variants", "folds", "seed", "lone_attendee_groups"});

  ExperimentConfig out;
  out.seed = c.get_u64("experiment", "seed", 1);
  out.folds = c.get_size("experiment", "folds", 4);
  out.lone_attendee_groups = c.get_size("experiment", "lone_attendee_groups", 0);
  if (c.has("experiment", "variants")) {
    out.variants.clear();
    for (const auto& name : c.get_list("experiment", "variants", {})) {
      out.variants.push_back(parse_variant(name));
    }
    if (out.variants.empty()) throw std::invalid_argument("experiment variants list is empty");
  }

  out.posts_path = c.get_string("data", "posts", "");
  out.edges_path = c.get_string("data", "edges", "");
  if (out.posts_path.empty()) {
    SyntheticConfig s;
    s.n_users = c.get_size("synth", "users", s.n_users);
    s.n_groups = c.get_size("synth", "groups", s.n_groups);
    s.coherence = c.get_double("synth", "coherence", s.coherence);
    s.signal = c.get_double("synth", "signal", s.signal);
    s.vocab_size = c.get_size("synth", "vocab_size", s.vocab_size);
    s.event_tokens = c.get_size("synth", "event_tokens", s.event_tokens);
    s.post_length = c.get_size("synth", "post_length", s.post_length);
    s.posts_per_user = c.get_size("synth", "posts_per_user", s.posts_per_user);
    s.extra_edge_prob = c.get_double("synth", "extra_edge_prob", s.extra_edge_prob);
    s.seed = c.get_u64("synth", "seed", derive_seed(out.seed, 1));
    s.validate();
    out.synthetic = s;
  }

  out.min_df = c.get_size("text", "min_df", 2);
  out.binary_text = c.get_bool("text", "binary", false);

  auto& w = out.embedding.walks;
  w.p = c.get_double("node2vec", "p", w.p);
  w.q = c.get_double("node2vec", "q", w.q);
  w.walk_length = c.get_size("node2vec", "walk_length", w.walk_length);
  w.walks_per_node = c.get_size("node2vec", "walks_per_node", w.walks_per_node);
  auto& s = out.embedding.sgns;
  s.dim = c.get_size("node2vec", "dim", s.dim);
  s.window = c.get_size("node2vec", "window", s.window);
  s.negatives = c.get_size("node2vec", "negatives", s.negatives);
  s.epochs = c.get_size("node2vec", "epochs", s.epochs);
  s.learning_rate = c.get_double("node2vec", "learning_rate", s.learning_rate);
  s.min_learning_rate = c.get_double("node2vec", "min_learning_rate", s.min_learning_rate);
  s.seed = c.get_u64("node2vec", "seed", derive_seed(out.seed, 2));
  w.seed = derive_seed(s.seed, 1);
  w.validate();
  s.validate();
  out.embedding.harp_threshold = c.get_size("harp", "threshold", 0);

  auto& pc = out.embedding.poincare;
  pc.dim = c.get_size("poincare", "dim", pc.dim);
  pc.epochs = c.get_size("poincare", "epochs", pc.epochs);
  pc.learning_rate = c.get_double("poincare", "learning_rate", pc.learning_rate);
  pc.negatives = c.get_size("poincare", "negatives", pc.negatives);
  pc.burn_in_epochs = c.get_size("poincare", "burn_in_epochs", pc.burn_in_epochs);
  pc.burn_in_factor = c.get_double("poincare", "burn_in_factor", pc.burn_in_factor);
  pc.ball_eps = c.get_double("poincare", "ball_eps", pc.ball_eps);
  pc.seed = c.get_u64("poincare", "seed", derive_seed(out.seed, 3));
  pc.validate();

  auto& m = out.mlp;
  m.epochs = c.get_size("mlp", "epochs", m.epochs);
  m.batch_size = c.get_size("mlp", "batch_size", m.batch_size);
  m.learning_rate = c.get_double("mlp", "learning_rate", m.learning_rate);
  m.patience = c.get_size("mlp", "patience", m.patience);
  m.holdout_fraction = c.get_double("mlp", "holdout_fraction", m.holdout_fraction);
  m.seed = c.get_u64("mlp", "seed", derive_seed(out.seed, 4));
  m.validate();
  out.hidden_cap = c.get_size("mlp", "hidden_cap", 0);

  out.fingerprint = fnv1a_hex(c.canonical());
  return out;
}

Dataset load_dataset(const ExperimentConfig& config) {
  Dataset data;
  if (config.posts_path.empty()) {
    if (!config.synthetic) throw std::invalid_argument("no posts file and no synthetic settings");
    data = generate_synthetic(*config.synthetic);
  } else {
    std::ifstream posts(config.posts_path);
    if (!posts) throw std::runtime_error("cannot open posts file '" + config.posts_path + "'");
    data.posts = read_posts(posts);
    if (!config.edges_path.empty()) {
      std::ifstream edges(config.edges_path);
      if (!edges) throw std::runtime_error("cannot open edge list '" + config.edges_path + "'");
      data.graph = load_edge_list(edges);
    }
  }
  std::vector<std::string> authors;
  authors.reserve(data.posts.size());
  for (const auto& post : data.posts) authors.push_back(post.user_id);
  data.graph = with_nodes(data.graph, authors);

  if (config.lone_attendee_groups > 0) {
    std::set<NodeId> lone;
    for (const auto& post : data.posts) {
      NodeId u = 0;
      if (post.label == 1 && data.graph.find(post.user_id, u) && data.graph.degree(u) == 0) {
        lone.insert(u);
      }
    }
    const std::vector<NodeId> lone_users(lone.begin(), lone.end());
    const auto groups = make_artificial_groups(lone_users, config.lone_attendee_groups,
                                               derive_seed(config.seed, 5));
    data.graph = with_edges(data.graph, groups.added_edges);
  }
  return data;
}

namespace {

struct FoldInputs {
  std::vector<SparseRow> rows;
  std::size_t width = 0;
};

FoldInputs assemble(const Variant& variant, const std::vector<TextVector>& text,
                    std::size_t vocab_size, const EmbeddingMatrix* embedding,
                    const std::vector<NodeId>& post_node) {
  FoldInputs out;
  const std::size_t text_width = variant.use_text ? vocab_size : 0;
  const std::size_t emb_width = embedding ? embedding->dim() : 0;
  out.width = std::max<std::size_t>(1, text_width + emb_width);
  out.rows.reserve(post_node.size());
  for (std::size_t i = 0; i < post_node.size(); ++i) {
    out.rows.push_back(feature_row(variant.use_text ? &text[i] : nullptr, text_width, embedding,
                                   post_node[i]));
  }
  return out;
}

Metrics mean_of(const std::vector<Metrics>& folds) {
  Metrics m;
  for (const auto& f : folds) {
    m.accuracy += f.accuracy;
    m.precision += f.precision;
    m.recall += f.recall;
    m.f1 += f.f1;
  }
  const auto k = static_cast<double>(folds.size());
  m.accuracy /= k;
  m.precision /= k;
  m.recall /= k;
  m.f1 /= k;
  return m;
}

std::string fixed6(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", x);
  return buffer;
}

}  // namespace

Vocabulary fold_vocabulary(std::span<const Tokens> docs, std::span<const std::size_t> train_idx,
                           std::size_t min_df) {
  std::vector<Tokens> train_docs;
  train_docs.reserve(train_idx.size());
  for (std::size_t i : train_idx) train_docs.push_back(docs[i]);
  return build_vocab(train_docs, min_df);
}

std::vector<double> concat_features(std::span<const double> text, const EmbeddingMatrix& embedding,
                                    NodeId node) {
  if (node >= embedding.rows()) {
    throw std::out_of_range("no embedding row for node " + std::to_string(node));
  }
  std::vector<double> out(text.begin(), text.end());
  const auto row = embedding.row(node);
  out.insert(out.end(), row.begin(), row.end());
  return out;
}

SparseRow feature_row(const TextVector* text, std::size_t text_width,
                      const EmbeddingMatrix* embedding, NodeId node) {
  SparseRow row;
  if (text) {
    for (const auto& [idx, value] : text->entries) {
      if (idx >= text_width) throw std::out_of_range("text index exceeds the text block");
      if (value == 0.0) continue;
      row.indices.push_back(idx);
      row.values.push_back(value);
    }
  }
  if (embedding) {
    if (node >= embedding->rows()) {
      throw std::out_of_range("no embedding row for node " + std::to_string(node));
    }
    const auto vec = embedding->row(node);
    for (std::size_t j = 0; j < vec.size(); ++j) {
      if (vec[j] == 0.0) continue;
      row.indices.push_back(static_cast<std::uint32_t>(text_width + j));
      row.values.push_back(vec[j]);
    }
  }
  return row;
}

const VariantResult* EvalReport::find(std::string_view name) const {
  for (const auto& v : variants) {
    if (v.variant.name == name) return &v;
  }
  return nullptr;
}

EvalReport run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, load_dataset(config));
}

EvalReport run_experiment(const ExperimentConfig& config, const Dataset& data) {
  if (config.variants.empty()) throw std::invalid_argument("no variants to evaluate");
  const std::size_t n = data.posts.size();

  std::vector<NodeId> post_node(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!data.graph.find(data.posts[i].user_id, post_node[i])) {
      throw std::invalid_argument("user '" + data.posts[i].user_id + "' has no graph node");
    }
  }

  std::map<EmbeddingMethod, EmbeddingMatrix> embeddings;
  for (const auto& v : config.variants) {
    if (v.embedding != EmbeddingMethod::None && !embeddings.count(v.embedding)) {
      embeddings.emplace(v.embedding, compute_embedding(data.graph, v.embedding, config.embedding));
    }
  }

  std::vector<Tokens> tokens;
  tokens.reserve(n);
  for (const auto& post : data.posts) tokens.push_back(analyze(post.text));
  const std::vector<int> labels = data.labels();
  const auto folds = stratified_kfold(labels, config.folds, derive_seed(config.seed, 11));

  EvalReport report;
  report.fingerprint = config.fingerprint;
  report.variants.resize(config.variants.size());
  std::vector<std::vector<int>> pooled(config.variants.size(), std::vector<int>(n, 0));
  for (std::size_t v = 0; v < config.variants.size(); ++v) report.variants[v].variant = config.variants[v];

  std::size_t hidden_cap_hits = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> in_test(n, 0);
    for (std::size_t i : folds[f]) in_test[i] = 1;
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_test[i]) train_idx.push_back(i);
    }

    const Vocabulary vocab = fold_vocabulary(tokens, train_idx, config.min_df);
    std::vector<TextVector> text(n);
    for (std::size_t i = 0; i < n; ++i) text[i] = vectorize(tokens[i], vocab, config.binary_text);

    std::vector<int> train_labels, test_labels;
    for (std::size_t i : train_idx) train_labels.push_back(labels[i]);
    for (std::size_t i : folds[f]) test_labels.push_back(labels[i]);
    const auto train_pos = static_cast<std::size_t>(std::count(train_labels.begin(), train_labels.end(), 1));
    const int majority = 2 * train_pos >= train_labels.size() ? 1 : 0;
    const auto hits = std::count(test_labels.begin(), test_labels.end(), majority);
    report.majority_accuracy.push_back(static_cast<double>(hits) / static_cast<double>(test_labels.size()));

    for (std::size_t v = 0; v < config.variants.size(); ++v) {
      const Variant& variant = config.variants[v];
      const EmbeddingMatrix* emb =
          variant.embedding == EmbeddingMethod::None ? nullptr : &embeddings.at(variant.embedding);
      const FoldInputs inputs = assemble(variant, text, vocab.size(), emb, post_node);

      std::vector<SparseRow> train_rows;
      train_rows.reserve(train_idx.size());
      for (std::size_t i : train_idx) train_rows.push_back(inputs.rows[i]);
      MlpModel model = init_model(inputs.width, derive_seed(config.mlp.seed, f), config.hidden_cap);
      if (model.hidden() < hidden_size_for(inputs.width)) ++hidden_cap_hits;
      TrainConfig tc = config.mlp;
      tc.seed = derive_seed(config.mlp.seed, 100 + f);
      model = train(std::move(model), train_rows, train_labels, tc);

      std::vector<int> predicted;
      predicted.reserve(folds[f].size());
      for (std::size_t i : folds[f]) {
        const int y = predict(model, inputs.rows[i]);
        predicted.push_back(y);
        pooled[v][i] = y;
      }
      report.variants[v].folds.push_back(compute_metrics(test_labels, predicted));
    }
  }

  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    auto& result = report.variants[v];
    result.mean = mean_of(result.folds);
    std::size_t correct[2] = {0, 0}, total[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int p = data.posts[i].phase == Phase::Before ? 0 : 1;
      ++total[p];
      if (pooled[v][i] == labels[i]) ++correct[p];
    }
    result.accuracy_before = total[0] ? static_cast<double>(correct[0]) / static_cast<double>(total[0]) : 0.0;
    result.accuracy_during = total[1] ? static_cast<double>(correct[1]) / static_cast<double>(total[1]) : 0.0;
  }
  double majority_sum = 0.0;
  for (double a : report.majority_accuracy) majority_sum += a;
  report.majority_mean = majority_sum / static_cast<double>(report.majority_accuracy.size());

  const auto counts = data.counts();
  report.notes = {
      {"config_fingerprint", config.fingerprint.empty() ? "-" : config.fingerprint},
      {"posts", std::to_string(n) + " (" + std::to_string(counts.positive) + " positive, " +
                    std::to_string(counts.negative) + " negative)"},
      {"graph", std::to_string(data.graph.node_count()) + " nodes, " +
                    std::to_string(data.graph.edge_count()) + " edges"},
      {"classification_unit", "post (author embedding row reused)"},
      {"phases", "before and during merged for training"},
      {"embeddings", "trained once on the full graph; no labels used"},
      {"folds", std::to_string(config.folds) + " stratified"},
      {"seeds", "experiment=" + std::to_string(config.seed) +
                    " node2vec=" + std::to_string(config.embedding.sgns.seed) +
                    " poincare=" + std::to_string(config.embedding.poincare.seed) +
                    " mlp=" + std::to_string(config.mlp.seed)},
      {"hidden_cap", config.hidden_cap == 0
                         ? std::string("none")
                         : std::to_string(config.hidden_cap) + " (applied in " +
                               std::to_string(hidden_cap_hits) + " fold models)"},
      {"lone_attendee_groups", config.lone_attendee_groups == 0
                                   ? std::string("off")
                                   : std::to_string(config.lone_attendee_groups) + " (built from labels)"},
      {"simd_backend", std::string(simd::backend_name(simd::active_backend()))},
  };
  return report;
}

void write_report(const EvalReport& report, std::ostream& out) {
  out << "variant,fold,accuracy,precision,recall,f1\n";
  auto row = [&](const std::string& name, const std::string& fold, const Metrics& m) {
    out << name << ',' << fold << ',' << fixed6(m.accuracy) << ',' << fixed6(m.precision) << ','
        << fixed6(m.recall) << ',' << fixed6(m.f1) << '\n';
  };
  for (const auto& v : report.variants) {
    for (std::size_t f = 0; f < v.folds.size(); ++f) row(v.variant.name, std::to_string(f + 1), v.folds[f]);
    row(v.variant.name, "mean", v.mean);
  }
  for (std::size_t f = 0; f < report.majority_accuracy.size(); ++f) {
    out << "majority," << (f + 1) << ',' << fixed6(report.majority_accuracy[f]) << ",,,\n";
  }
  out << "majority,mean," << fixed6(report.majority_mean) << ",,,\n";

  out << "\n# summary\n";
  for (const auto& [key, value] : report.notes) out << "# " << key << ": " << value << '\n';
  for (const auto& v : report.variants) {
    out << "# " << v.variant.name << ": mean accuracy " << fixed6(v.mean.accuracy) << ", f1 "
        << fixed6(v.mean.f1) << ", accuracy before " << fixed6(v.accuracy_before) << ", during "
        << fixed6(v.accuracy_during) << '\n';
  }
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, const Dataset& data,
                                  EmbeddingMethod method, const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& windows) {
  if (method == EmbeddingMethod::None) throw std::invalid_argument("sweep needs an embedding method");
  ExperimentConfig base = config;
  Variant variant;
  variant.use_text = true;
  variant.embedding = method;
  variant.name = "T+" + std::string(method_name(method));
  base.variants = {variant};

  std::vector<SweepPoint> points;
  for (std::size_t d : dims) {
    ExperimentConfig c = base;
    (method == EmbeddingMethod::Poincare ? c.embedding.poincare.dim : c.embedding.sgns.dim) = d;
    points.push_back({"d", d, run_experiment(c, data).variants[0].mean.accuracy});
  }
  for (std::size_t k : windows) {
    ExperimentConfig c = base;
    (method == EmbeddingMethod::Poincare ? c.embedding.poincare.negatives : c.embedding.sgns.window) = k;
    points.push_back({"k", k, run_experiment(c, data).variants[0].mean.accuracy});
  }
  return points;
}

}  // namespace attend
