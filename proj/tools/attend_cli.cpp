// attend: command-line front end for the attendance-prediction pipeline.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "attend/config.hpp"
#include "attend/cv.hpp"
#include "attend/dataset.hpp"
#include "attend/embedding.hpp"
#include "attend/experiment.hpp"
#include "attend/harp.hpp"
#include "attend/mlp.hpp"
#include "attend/text.hpp"

namespace {

using namespace attend;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

Config load_config_or_empty(const std::string& path) {
  return path.empty() ? Config{} : Config::load(path);
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(list)) out.push_back(std::stoul(item));
  return out;
}

struct FeatureSpace {
  std::optional<Vocabulary> vocab;
  std::optional<EmbeddingMatrix> embedding;
  Graph users;

  std::size_t width() const {
    const std::size_t w = (vocab ? vocab->size() : 0) + (embedding ? embedding->dim() : 0);
    return std::max<std::size_t>(1, w);
  }

  SparseRow row(const LabeledPost& post) const {
    std::vector<double> dense(width(), 0.0);
    std::size_t offset = 0;
    if (vocab) {
      for (const auto& [idx, value] : vectorize(analyze(post.text), *vocab).entries) dense[idx] = value;
      offset = vocab->size();
    }
    if (embedding) {
      NodeId u = 0;
      if (!users.find(post.user_id, u)) throw std::runtime_error("no embedding row for user '" + post.user_id + "'");
      const auto vec = embedding->row(u);
      std::copy(vec.begin(), vec.end(), dense.begin() + static_cast<std::ptrdiff_t>(offset));
    }
    return SparseRow::from_dense(dense);
  }
};

FeatureSpace feature_space(const std::string& embeddings_path) {
  FeatureSpace space;
  if (!embeddings_path.empty()) {
    auto in = open_in(embeddings_path);
    const auto emb = read_embedding(in);
    space.users = Graph(emb.ids.size(), {}, emb.ids);
    space.embedding = emb.matrix;
  }
  return space;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event attendance prediction from posts and social-graph embeddings"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic posts file and edge list");
  SyntheticConfig synth_cfg;
  std::string synth_posts, synth_edges;
  synth->add_option("--users", synth_cfg.n_users, "Number of users")->capture_default_str();
  synth->add_option("--groups", synth_cfg.n_groups, "Number of social groups")->capture_default_str();
  synth->add_option("--coherence", synth_cfg.coherence, "P(label matches group majority)")
      ->capture_default_str();
  synth->add_option("--signal", synth_cfg.signal, "Per-token event-word probability for attendees")
      ->capture_default_str();
  synth->add_option("--vocab-size", synth_cfg.vocab_size, "Background vocabulary size")->capture_default_str();
  synth->add_option("--post-length", synth_cfg.post_length, "Tokens per post")->capture_default_str();
  synth->add_option("--posts-per-user", synth_cfg.posts_per_user, "Posts per user")->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "Random seed")->capture_default_str();
  synth->add_option("--posts", synth_posts, "Output posts file")->required();
  synth->add_option("--edges", synth_edges, "Output edge list")->required();

  // embed
  auto* embed = app.add_subcommand("embed", "Embed the nodes of an edge list");
  std::string embed_method = "harp", embed_edges, embed_out, embed_config, embed_hierarchy, embed_posts;
  std::vector<std::string> sweep_specs;
  std::optional<std::size_t> embed_dim, embed_window, embed_epochs, embed_seed, embed_threshold;
  embed->add_option("--method", embed_method, "node2vec | harp | poincare")
      ->check(CLI::IsMember({"node2vec", "harp", "poincare"}))
      ->capture_default_str();
  embed->add_option("--edges", embed_edges, "Input edge list")->required();
  embed->add_option("--out", embed_out, "Output embedding file");
  embed->add_option("--config", embed_config, "Config file ([node2vec] [harp] [poincare] sections)");
  embed->add_option("--dim", embed_dim, "Embedding dimension");
  embed->add_option("--window", embed_window, "Context window radius (negatives for poincare)");
  embed->add_option("--epochs", embed_epochs, "Training epochs");
  embed->add_option("--seed", embed_seed, "Random seed");
  embed->add_option("--threshold", embed_threshold, "HARP coarsening stop size");
  embed->add_option("--hierarchy", embed_hierarchy, "Write the HARP level sizes here");
  embed->add_option("--sweep", sweep_specs, "Parameter sweep, e.g. d=16,32,64 k=2,4")->expected(1, 2);
  embed->add_option("--posts", embed_posts, "Posts file (required with --sweep)");

  // featurize
  auto* featurize = app.add_subcommand("featurize", "Build a vocabulary and text vectors from posts");
  std::string feat_posts, feat_vocab, feat_vectors;
  std::size_t feat_min_df = 2;
  bool feat_binary = false;
  featurize->add_option("--posts", feat_posts, "Input posts file")->required();
  featurize->add_option("--min-df", feat_min_df, "Minimum document frequency")->capture_default_str();
  featurize->add_flag("--binary", feat_binary, "Presence instead of counts");
  featurize->add_option("--vocab-out", feat_vocab, "Vocabulary dump")->required();
  featurize->add_option("--vectors-out", feat_vectors, "Sparse vectors (user, label, idx:value ...)");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the classifier on all posts");
  std::string train_posts, train_embeddings, train_model, train_vocab;
  bool train_no_text = false;
  std::size_t train_min_df = 2, train_hidden_cap = 0;
  TrainConfig train_cfg;
  train_cmd->add_option("--posts", train_posts, "Input posts file")->required();
  train_cmd->add_option("--embeddings", train_embeddings, "Embedding file (network features)");
  train_cmd->add_flag("--no-text", train_no_text, "Use network features only");
  train_cmd->add_option("--min-df", train_min_df, "Minimum document frequency")->capture_default_str();
  train_cmd->add_option("--epochs", train_cfg.epochs, "Epochs")->capture_default_str();
  train_cmd->add_option("--batch", train_cfg.batch_size, "Mini-batch size")->capture_default_str();
  train_cmd->add_option("--lr", train_cfg.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--patience", train_cfg.patience, "Early-stop patience (0 = off)")->capture_default_str();
  train_cmd->add_option("--hidden-cap", train_hidden_cap, "Cap on hidden width (0 = mean rule)");
  train_cmd->add_option("--seed", train_cfg.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--model-out", train_model, "Output model file")->required();
  train_cmd->add_option("--vocab-out", train_vocab, "Output vocabulary (required unless --no-text)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a trained model on labeled posts");
  std::string eval_posts, eval_model, eval_vocab, eval_embeddings;
  eval_cmd->add_option("--posts", eval_posts, "Labeled posts file")->required();
  eval_cmd->add_option("--model", eval_model, "Model file")->required();
  eval_cmd->add_option("--vocab", eval_vocab, "Vocabulary written by train");
  eval_cmd->add_option("--embeddings", eval_embeddings, "Embedding file used in training");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Cross-validated evaluation from one config file");
  std::string pipe_config, pipe_report;
  pipeline->add_option("--config", pipe_config, "Experiment config")->required();
  pipeline->add_option("--report", pipe_report, "Report CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*synth) {
      const Dataset data = generate_synthetic(synth_cfg);
      auto posts = open_out(synth_posts);
      write_posts(data.posts, posts);
      auto edges = open_out(synth_edges);
      write_edge_list(data.graph, edges);
      const auto c = data.counts();
      std::cerr << "wrote " << data.posts.size() << " posts (" << c.positive << " positive), "
                << data.graph.edge_count() << " edges\n";
    } else if (*embed) {
      ExperimentConfig cfg = ExperimentConfig::from_config(load_config_or_empty(embed_config));
      auto& s = cfg.embedding.sgns;
      auto& pc = cfg.embedding.poincare;
      if (embed_dim) s.dim = pc.dim = *embed_dim;
      if (embed_window) {
        s.window = *embed_window;
        pc.negatives = *embed_window;
      }
      if (embed_epochs) s.epochs = pc.epochs = *embed_epochs;
      if (embed_seed) {
        s.seed = pc.seed = *embed_seed;
        cfg.embedding.walks.seed = derive_seed(*embed_seed, 1);
      }
      if (embed_threshold) cfg.embedding.harp_threshold = *embed_threshold;
      const EmbeddingMethod method = parse_method(embed_method);

      auto edges_in = open_in(embed_edges);
      const Graph graph = load_edge_list(edges_in);

      if (!sweep_specs.empty()) {
        if (embed_posts.empty()) throw std::invalid_argument("--sweep needs --posts");
        std::vector<std::size_t> dims, windows;
        for (const auto& spec : sweep_specs) {
          const auto eq = spec.find('=');
          if (eq == std::string::npos) throw std::invalid_argument("bad sweep spec '" + spec + "'");
          const std::string key = spec.substr(0, eq);
          if (key == "d") dims = parse_sizes(spec.substr(eq + 1));
          else if (key == "k") windows = parse_sizes(spec.substr(eq + 1));
          else throw std::invalid_argument("sweep parameter must be d or k, got '" + key + "'");
        }
        cfg.posts_path = embed_posts;
        cfg.edges_path = embed_edges;
        const Dataset data = load_dataset(cfg);
        std::cout << "parameter,value,accuracy\n";
        for (const auto& point : run_sweep(cfg, data, method, dims, windows)) {
          char acc[32];
          std::snprintf(acc, sizeof(acc), "%.6f", point.accuracy);
          std::cout << point.parameter << ',' << point.value << ',' << acc << '\n';
        }
        return 0;
      }
      if (embed_out.empty()) throw std::invalid_argument("--out is required");
      if (method == EmbeddingMethod::Harp && !embed_hierarchy.empty()) {
        const std::size_t threshold = cfg.embedding.harp_threshold == 0
                                          ? default_threshold(graph.node_count())
                                          : cfg.embedding.harp_threshold;
        auto dump = open_out(embed_hierarchy);
        dump_hierarchy(build_hierarchy(graph, threshold, derive_seed(derive_seed(s.seed, 7), 0)), dump);
      }
      const EmbeddingMatrix emb = compute_embedding(graph, method, cfg.embedding);
      auto out = open_out(embed_out);
      write_embedding(out, graph.external_ids(), emb);
    } else if (*featurize) {
      auto in = open_in(feat_posts);
      const auto posts = read_posts(in);
      std::vector<Tokens> docs;
      for (const auto& p : posts) docs.push_back(analyze(p.text));
      const Vocabulary vocab = build_vocab(docs, feat_min_df);
      auto vocab_out = open_out(feat_vocab);
      write_vocab(vocab, vocab_out);
      if (!feat_vectors.empty()) {
        auto vec_out = open_out(feat_vectors);
        for (std::size_t i = 0; i < posts.size(); ++i) {
          vec_out << posts[i].user_id << '\t' << posts[i].label << '\t';
          bool first = true;
          for (const auto& [idx, value] : vectorize(docs[i], vocab, feat_binary).entries) {
            vec_out << (first ? "" : " ") << idx << ':' << value;
            first = false;
          }
          vec_out << '\n';
        }
      }
      std::cerr << "vocabulary: " << vocab.size() << " grams from " << posts.size() << " posts\n";
    } else if (*train_cmd) {
      if (train_no_text && train_embeddings.empty()) {
        throw std::invalid_argument("--no-text needs --embeddings");
      }
      if (!train_no_text && train_vocab.empty()) throw std::invalid_argument("--vocab-out is required with text features");
      auto in = open_in(train_posts);
      const auto posts = read_posts(in);
      FeatureSpace space = feature_space(train_embeddings);
      if (!train_no_text) {
        std::vector<Tokens> docs;
        for (const auto& p : posts) docs.push_back(analyze(p.text));
        space.vocab = build_vocab(docs, train_min_df);
        auto vocab_out = open_out(train_vocab);
        write_vocab(*space.vocab, vocab_out);
      }
      std::vector<SparseRow> rows;
      std::vector<int> labels;
      for (const auto& p : posts) {
        rows.push_back(space.row(p));
        labels.push_back(p.label);
      }
      MlpModel model = init_model(space.width(), derive_seed(train_cfg.seed, 1), train_hidden_cap);
      model = train(std::move(model), rows, labels, train_cfg);
      auto out = open_out(train_model);
      save_model(model, out);
      std::cerr << "model: " << model.n_in() << " inputs, " << model.hidden() << " hidden\n";
    } else if (*eval_cmd) {
      auto in = open_in(eval_posts);
      const auto posts = read_posts(in);
      auto model_in = open_in(eval_model);
      const MlpModel model = load_model(model_in);
      FeatureSpace space = feature_space(eval_embeddings);
      if (!eval_vocab.empty()) {
        auto vin = open_in(eval_vocab);
        space.vocab = read_vocab(vin);
      }
      if (space.width() != model.n_in()) {
        throw std::invalid_argument("feature width " + std::to_string(space.width()) +
                                    " does not match model input " + std::to_string(model.n_in()));
      }
      std::vector<int> truth, predicted;
      for (const auto& p : posts) {
        truth.push_back(p.label);
        predicted.push_back(predict(model, space.row(p)));
      }
      const Metrics m = compute_metrics(truth, predicted);
      std::printf("accuracy,precision,recall,f1\n%.6f,%.6f,%.6f,%.6f\n", m.accuracy, m.precision,
                  m.recall, m.f1);
    } else if (*pipeline) {
      const ExperimentConfig cfg = ExperimentConfig::from_config(Config::load(pipe_config));
      const EvalReport report = run_experiment(cfg);
      if (pipe_report.empty()) {
        write_report(report, std::cout);
      } else {
        auto out = open_out(pipe_report);
        write_report(report, out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
