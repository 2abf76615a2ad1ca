#include "attend/mlp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "attend/config.hpp"
#include "attend/graph.hpp"
#include "attend/random.hpp"
#include "attend/simd.hpp"

namespace attend {

SparseRow SparseRow::from_dense(std::span<const double> dense) {
  SparseRow row;
  for (std::size_t j = 0; j < dense.size(); ++j) {
    if (dense[j] != 0.0) {
      row.indices.push_back(static_cast<std::uint32_t>(j));
      row.values.push_back(dense[j]);
    }
  }
  return row;
}

MlpModel::MlpModel(std::size_t n_in, std::size_t hidden)
    : n_in_(n_in), hidden_(hidden), params_(n_in * hidden + 2 * hidden + 1, 0.0) {
  if (n_in == 0) throw std::invalid_argument("mlp input width must be >= 1");
  if (hidden == 0) throw std::invalid_argument("mlp hidden width must be >= 1");
}

std::size_t hidden_size_for(std::size_t n_in) { return (n_in + 1) / 2; }

MlpModel init_model(std::size_t n_in, std::uint64_t seed, std::size_t hidden_cap) {
  if (n_in == 0) throw std::invalid_argument("mlp input width must be >= 1");
  std::size_t hidden = hidden_size_for(n_in);
  if (hidden_cap > 0) hidden = std::min(hidden, hidden_cap);
  MlpModel model(n_in, hidden);
  Rng rng(seed);
  std::normal_distribution<double> w1_dist(0.0, std::sqrt(2.0 / static_cast<double>(n_in)));
  std::normal_distribution<double> w2_dist(0.0, std::sqrt(2.0 / static_cast<double>(hidden)));
  auto params = model.params();
  for (std::size_t i = 0; i < model.b1_offset(); ++i) params[i] = w1_dist(rng);
  for (double& w : model.w2()) w = w2_dist(rng);
  return model;
}

namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double open_unit(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

void check_row(const MlpModel& model, const SparseRow& x) {
  if (x.indices.size() != x.values.size()) throw std::invalid_argument("malformed sparse row");
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    if (x.indices[k] >= model.n_in()) throw std::invalid_argument("input index out of range");
    if (!std::isfinite(x.values[k])) throw std::invalid_argument("input contains a non-finite value");
  }
}

SparseRow checked_dense(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.n_in()) {
    throw std::invalid_argument("input length " + std::to_string(x.size()) + " != n_in " +
                                std::to_string(model.n_in()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("input contains a non-finite value");
  }
  return SparseRow::from_dense(x);
}

// Pre-activations of the hidden layer; zero inputs contribute exactly nothing
// so skipping them matches the dense sum bit for bit.
void hidden_preactivation(const MlpModel& model, const SparseRow& x, std::vector<double>& pre) {
  const auto b1 = model.b1();
  pre.assign(b1.begin(), b1.end());
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    simd::axpy(x.values[k], model.w1_row(x.indices[k]), pre);
  }
}

double output_logit(const MlpModel& model, const std::vector<double>& pre,
                    std::vector<double>& act) {
  act.resize(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) act[i] = pre[i] > 0.0 ? pre[i] : 0.0;
  return simd::dot(model.w2(), act) + model.b2();
}

struct Workspace {
  std::vector<double> pre;
  std::vector<double> act;
  std::vector<double> delta;
};

constexpr double kProbClamp = 1e-12;

double bce_loss(double p, int y) {
  const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
  return y == 1 ? -std::log(pc) : -std::log(1.0 - pc);
}

// Adds scale * dLoss/dparams into `grads`; returns the loss.
double accumulate_grad(const MlpModel& model, const SparseRow& x, int y, double scale,
                       std::span<double> grads, Workspace& ws) {
  hidden_preactivation(model, x, ws.pre);
  const double z = output_logit(model, ws.pre, ws.act);
  const double p = stable_sigmoid(z);
  const double loss = bce_loss(p, y);

  const double d_out = (p - static_cast<double>(y)) * scale;
  const std::size_t h = model.hidden();
  std::span<double> g_w2 = grads.subspan(model.w2_offset(), h);
  simd::axpy(d_out, ws.act, g_w2);
  grads[model.b2_offset()] += d_out;

  const auto w2 = model.w2();
  ws.delta.resize(h);
  for (std::size_t i = 0; i < h; ++i) ws.delta[i] = ws.pre[i] > 0.0 ? d_out * w2[i] : 0.0;
  std::span<double> g_b1 = grads.subspan(model.b1_offset(), h);
  simd::axpy(1.0, ws.delta, g_b1);
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    simd::axpy(x.values[k], ws.delta, grads.subspan(std::size_t{x.indices[k]} * h, h));
  }
  return loss;
}

}  // namespace

double forward(const MlpModel& model, const SparseRow& x) {
  check_row(model, x);
  std::vector<double> pre, act;
  hidden_preactivation(model, x, pre);
  return open_unit(stable_sigmoid(output_logit(model, pre, act)));
}

double forward(const MlpModel& model, std::span<const double> x) {
  return forward(model, checked_dense(model, x));
}

BceResult bce_grad(const MlpModel& model, std::span<const double> x, int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
  const SparseRow row = checked_dense(model, x);
  BceResult out;
  out.grads.assign(model.params().size(), 0.0);
  Workspace ws;
  out.loss = accumulate_grad(model, row, y, 1.0, out.grads, ws);
  return out;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double learning_rate) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("adam shape mismatch");
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const simd::AdamArgs args{
      learning_rate, state.beta1, state.beta2, state.eps,
      1.0 - std::pow(state.beta1, t), 1.0 - std::pow(state.beta2, t),
  };
  simd::active().adam_update(params.data(), grads.data(), state.m.data(), state.v.data(),
                             params.size(), args);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("mlp epochs must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("mlp batch_size must be >= 1");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("mlp learning_rate must be >= 0");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument("holdout_fraction must be in (0, 1)");
  }
}

std::string TrainConfig::fingerprint() const {
  std::ostringstream key;
  key << "epochs=" << epochs << ";batch=" << batch_size << ";lr=" << learning_rate
      << ";seed=" << seed << ";patience=" << patience << ";holdout=" << holdout_fraction;
  return fnv1a_hex(key.str());
}

MlpModel train(MlpModel model, std::span<const SparseRow> rows, std::span<const int> labels,
               const TrainConfig& config, TrainHistory* history) {
  config.validate();
  if (rows.empty() || rows.size() != labels.size()) {
    throw std::invalid_argument("training needs equally many rows and labels (>= 1)");
  }
  for (const auto& row : rows) check_row(model, row);
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("label must be 0 or 1");
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> holdout;
  const bool early_stop = config.patience > 0 && rows.size() >= 10;
  if (early_stop) {
    shuffle(order, rng);
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(config.holdout_fraction * static_cast<double>(rows.size()))));
    holdout.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    order.erase(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(order.begin(), order.end());
  }

  AdamState adam(model.params().size());
  std::vector<double> grads(model.params().size());
  Workspace ws;
  std::vector<double> best = early_stop ? std::vector<double>(model.params().begin(), model.params().end())
                                        : std::vector<double>{};
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  if (history) *history = {};

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grads.begin(), grads.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        epoch_loss += accumulate_grad(model, rows[order[b]], labels[order[b]], scale, grads, ws);
      }
      adam_step(model.params(), grads, adam, config.learning_rate);
    }
    if (history) history->train_loss.push_back(epoch_loss / static_cast<double>(order.size()));

    if (!early_stop) continue;
    double holdout_loss = 0.0;
    for (std::size_t i : holdout) holdout_loss += bce_loss(forward(model, rows[i]), labels[i]);
    holdout_loss /= static_cast<double>(holdout.size());
    if (history) history->holdout_loss.push_back(holdout_loss);
    if (holdout_loss < best_loss) {
      best_loss = holdout_loss;
      std::copy(model.params().begin(), model.params().end(), best.begin());
      since_best = 0;
      if (history) history->best_epoch = epoch;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  if (early_stop) std::copy(best.begin(), best.end(), model.params().begin());
  else if (history) history->best_epoch = config.epochs - 1;
  model.fingerprint = config.fingerprint();
  return model;
}

MlpModel train(MlpModel model, std::span<const std::vector<double>> rows,
               std::span<const int> labels, const TrainConfig& config, TrainHistory* history) {
  std::vector<SparseRow> sparse;
  sparse.reserve(rows.size());
  for (const auto& row : rows) sparse.push_back(checked_dense(model, row));
  return train(std::move(model), sparse, labels, config, history);
}

int predict(const MlpModel& model, std::span<const double> x, double threshold) {
  return forward(model, x) >= threshold ? 1 : 0;
}

int predict(const MlpModel& model, const SparseRow& x, double threshold) {
  return forward(model, x) >= threshold ? 1 : 0;
}

namespace {
constexpr std::string_view kModelMagic = "attend-mlp";
constexpr int kModelVersion = 1;
}  // namespace

void save_model(const MlpModel& model, std::ostream& out) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "n_in " << model.n_in() << '\n';
  out << "hidden " << model.hidden() << '\n';
  out << "fingerprint " << (model.fingerprint.empty() ? "-" : model.fingerprint) << '\n';
  out << "params " << model.params().size() << '\n';
  char buffer[64];
  for (double p : model.params()) {
    const auto r = std::to_chars(buffer, buffer + sizeof(buffer), p, std::chars_format::hex);
    out << std::string_view(buffer, static_cast<std::size_t>(r.ptr - buffer)) << '\n';
  }
}

MlpModel load_model(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() {
    ++line_no;
    if (!std::getline(in, line)) throw ParseError(line_no, "truncated model file");
    return std::istringstream(line);
  };
  auto expect = [&](std::string_view key) {
    auto fields = next_line();
    std::string name;
    std::string value;
    if (!(fields >> name >> value) || name != key) {
      throw ParseError(line_no, "expected '" + std::string(key) + "'");
    }
    return value;
  };

  {
    auto fields = next_line();
    std::string magic;
    int version = 0;
    if (!(fields >> magic >> version) || magic != kModelMagic) throw ParseError(line_no, "not a model file");
    if (version != kModelVersion) throw ParseError(line_no, "unsupported model version");
  }
  const std::size_t n_in = std::stoul(expect("n_in"));
  const std::size_t hidden = std::stoul(expect("hidden"));
  const std::string fingerprint = expect("fingerprint");
  const std::size_t count = std::stoul(expect("params"));
  MlpModel model(n_in, hidden);
  if (count != model.params().size()) throw ParseError(line_no, "parameter count mismatch");
  for (double& p : model.params()) {
    next_line();
    std::string_view token(line);
    // to_chars writes negative hex floats as "-1.8p+1"; from_chars takes the
    // sign but not a 0x prefix.
    const auto r = std::from_chars(token.data(), token.data() + token.size(), p, std::chars_format::hex);
    if (r.ec != std::errc() || r.ptr != token.data() + token.size()) {
      throw ParseError(line_no, "bad parameter value");
    }
  }
  model.fingerprint = fingerprint == "-" ? "" : fingerprint;
  return model;
}

}  // namespace attend
