#pragma once

// One-hidden-layer feedforward binary classifier: ReLU hidden units, a
// single sigmoid output, binary cross-entropy, Adam.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace attend {

/// Sparse input row: strictly increasing indices with their values.
struct SparseRow {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  /// Nonzero entries of a dense vector.
  static SparseRow from_dense(std::span<const double> dense);
};

/// One flat parameter block. Layout: W1 (input-major, n_in rows of
/// `hidden`), b1, W2, b2.
class MlpModel {
 public:
  MlpModel() = default;
  MlpModel(std::size_t n_in, std::size_t hidden);

  std::size_t n_in() const { return n_in_; }
  std::size_t hidden() const { return hidden_; }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  /// Fan-out weights of input j (column j of the usual hidden x n_in W1).
  std::span<double> w1_row(std::size_t j) { return {params_.data() + j * hidden_, hidden_}; }
  std::span<const double> w1_row(std::size_t j) const {
    return {params_.data() + j * hidden_, hidden_};
  }
  std::span<double> b1() { return {params_.data() + b1_offset(), hidden_}; }
  std::span<const double> b1() const { return {params_.data() + b1_offset(), hidden_}; }
  std::span<double> w2() { return {params_.data() + w2_offset(), hidden_}; }
  std::span<const double> w2() const { return {params_.data() + w2_offset(), hidden_}; }
  double& b2() { return params_[b2_offset()]; }
  double b2() const { return params_[b2_offset()]; }

  std::size_t b1_offset() const { return n_in_ * hidden_; }
  std::size_t w2_offset() const { return b1_offset() + hidden_; }
  std::size_t b2_offset() const { return w2_offset() + hidden_; }

  /// Fingerprint of the training configuration that produced the model.
  std::string fingerprint;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;

 private:
  std::size_t n_in_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
};

/// floor((n_in + 1) / 2): the mean of the input and output layer widths.
std::size_t hidden_size_for(std::size_t n_in);

/// He-initialized weights (std sqrt(2 / fan_in)), zero biases. A nonzero
/// `hidden_cap` bounds the hidden width.
MlpModel init_model(std::size_t n_in, std::uint64_t seed, std::size_t hidden_cap = 0);

/// Probability of class 1, clamped to the open interval (0, 1).
double forward(const MlpModel& model, std::span<const double> x);
double forward(const MlpModel& model, const SparseRow& x);

struct BceResult {
  double loss = 0.0;
  std::vector<double> grads;  ///< same layout as MlpModel::params()
};

/// -[y log p + (1-y) log(1-p)] with p clamped to [1e-12, 1 - 1e-12].
BceResult bce_grad(const MlpModel& model, std::span<const double> x, int y);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double learning_rate);

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  std::size_t patience = 10;  ///< 0 disables the holdout and early stopping
  double holdout_fraction = 0.1;

  void validate() const;
  std::string fingerprint() const;
};

struct TrainHistory {
  std::vector<double> train_loss;    ///< mean per epoch
  std::vector<double> holdout_loss;  ///< empty without a holdout
  std::size_t best_epoch = 0;
};

/// Mini-batch training with a seeded shuffle per epoch. With patience > 0 a
/// holdout split tracks the best epoch and the best parameters are returned.
MlpModel train(MlpModel model, std::span<const SparseRow> rows, std::span<const int> labels,
               const TrainConfig& config, TrainHistory* history = nullptr);
MlpModel train(MlpModel model, std::span<const std::vector<double>> rows,
               std::span<const int> labels, const TrainConfig& config,
               TrainHistory* history = nullptr);

/// 1 iff forward(x) >= threshold.
int predict(const MlpModel& model, std::span<const double> x, double threshold = 0.5);
int predict(const MlpModel& model, const SparseRow& x, double threshold = 0.5);

/// Versioned text dump with hex-float parameters; reloads are bit-exact.
void save_model(const MlpModel& model, std::ostream& out);
MlpModel load_model(std::istream& in);

}  // namespace attend
