#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "attend/mlp.hpp"
#include "support.hpp"

using namespace attend;

namespace {

MlpModel random_model(Rng& rng, std::size_t n_in, std::size_t hidden) {
  MlpModel m(n_in, hidden);
  std::normal_distribution<double> normal(0.0, 0.6);
  for (double& p : m.params()) p = normal(rng);
  return m;
}

std::vector<double> random_input(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = uniform01(rng) * 2.0 - 1.0;
  return x;
}

// Two Gaussian-free clusters split by x0 + x1 = 0 with a margin.
void separable(Rng& rng, std::size_t n, std::vector<std::vector<double>>& xs,
               std::vector<int>& ys) {
  while (xs.size() < n) {
    auto x = random_input(rng, 2);
    const double s = x[0] + x[1];
    if (std::abs(s) < 0.2) continue;
    xs.push_back(x);
    ys.push_back(s > 0 ? 1 : 0);
  }
}

}  // namespace

TEST(Mlp, HiddenWidth) {
  EXPECT_EQ(hidden_size_for(228), 114u);
  EXPECT_EQ(hidden_size_for(1), 1u);
  EXPECT_EQ(hidden_size_for(2), 1u);
  EXPECT_EQ(hidden_size_for(3), 2u);
  EXPECT_EQ(init_model(228, 1).hidden(), 114u);
  EXPECT_EQ(init_model(228, 1, 16).hidden(), 16u);
  EXPECT_EQ(init_model(10, 1, 16).hidden(), 5u);
}

TEST(Mlp, InitDeterministicAndHeScaled) {
  EXPECT_EQ(init_model(50, 3), init_model(50, 3));
  EXPECT_NE(init_model(50, 3), init_model(50, 4));
  const auto m = init_model(400, 5);
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < m.n_in(); ++j) {
    for (double w : m.w1_row(j)) {
      s += w * w;
      ++n;
    }
  }
  EXPECT_NEAR(std::sqrt(s / n), std::sqrt(2.0 / 400), 0.01);
  for (double b : m.b1()) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(m.b2(), 0.0);
}

TEST(Mlp, ForwardExamples) {
  const MlpModel zero(3, 2);
  EXPECT_EQ(forward(zero, std::vector<double>{5, -1, 2}), 0.5);
  MlpModel m(2, 1);
  m.w1_row(0)[0] = 1.0;
  m.w1_row(1)[0] = 0.0;
  m.w2()[0] = 1.0;
  EXPECT_NEAR(forward(m, std::vector<double>{1, -1}), 0.7310586, 1e-7);
  EXPECT_THROW(forward(m, std::vector<double>{1, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(forward(m, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST(Mlp, ForwardStrictlyInsideUnitInterval) {
  MlpModel m(1, 1);
  m.b2() = 1000.0;
  const double hi = forward(m, std::vector<double>{0});
  EXPECT_LT(hi, 1.0);
  m.b2() = -1000.0;
  EXPECT_GT(forward(m, std::vector<double>{0}), 0.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto r = random_model(rng, 4, 3);
    const double p = forward(r, random_input(rng, 4));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(Mlp, SparseMatchesDense) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(rng, 12, 6);
    auto x = random_input(rng, 12);
    for (double& v : x) {
      if (bernoulli(rng, 0.6)) v = 0.0;
    }
    EXPECT_EQ(forward(m, x), forward(m, SparseRow::from_dense(x)));
  }
}

TEST(Mlp, BceExamples) {
  const MlpModel zero(2, 1);
  EXPECT_NEAR(bce_grad(zero, std::vector<double>{1, 1}, 1).loss, std::log(2.0), 1e-15);
  MlpModel sure(2, 1);
  sure.b2() = 100.0;
  EXPECT_LT(bce_grad(sure, std::vector<double>{1, 1}, 1).loss, 1e-11);
  EXPECT_NEAR(bce_grad(sure, std::vector<double>{1, 1}, 0).loss, -std::log(1e-12), 1e-3);
}

TEST(Mlp, GradientFiniteDifferences) {
  Rng rng(3);
  const double h = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_model(rng, 5, 3);
    const auto x = random_input(rng, 5);
    const int y = static_cast<int>(uniform_index(rng, 2));
    const auto g = bce_grad(m, x, y);
    ASSERT_EQ(g.grads.size(), m.params().size());
    for (std::size_t i = 0; i < m.params().size(); ++i) {
      const double saved = m.params()[i];
      m.params()[i] = saved + h;
      const double up = bce_grad(m, x, y).loss;
      m.params()[i] = saved - h;
      const double down = bce_grad(m, x, y).loss;
      m.params()[i] = saved;
      EXPECT_LT(fixture::rel_error(g.grads[i], (up - down) / (2 * h)), 1e-4)
          << "trial " << trial << " param " << i;
    }
  }
}

TEST(Adam, TwoStepHandTrace) {
  std::vector<double> theta{0.0};
  AdamState state(1);
  const std::vector<double> g{1.0};
  adam_step(theta, g, state, 0.1);
  adam_step(theta, g, state, 0.1);

  const double b1 = 0.9, b2 = 0.999, eps = 1e-8, lr = 0.1;
  double m = 0.0, v = 0.0, t = 0.0;
  for (int step = 1; step <= 2; ++step) {
    m = b1 * m + (1 - b1) * 1.0;
    v = b2 * v + (1 - b2) * 1.0;
    const double mh = m / (1 - std::pow(b1, step));
    const double vh = v / (1 - std::pow(b2, step));
    t -= lr * mh / (std::sqrt(vh) + eps);
  }
  EXPECT_NEAR(theta[0], t, 1e-12);
  EXPECT_NEAR(theta[0], -0.2, 1e-7);
  EXPECT_EQ(state.t, 2u);
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  Rng rng(4);
  std::vector<double> theta(10, 0.0), g(10);
  for (double& x : g) x = uniform01(rng) * 4.0 - 2.0;
  AdamState state(10);
  adam_step(theta, g, state, 0.01);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(theta[i], -0.01 * std::copysign(1.0, g[i]), 1e-7);
}

TEST(Adam, ZeroGradientOrRateLeavesParams) {
  Rng rng(5);
  std::vector<double> theta = random_input(rng, 8);
  const auto before = theta;
  AdamState state(8);
  adam_step(theta, std::vector<double>(8, 0.0), state, 0.1);
  EXPECT_EQ(theta, before);
  for (int i = 0; i < 20; ++i) adam_step(theta, random_input(rng, 8), state, 0.0);
  EXPECT_EQ(theta, before);
  EXPECT_THROW(adam_step(theta, std::vector<double>(7, 0.0), state, 0.1), std::invalid_argument);
}

TEST(Train, SeparableFixture) {
  Rng rng(6);
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  separable(rng, 20, xs, ys);
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.05;
  cfg.patience = 0;
  TrainHistory hist;
  const auto model = train(init_model(2, 7, 8), xs, ys, cfg, &hist);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) correct += predict(model, xs[i]) == ys[i];
  EXPECT_GE(static_cast<double>(correct) / xs.size(), 0.99);
  ASSERT_EQ(hist.train_loss.size(), 200u);
  EXPECT_LT(hist.train_loss.back(), hist.train_loss.front());
}

TEST(Train, DeterministicAndSparseEqualsDense) {
  Rng rng(8);
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  separable(rng, 60, xs, ys);
  for (auto& x : xs) x.insert(x.end(), {0.0, 0.0, 0.0});
  std::vector<SparseRow> sparse;
  for (const auto& x : xs) sparse.push_back(SparseRow::from_dense(x));
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.01;
  const auto init = init_model(5, 9);
  const auto a = train(init, xs, ys, cfg);
  const auto b = train(init, xs, ys, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(train(init, sparse, ys, cfg), a);
}

TEST(Train, EarlyStoppingTracksHoldout) {
  Rng rng(10);
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  separable(rng, 100, xs, ys);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.patience = 3;
  cfg.learning_rate = 0.01;
  TrainHistory hist;
  train(init_model(2, 11), xs, ys, cfg, &hist);
  EXPECT_FALSE(hist.holdout_loss.empty());
  EXPECT_LT(hist.best_epoch, hist.holdout_loss.size());
  EXPECT_LE(hist.holdout_loss.size(), 50u);
}

TEST(Train, RejectsZeroEpochs) {
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  std::vector<std::vector<double>> xs{{1.0}};
  std::vector<int> ys{1};
  EXPECT_THROW(train(init_model(1, 1), xs, ys, cfg), std::invalid_argument);
}

TEST(Predict, TieAndThreshold) {
  const MlpModel zero(3, 2);
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(predict(zero, x), 1);
  MlpModel low(3, 2);
  low.b2() = std::log(0.49 / 0.51);
  EXPECT_NEAR(forward(low, x), 0.49, 1e-12);
  EXPECT_EQ(predict(low, x), 0);
  EXPECT_EQ(predict(low, x, 0.0), 1);
}

TEST(ModelFile, RoundTripIsBitExact) {
  Rng rng(12);
  auto m = random_model(rng, 7, 4);
  for (double& p : m.params()) p *= 1.0 + 1e-13 * uniform01(rng);
  m.fingerprint = "abc123";
  std::stringstream io;
  save_model(m, io);
  const auto back = load_model(io);
  EXPECT_EQ(back, m);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_input(rng, 7);
    EXPECT_EQ(forward(back, x), forward(m, x));
  }
  std::istringstream junk("hello\n");
  EXPECT_THROW(load_model(junk), ParseError);
}
