#include "attend/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "attend/random.hpp"
#include "attend/simd.hpp"

namespace attend {

void PoincareConfig::validate() const {
  if (dim < 2) throw std::invalid_argument("poincare dim must be >= 2");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("poincare learning_rate must be > 0");
  if (negatives < 1) throw std::invalid_argument("poincare negatives must be >= 1");
  if (!(ball_eps > 0.0 && ball_eps < 1.0)) throw std::invalid_argument("ball_eps must be in (0,1)");
}

namespace {

// gamma - 1 for the arcosh argument; computing it directly avoids the
// cancellation of (1 + x) - 1 near coincident points.
double gamma_minus_one(std::span<const double> u, std::span<const double> v) {
  const double alpha = 1.0 - simd::squared_norm(u);
  const double beta = 1.0 - simd::squared_norm(v);
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("point lies on or outside the unit ball");
  }
  return 2.0 * simd::squared_distance(u, v) / (alpha * beta);
}

double arcosh_one_plus(double delta) { return std::log1p(delta + std::sqrt(delta * (delta + 2.0))); }

}  // namespace

double poincare_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("dimension mismatch");
  return arcosh_one_plus(gamma_minus_one(u, v));
}

std::vector<double> poincare_distance_grad(std::span<const double> theta,
                                           std::span<const double> x) {
  std::vector<double> grad(theta.size(), 0.0);
  const double delta = gamma_minus_one(theta, x);
  if (delta <= 0.0) return grad;
  const double theta_sq = simd::squared_norm(theta);
  const double x_sq = simd::squared_norm(x);
  const double alpha = 1.0 - theta_sq;
  const double beta = 1.0 - x_sq;
  const double root = std::sqrt(delta * (delta + 2.0));  // sqrt(gamma^2 - 1)
  const double lead = 4.0 / (beta * root);
  const double theta_coef = lead * (x_sq - 2.0 * simd::dot(theta, x) + 1.0) / (alpha * alpha);
  const double x_coef = -lead / alpha;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    grad[i] = theta_coef * theta[i] + x_coef * x[i];
  }
  return grad;
}

std::vector<double> riemannian_scale(std::span<const double> euclidean_grad,
                                     std::span<const double> theta) {
  const double one_minus = 1.0 - simd::squared_norm(theta);
  const double factor = one_minus * one_minus / 4.0;
  std::vector<double> out(euclidean_grad.begin(), euclidean_grad.end());
  for (double& g : out) g *= factor;
  return out;
}

void project_ball_inplace(std::span<double> x, double eps) {
  const double limit = 1.0 - eps;
  double norm = std::sqrt(simd::squared_norm(x));
  if (norm < limit) return;
  // Target 16 ulps inside the limit.
  const double margin = 1.0 - 16.0 * std::numeric_limits<double>::epsilon();
  double scale = limit / norm * margin;
  while (true) {
    for (double& xi : x) xi *= scale;
    norm = std::sqrt(simd::squared_norm(x));
    if (norm < limit * margin) return;
    scale = margin;
  }
}

std::vector<double> project_ball(std::span<const double> x, double eps) {
  std::vector<double> out(x.begin(), x.end());
  project_ball_inplace(out, eps);
  return out;
}

PoincareGradient poincare_loss(NodeId u, NodeId v, std::span<const NodeId> negatives,
                               const EmbeddingMatrix& points) {
  const std::size_t count = negatives.size() + 1;
  std::vector<NodeId> others;
  others.reserve(count);
  others.push_back(v);
  others.insert(others.end(), negatives.begin(), negatives.end());

  const auto theta = points.row(u);
  std::vector<double> dist(count);
  for (std::size_t j = 0; j < count; ++j) dist[j] = poincare_distance(theta, points.row(others[j]));

  // loss = d_v + log sum_j exp(-d_j)
  const double min_d = *std::min_element(dist.begin(), dist.end());
  double denom = 0.0;
  for (double d : dist) denom += std::exp(-(d - min_d));
  PoincareGradient out;
  out.loss = dist[0] - min_d + std::log(denom);

  auto add_row = [&](NodeId row, double weight, const std::vector<double>& g) {
    auto it = std::find_if(out.rows.begin(), out.rows.end(),
                           [row](const auto& r) { return r.first == row; });
    if (it == out.rows.end()) {
      out.rows.emplace_back(row, std::vector<double>(g.size(), 0.0));
      it = std::prev(out.rows.end());
    }
    for (std::size_t i = 0; i < g.size(); ++i) it->second[i] += weight * g[i];
  };

  for (std::size_t j = 0; j < count; ++j) {
    const double softmax = std::exp(-(dist[j] - min_d)) / denom;
    const double weight = (j == 0 ? 1.0 : 0.0) - softmax;  // dL/dd_j
    const auto other = points.row(others[j]);
    add_row(u, weight, poincare_distance_grad(theta, other));
    add_row(others[j], weight, poincare_distance_grad(other, theta));
  }
  return out;
}

EmbeddingMatrix train_poincare(const Graph& graph, const PoincareConfig& config,
                               std::vector<double>* epoch_losses) {
  config.validate();
  if (graph.empty()) throw std::invalid_argument("cannot embed an empty graph");
  const std::size_t n = graph.node_count();
  Rng rng(config.seed);

  EmbeddingMatrix points(n, config.dim);
  for (double& x : points.data()) x = (uniform01(rng) * 2.0 - 1.0) * 1e-3;

  std::vector<Edge> relations;
  for (const auto& [a, b] : graph.edges()) {
    relations.emplace_back(a, b);
    relations.emplace_back(b, a);
  }
  if (epoch_losses) epoch_losses->clear();

  std::vector<NodeId> negatives;
  const std::size_t total_epochs = config.burn_in_epochs + config.epochs;
  for (std::size_t epoch = 0; epoch < total_epochs; ++epoch) {
    const double lr = epoch < config.burn_in_epochs
                          ? config.learning_rate * config.burn_in_factor
                          : config.learning_rate;
    shuffle(relations, rng);
    double loss_sum = 0.0;
    for (const auto& [u, v] : relations) {
      negatives.clear();
      const std::size_t available = n - 1 - graph.degree(u);
      const std::size_t wanted = std::min(config.negatives, available);
      for (std::size_t tries = 0; negatives.size() < wanted && tries < 20 * config.negatives; ++tries) {
        const auto w = static_cast<NodeId>(uniform_index(rng, n));
        if (w != u && !graph.has_edge(u, w)) negatives.push_back(w);
      }
      const auto grad = poincare_loss(u, v, negatives, points);
      loss_sum += grad.loss;
      for (const auto& [row, g] : grad.rows) {
        auto theta = points.row(row);
        const auto step = riemannian_scale(g, theta);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= lr * step[i];
        project_ball_inplace(theta, config.ball_eps);
      }
    }
    if (epoch_losses) {
      epoch_losses->push_back(relations.empty() ? 0.0
                                                : loss_sum / static_cast<double>(relations.size()));
    }
  }
  return points;
}

}  // namespace attend
