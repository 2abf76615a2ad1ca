#pragma once

// Graph embedding in the Poincare ball, trained with Riemannian SGD.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "attend/embedding.hpp"
#include "attend/graph.hpp"

namespace attend {

inline constexpr double kDefaultBallEps = 1e-5;

struct PoincareConfig {
  std::size_t dim = 128;
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  std::size_t negatives = 10;
  std::size_t burn_in_epochs = 10;  ///< run before the main epochs
  double burn_in_factor = 0.1;
  double ball_eps = kDefaultBallEps;
  std::uint64_t seed = 1;

  void validate() const;
};

/// arcosh(1 + 2|u-v|^2 / ((1-|u|^2)(1-|v|^2))). Throws std::domain_error if a
/// point is not strictly inside the unit ball.
double poincare_distance(std::span<const double> u, std::span<const double> v);

/// Gradient of poincare_distance(theta, x) with respect to theta. Zero when
/// the points coincide.
std::vector<double> poincare_distance_grad(std::span<const double> theta,
                                           std::span<const double> x);

/// ((1 - |theta|^2)^2 / 4) * grad
std::vector<double> riemannian_scale(std::span<const double> euclidean_grad,
                                     std::span<const double> theta);

/// Rescales x onto the radius 1 - eps sphere if it is not already strictly
/// inside it; the result always has norm < 1 - eps.
std::vector<double> project_ball(std::span<const double> x, double eps = kDefaultBallEps);
void project_ball_inplace(std::span<double> x, double eps = kDefaultBallEps);

struct PoincareGradient {
  double loss = 0.0;
  /// Euclidean gradient per touched row, merged per row.
  std::vector<std::pair<NodeId, std::vector<double>>> rows;
};

/// Softmax ranking loss of one observed edge (u, v) against negatives:
/// -log( e^{-d(u,v)} / sum_{x in {v} + negatives} e^{-d(u,x)} ).
PoincareGradient poincare_loss(NodeId u, NodeId v, std::span<const NodeId> negatives,
                               const EmbeddingMatrix& points);

/// Every row ends strictly inside the ball of radius 1 - ball_eps.
/// `epoch_losses`, when given, receives the mean loss of every epoch
/// (burn-in first).
EmbeddingMatrix train_poincare(const Graph& graph, const PoincareConfig& config,
                               std::vector<double>* epoch_losses = nullptr);

}  // namespace attend
