// Gauss-Hermite nodes/weights (Golub-Welsch) and compensated summation.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ampbench {

struct GaussHermiteRule {
  Eigen::VectorXd nodes;    // weight e^{-x^2}
  Eigen::VectorXd weights;
};

inline GaussHermiteRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order >= 1");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    double b = std::sqrt(i / 2.0);
    jac(i, i - 1) = b;
    jac(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(order);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    double v0 = es.eigenvectors()(0, i);
    rule.weights(i) = sqrt_pi * v0 * v0;
  }
  return rule;
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

enum class GridScheme { gauss_hermite, monte_carlo };

struct IntegrationGrid {
  GridScheme scheme = GridScheme::gauss_hermite;
  int order = 48;               // per axis, gauss_hermite
  int samples = 100000;         // monte_carlo
  std::uint64_t seed = 0;

  static IntegrationGrid gauss(int order_) {
    if (order_ < 8) throw std::invalid_argument("grid order must be >= 8");
    IntegrationGrid g;
    g.scheme = GridScheme::gauss_hermite;
    g.order = order_;
    return g;
  }
  static IntegrationGrid monte_carlo(int samples_, std::uint64_t seed_) {
    if (samples_ < 10000)
      throw std::invalid_argument("monte_carlo samples must be >= 1e4");
    IntegrationGrid g;
    g.scheme = GridScheme::monte_carlo;
    g.samples = samples_;
    g.seed = seed_;
    return g;
  }
};

}  // namespace ampbench
