#pragma once

#include <span>
#include <vector>

namespace mlkit {

/// Nodes and weights of an n-point Gauss-Laguerre rule for the weight e^{-s}
/// on [0, inf). Nodes are strictly increasing and the weights sum to one.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// ln Gamma(x) for x > 0. Throws DomainError for x <= 0.
double log_gamma(double x);

/// 1/Gamma(x) for every real x, exactly zero at the non-positive integers.
/// Uses the reflection formula below 0.5.
double reciprocal_gamma(double x);

/// sin(pi x) and cos(pi x) with exact zeros at integers and half-integers.
double sin_pi(double x);
double cos_pi(double x);

/// Gauss-Laguerre rule of order n, 1 <= n <= 128. Nodes are polished by
/// Newton iteration on the three-term recurrence. Throws RangeError outside
/// the supported orders.
QuadratureRule gauss_laguerre_rule(int n);

}  // namespace mlkit
