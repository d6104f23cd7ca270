#include "mlkit/scalar_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mlkit/errors.hpp"

namespace mlkit {

namespace {

// Reduce x to n + r with n integral and |r| <= 1/2; returns (-1)^n.
double reduce_half(double x, double& r) {
  const double n = std::nearbyint(x);
  r = x - n;
  return std::fmod(std::fabs(n), 2.0) == 0.0 ? 1.0 : -1.0;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size() || nodes_.empty()) {
    throw PreconditionError("QuadratureRule: nodes and weights must be non-empty and equal length");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > 0.0) || !(weights_[i] > 0.0) || (i > 0 && !(nodes_[i] > nodes_[i - 1]))) {
      throw PreconditionError("QuadratureRule: nodes must be positive and increasing, weights positive");
    }
  }
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double reciprocal_gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) return 0.0;
  if (x >= 0.5) {
    if (x > 171.0) return std::exp(-log_gamma(x));
    return 1.0 / std::tgamma(x);
  }
  // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  const double s = sin_pi(x);
  const double y = 1.0 - x;
  if (y < 171.0) return s * std::tgamma(y) / std::numbers::pi;
  const double sign = s < 0.0 ? -1.0 : 1.0;
  return sign * std::exp(log_gamma(y) + std::log(std::fabs(s)) - std::log(std::numbers::pi));
}

double sin_pi(double x) {
  double r = 0.0;
  const double parity = reduce_half(x, r);
  if (r == 0.0) return 0.0;
  if (r == 0.5) return parity;
  if (r == -0.5) return -parity;
  return parity * std::sin(std::numbers::pi * r);
}

double cos_pi(double x) {
  double r = 0.0;
  const double parity = reduce_half(x, r);
  if (std::fabs(r) == 0.5) return 0.0;
  return parity * std::cos(std::numbers::pi * r);
}

QuadratureRule gauss_laguerre_rule(int n) {
  if (n < 1 || n > 128) {
    throw RangeError("gauss_laguerre_rule: order must lie in [1, 128], got " + std::to_string(n));
  }
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  using ext = long double;
  const ext dn = n;
  std::vector<ext> roots(n);
  ext z = 0.0L;
  for (int i = 0; i < n; ++i) {
    // Asymptotic initial guesses (Stroud & Secrest), each seeded from the
    // previous two roots.
    if (i == 0) {
      z = 3.0L / (1.0L + 2.4L * dn);
    } else if (i == 1) {
      z += 15.0L / (1.0L + 2.5L * dn);
    } else {
      const ext ai = i - 1;
      z += ((1.0L + 2.55L * ai) / (1.9L * ai)) * (z - roots[i - 2]);
    }
    ext p1 = 0.0L;
    ext p2 = 0.0L;
    ext dp = 0.0L;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      p1 = 1.0L;
      p2 = 0.0L;
      for (int j = 0; j < n; ++j) {
        const ext p3 = p2;
        p2 = p1;
        p1 = ((2.0L * j + 1.0L - z) * p2 - j * p3) / (j + 1.0L);
      }
      dp = (dn * p1 - dn * p2) / z;
      const ext z_prev = z;
      z = z_prev - p1 / dp;
      if (std::fabs(z - z_prev) <= 1e-16L * std::max(1.0L, z)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NonConvergenceError("gauss_laguerre_rule: Newton iteration failed for node " +
                                std::to_string(i));
    }
    roots[i] = z;
    nodes[i] = static_cast<double>(z);
    weights[i] = static_cast<double>(-1.0L / (dp * dn * p2));
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

}  // namespace mlkit
