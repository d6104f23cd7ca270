#pragma once

namespace mlkit {

/// c^mu acting on the vacuum: 1/Gamma(mu + 1).
double umbral_c_moment(double mu);

/// (alpha,beta)d^kappa acting on the vacuum: Gamma(kappa + 1) / Gamma(alpha kappa + beta).
/// Zero where alpha kappa + beta is a non-positive integer. Requires kappa > -1.
double umbral_d_moment(double kappa, double alpha, double beta);

/// Modified binomial coefficient Gamma(alpha n + beta) /
/// (Gamma(alpha (n - r) + beta) Gamma(alpha r + beta)), 0 <= r <= n.
double ml_binomial(int n, int r, double alpha, double beta);

/// (x (+) y)^n = sum_r ml_binomial(n, r) x^{n-r} y^r.
double ml_compose_power(double x, double y, int n, double alpha, double beta);

/// Laguerre binomial (x (+)_l y)^n = sum_r C(n, r)^2 x^{n-r} y^r.
double laguerre_binomial_power(double x, double y, int n);

struct SemigroupSum {
  double value = 0.0;
  /// Magnitude of the last included term.
  double last_term = 0.0;
  int terms_used = 0;
  bool converged = false;
};

/// sum_{n=0}^{n_max} (x (+) y)^n / Gamma(alpha n + beta), which reproduces
/// E_{alpha,beta}(x) E_{alpha,beta}(y). `converged` is set when the last term
/// is below tolerance * max(1, |value|). Requires 1 <= n_max <= 200.
SemigroupSum ml_semigroup_sum(double x, double y, double alpha, double beta, int n_max,
                              double tolerance = 1e-10);

/// Integral of E_{alpha,beta}(-x^2) over the real line: pi / Gamma(beta - alpha/2).
double ml_gaussian_integral(double alpha, double beta);

/// Integral of E_{alpha,1}(-x^gamma) over (0, inf):
/// pi / (gamma sin(pi/gamma)) / Gamma(1 - alpha/gamma).
/// Requires gamma > 1 and alpha/gamma not a positive integer.
double ml_stretched_integral(double alpha, double gamma);

}  // namespace mlkit
