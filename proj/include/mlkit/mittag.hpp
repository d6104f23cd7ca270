#pragma once

#include "mlkit/scalar_core.hpp"

namespace mlkit {

/// Parameters (alpha, beta) of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}. Both must be positive and finite.
class MLParams {
 public:
  MLParams(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

 private:
  double alpha_;
  double beta_;
};

/// How a SeriesResult was obtained.
enum class Method {
  series,           // double precision, compensated
  series_extended,  // same series summed in binary128
  integral,         // negative-axis integral representation
  closed_form,      // elementary function (exp, cos) for a degenerate parameter pair
};

struct SeriesResult {
  double value = 0.0;
  /// Bound on the truncation tail plus the propagated rounding error.
  double est_error = 0.0;
  int terms_used = 0;
  Method method = Method::series;
};

struct SeriesOptions {
  double tolerance = 1e-12;
  int max_terms = 400;
};

/// E_{alpha,beta}(x) = sum_r x^r / Gamma(alpha r + beta).
///
/// The series is summed with compensation and, when cancellation makes the
/// double result unreliable, again in binary128. On the negative axis the
/// function falls back to the Laplace-type integral representation whenever
/// one exists for the parameter pair (alpha < 1 with beta < 1 + alpha, or
/// beta = 1 with 1 <= alpha <= 2). Anything else that cannot be brought
/// within `tolerance * max(1, |value|)` throws NonConvergenceError.
SeriesResult ml_e(MLParams params, double x, const SeriesOptions& options = {});

/// Bessel-Wright function W_alpha^(mu)(x) = sum_r x^r / (r! Gamma(alpha r + mu + 1)).
/// Requires alpha > 0 and mu > -1.
SeriesResult wright(double alpha, double mu, double x, const SeriesOptions& options = {});

/// E_{alpha,beta}(x) as the Borel-Laplace integral of W_alpha^(beta-1)(x s)
/// against e^{-s}, evaluated with the given Gauss-Laguerre rule.
///
/// Accepted domain: x <= 0 for every alpha; 0 < x <= 5 when alpha <= 1 and
/// the rule has at least 64 nodes. Throws DomainError elsewhere.
double ml_via_borel(MLParams params, double x, const QuadratureRule& rule);

struct TrigPair {
  double cos_like = 0.0;
  double sin_like = 0.0;
  double est_error = 0.0;
};

/// Cosine- and sine-like companions of E_{alpha,1}: the real and imaginary
/// parts of E_{alpha,1}(i x).
TrigPair ml_trig(double alpha, double x);

/// Laguerre exponential sum_r x^r / (r!)^2 (equal to I_0(2 sqrt x) for x >= 0).
SeriesResult laguerre_exp(double x);

/// (1 (+)_l z)^n, the n-th Laguerre-binomial power with unit first argument.
/// With z = x/n^2 it tends to laguerre_exp(x); with z = -(x/2n)^2 to J_0(x).
double laguerre_limit_term(double z, int n);

/// m-th derivative of E_{alpha,1} at x, 0 <= m <= 8, from the integral of
/// s^m W_alpha^(alpha m)(x s) against e^{-s}. Same domain as ml_via_borel.
double deriv_ml_integer(int m, double alpha, double x, const QuadratureRule& rule);

/// e_s^(alpha,beta)(xi) = sum_r xi^r / r! * Gamma(beta (r+s) + 1) / Gamma(beta (r+s) alpha + 1).
/// Requires beta > 0 and alpha > 1/beta (PreconditionError otherwise).
SeriesResult e_sab(int s, double alpha, double beta, double xi, const SeriesOptions& options = {});

struct CappedSum {
  double value = 0.0;
  double est_error = 0.0;
  int terms_used = 0;
  bool converged = false;
};

/// The e_s^(alpha,beta) series summed without the alpha > 1/beta gate, with a
/// hard term cap. Reports whether the stopping rule fired instead of throwing.
CappedSum e_sab_capped(int s, double alpha, double beta, double xi, int max_terms = 200);

}  // namespace mlkit
