#include "mlkit/umbral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mlkit/errors.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/summation.hpp"

namespace mlkit {

namespace {

double lg(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

void check_params(const char* who, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError(std::string(who) + ": alpha and beta must be positive and finite");
  }
}

// log|x^k| and the sign of x^k, with 0^0 = 1.
struct PowerLog {
  double log_mag;
  int sign;
};

PowerLog power_log(double x, int k) {
  if (k == 0) return {0.0, 1};
  if (x == 0.0) return {0.0, 0};
  return {k * std::log(std::fabs(x)), (x < 0.0 && k % 2 == 1) ? -1 : 1};
}

// sum_r x^{n-r} y^r exp(weight(r)) accumulated with compensation.
template <typename Weight>
double binomial_like_sum(double x, double y, int n, Weight weight) {
  CompensatedSum<double> acc;
  for (int r = 0; r <= n; ++r) {
    const PowerLog px = power_log(x, n - r);
    const PowerLog py = power_log(y, r);
    const int sign = px.sign * py.sign;
    if (sign == 0) continue;
    const double t = std::exp(weight(r) + px.log_mag + py.log_mag);
    acc.add(sign > 0 ? t : -t);
  }
  return acc.value();
}

}  // namespace

double umbral_c_moment(double mu) { return reciprocal_gamma(mu + 1.0); }

double umbral_d_moment(double kappa, double alpha, double beta) {
  if (!(kappa > -1.0)) {
    throw DomainError("umbral_d_moment: kappa must exceed -1, got " + std::to_string(kappa));
  }
  const double arg = alpha * kappa + beta;
  if (arg > 0.0) return std::exp(lg(kappa + 1.0) - lg(arg));
  const double rg = reciprocal_gamma(arg);
  if (rg == 0.0) return 0.0;
  return std::copysign(std::exp(lg(kappa + 1.0) + std::log(std::fabs(rg))), rg);
}

double ml_binomial(int n, int r, double alpha, double beta) {
  check_params("ml_binomial", alpha, beta);
  if (n < 0 || r < 0 || r > n) {
    throw RangeError("ml_binomial: need 0 <= r <= n, got n=" + std::to_string(n) +
                     ", r=" + std::to_string(r));
  }
  return std::exp(lg(alpha * n + beta) - (lg(alpha * (n - r) + beta) + lg(alpha * r + beta)));
}

double ml_compose_power(double x, double y, int n, double alpha, double beta) {
  check_params("ml_compose_power", alpha, beta);
  if (n < 0) throw RangeError("ml_compose_power: n must be non-negative");
  const double top = lg(alpha * n + beta);
  return binomial_like_sum(x, y, n, [&](int r) {
    return top - (lg(alpha * (n - r) + beta) + lg(alpha * r + beta));
  });
}

double laguerre_binomial_power(double x, double y, int n) {
  if (n < 0) throw RangeError("laguerre_binomial_power: n must be non-negative");
  const double top = lg(n + 1.0);
  return binomial_like_sum(x, y, n, [&](int r) {
    return 2.0 * (top - lg(r + 1.0) - lg(n - r + 1.0));
  });
}

SemigroupSum ml_semigroup_sum(double x, double y, double alpha, double beta, int n_max,
                              double tolerance) {
  check_params("ml_semigroup_sum", alpha, beta);
  if (n_max < 1 || n_max > 200) {
    throw RangeError("ml_semigroup_sum: n_max must lie in [1, 200], got " + std::to_string(n_max));
  }
  // Gamma(alpha n + beta) cancels against the binomial numerator, so each
  // term is sum_r x^{n-r} y^r / (Gamma(alpha (n-r) + beta) Gamma(alpha r + beta)).
  CompensatedSum<double> acc;
  double last = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    last = binomial_like_sum(x, y, n, [&](int r) {
      return -(lg(alpha * (n - r) + beta) + lg(alpha * r + beta));
    });
    acc.add(last);
  }
  SemigroupSum out;
  out.value = acc.value();
  out.last_term = std::fabs(last);
  out.terms_used = n_max + 1;
  out.converged = out.last_term <= tolerance * std::max(1.0, std::fabs(out.value));
  return out;
}

double ml_gaussian_integral(double alpha, double beta) {
  check_params("ml_gaussian_integral", alpha, beta);
  return std::numbers::pi * reciprocal_gamma(beta - 0.5 * alpha);
}

double ml_stretched_integral(double alpha, double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    throw PreconditionError("ml_stretched_integral: gamma must exceed 1");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("ml_stretched_integral: alpha must be positive");
  }
  const double q = alpha / gamma;
  if (q == std::floor(q)) {
    throw PreconditionError("ml_stretched_integral: alpha/gamma must not be a positive integer");
  }
  const double inv = 1.0 / gamma;
  return std::numbers::pi / (gamma * sin_pi(inv)) * reciprocal_gamma(1.0 - q);
}

}  // namespace mlkit
