#include "mlkit/mittag.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "detail/mittag_internal.hpp"
#include "mlkit/errors.hpp"
#include "mlkit/umbral.hpp"

namespace mlkit {

using detail::LogTerm;
using detail::SeriesOutcome;
using detail::SeriesPolicy;
using detail::SeriesStatus;

namespace {

const char* status_text(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::converged:
      return "converged";
    case SeriesStatus::term_cap:
      return "term cap reached before the stopping rule fired";
    case SeriesStatus::ill_conditioned:
      return "cancellation exceeds the tolerance even in extended precision";
    case SeriesStatus::overflow:
      return "terms overflow the double range";
  }
  return "unknown";
}

SeriesResult to_result(const SeriesOutcome& o) {
  return {o.value, o.est_error, o.terms_used, o.extended ? Method::series_extended : Method::series};
}

[[noreturn]] void fail(const std::string& what, const SeriesOutcome& o) {
  throw NonConvergenceError(what + ": " + status_text(o.status) + " (" +
                            std::to_string(o.terms_used) + " terms)");
}

SeriesPolicy policy_from(const SeriesOptions& options) {
  if (!(options.tolerance > 0.0) || options.max_terms < 1) {
    throw PreconditionError("SeriesOptions: tolerance must be positive and max_terms >= 1");
  }
  SeriesPolicy p;
  p.rel_tol = options.tolerance;
  p.abs_tol = options.tolerance;
  p.max_terms = options.max_terms;
  return p;
}

// Generic term for sum_r x^r / (r!^k Gamma(alpha r + beta)), k in {0, 1}.
struct PowerOverGammaTerm {
  double x;
  double alpha;
  double beta;
  bool with_factorial;

  template <typename Real>
  LogTerm<Real> operator()(detail::Tag<Real>, int r) const {
    LogTerm<Real> t;
    if (r > 0 && x == 0.0) return t;
    const Real rr = r;
    const Real lx = r == 0 ? Real(0) : rr * detail::log_of(Real(std::fabs(x)));
    const Real lg = detail::lgam(Real(alpha) * rr + Real(beta));
    const Real lf = with_factorial ? detail::lgam(rr + Real(1)) : Real(0);
    t.log_mag = lx - lg - lf;
    t.log_scale = detail::abs_of(lx) + detail::abs_of(lg) + detail::abs_of(lf);
    t.sign = (x < 0.0 && (r % 2 == 1)) ? -1 : 1;
    return t;
  }
};

bool borel_domain_ok(double alpha, double x, const QuadratureRule& rule) {
  if (x <= 0.0) return true;
  return alpha <= 1.0 && x <= 5.0 && rule.size() >= 64;
}

double borel_sum(double alpha, double mu, int power, double x, const QuadratureRule& rule) {
  CompensatedSum<double> acc;
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double s = nodes[i];
    acc.add(weights[i] * std::pow(s, power) * detail::wright_for_quadrature(alpha, mu, x * s));
  }
  return acc.value();
}

}  // namespace

MLParams::MLParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("MLParams: alpha and beta must be positive and finite (alpha=" +
                      std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
}

namespace detail {

std::optional<SeriesResult> ml_negative_axis(double alpha, double beta, double y) {
  const bool sub_unit = alpha < 1.0 && beta < 1.0 + alpha;
  const bool oscillatory = beta == 1.0 && alpha > 1.0 && alpha <= 2.0;
  if (alpha == 1.0 && beta == 1.0) {
    const double v = std::exp(-y);
    return SeriesResult{v, 2.0 * DBL_EPSILON * v, 0, Method::closed_form};
  }
  if (!sub_unit && !oscillatory) return std::nullopt;

  // E_{a,b}(-y) = 1/(a pi) int_0^inf c^{(1-b)/a} exp(-c^{1/a})
  //               [c sin(pi(1-b)) + y sin(pi(1-b+a))] / (c^2 + 2 c y cos(a pi) + y^2) dc
  const double inv_a = 1.0 / alpha;
  const double s1 = sin_pi(1.0 - beta);
  const double s2 = sin_pi(1.0 - beta + alpha);
  const double ca = cos_pi(alpha);
  const double expo = (1.0 - beta) * inv_a;
  auto kernel = [&](double c) {
    if (c <= 0.0) return 0.0;
    const double num = c * s1 + y * s2;
    const double den = c * c + 2.0 * c * y * ca + y * y;
    return std::pow(c, expo) * std::exp(-std::pow(c, inv_a)) * num / den;
  };

  // exp(-c^{1/a}) < e^{-60} beyond c_max.
  const double c_max = std::pow(60.0, alpha);
  const double peak = ca < 0.0 ? -y * ca : 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double tol = 1e-14;
  double err1 = 0.0;
  double err2 = 0.0;
  double integral = 0.0;
  if (peak > 0.0 && peak < c_max) {
    integral = integrator.integrate(kernel, 0.0, peak, tol, &err1) +
               integrator.integrate(kernel, peak, c_max, tol, &err2);
  } else {
    integral = integrator.integrate(kernel, 0.0, c_max, tol, &err1);
  }
  integral /= alpha * std::numbers::pi;
  double err = (err1 + err2) / (alpha * std::numbers::pi);

  double value = integral;
  if (oscillatory) {
    const double t = std::pow(y, inv_a);
    const double amplitude = 2.0 * inv_a * std::exp(t * std::cos(std::numbers::pi * inv_a));
    value += amplitude * std::cos(t * std::sin(std::numbers::pi * inv_a));
    err += 8.0 * DBL_EPSILON * (1.0 + t) * amplitude;
  }
  if (!std::isfinite(value)) return std::nullopt;
  err += 4.0 * DBL_EPSILON * std::fabs(value);
  return SeriesResult{value, err, 0, Method::integral};
}

double wright_for_quadrature(double alpha, double mu, double x) {
  SeriesPolicy p;
  p.rel_tol = 1e-13;
  p.abs_tol = std::numeric_limits<double>::infinity();
  p.max_terms = 4000;
  const SeriesOutcome o = detail::sum_series(PowerOverGammaTerm{x, alpha, mu + 1.0, true}, p);
  if (o.status == SeriesStatus::term_cap || o.status == SeriesStatus::overflow) {
    throw NonConvergenceError("wright: integrand evaluation failed at x=" + std::to_string(x) +
                              ": " + status_text(o.status));
  }
  return o.value;
}

SeriesOutcome e_series(int s, double alpha, double beta, double xi, double base, int power,
                       const SeriesPolicy& policy) {
  auto gen = [=](auto tag, int r) {
    using Real = typename decltype(tag)::type;
    LogTerm<Real> t;
    if (r > 0 && xi == 0.0) return t;
    if (power > 0 && base == 0.0) return t;
    const Real n = Real(r + s);
    const Real lx = r == 0 ? Real(0) : Real(r) * log_of(Real(std::fabs(xi)));
    const Real lfr = lgam(Real(r) + Real(1));
    const Real lnum = lgam(Real(beta) * n + Real(1));
    const Real lden = lgam(Real(beta) * n * Real(alpha) + Real(1));
    Real lpre = 0;
    Real lpre_scale = 0;
    if (power > 0) {
      const Real lb = Real(power) * log_of(Real(base));
      const Real lpf = lgam(Real(power) + Real(1));
      lpre = lb - lpf;
      lpre_scale = abs_of(lb) + abs_of(lpf);
    }
    t.log_mag = lpre + lx - lfr + lnum - lden;
    t.log_scale = lpre_scale + abs_of(lx) + abs_of(lfr) + abs_of(lnum) + abs_of(lden);
    t.sign = (xi < 0.0 && (r % 2 == 1)) ? -1 : 1;
    return t;
  };
  return sum_series(gen, policy);
}

}  // namespace detail

SeriesResult ml_e(MLParams params, double x, const SeriesOptions& options) {
  if (!std::isfinite(x)) throw DomainError("ml_e: argument must be finite");
  const double a = params.alpha();
  const double b = params.beta();
  if (x == 0.0) return {reciprocal_gamma(b), 0.0, 1, Method::series};

  SeriesPolicy policy = policy_from(options);
  const bool has_integral =
      x < 0.0 && ((a < 1.0 && b < 1.0 + a) || (b == 1.0 && a >= 1.0 && a <= 2.0));
  if (has_integral) policy.abs_tol = 0.0;

  const SeriesOutcome o = detail::sum_series(PowerOverGammaTerm{x, a, b, false}, policy);
  if (o.status == SeriesStatus::converged && detail::meets_tolerance(o, policy)) return to_result(o);

  if (has_integral) {
    if (auto r = detail::ml_negative_axis(a, b, -x)) {
      if (r->est_error <= options.tolerance * std::max(1.0, std::fabs(r->value))) return *r;
    }
  }
  fail("ml_e(alpha=" + std::to_string(a) + ", beta=" + std::to_string(b) +
           ", x=" + std::to_string(x) + ")",
       o);
}

SeriesResult wright(double alpha, double mu, double x, const SeriesOptions& options) {
  if (!(alpha > 0.0) || !(mu > -1.0) || !std::isfinite(x)) {
    throw DomainError("wright: requires alpha > 0, mu > -1 and finite x");
  }
  const SeriesPolicy policy = policy_from(options);
  const SeriesOutcome o = detail::sum_series(PowerOverGammaTerm{x, alpha, mu + 1.0, true}, policy);
  if (o.status != SeriesStatus::converged) fail("wright", o);
  return to_result(o);
}

double ml_via_borel(MLParams params, double x, const QuadratureRule& rule) {
  if (!std::isfinite(x) || !borel_domain_ok(params.alpha(), x, rule)) {
    throw DomainError("ml_via_borel: x=" + std::to_string(x) +
                      " outside the Borel envelope (x <= 0, or 0 < x <= 5 with alpha <= 1 and "
                      ">= 64 nodes)");
  }
  return borel_sum(params.alpha(), params.beta() - 1.0, 0, x, rule);
}

TrigPair ml_trig(double alpha, double x) {
  if (!(alpha > 0.0)) throw DomainError("ml_trig: alpha must be positive");
  if (x == 0.0) return {1.0, 0.0, 0.0};
  // C = E_{2a,1}(-x^2), S = x E_{2a,1+a}(-x^2)
  const double z = -x * x;
  const SeriesResult c = ml_e(MLParams(2.0 * alpha, 1.0), z);
  const SeriesResult s = ml_e(MLParams(2.0 * alpha, 1.0 + alpha), z);
  return {c.value, x * s.value, std::max(c.est_error, std::fabs(x) * s.est_error)};
}

SeriesResult laguerre_exp(double x) { return wright(1.0, 0.0, x); }

double laguerre_limit_term(double z, int n) {
  if (n < 1) throw RangeError("laguerre_limit_term: n must be >= 1");
  return laguerre_binomial_power(1.0, z, n);
}

double deriv_ml_integer(int m, double alpha, double x, const QuadratureRule& rule) {
  if (m < 0 || m > 8) throw RangeError("deriv_ml_integer: order must lie in [0, 8]");
  if (!(alpha > 0.0)) throw DomainError("deriv_ml_integer: alpha must be positive");
  if (!std::isfinite(x) || !borel_domain_ok(alpha, x, rule)) {
    throw DomainError("deriv_ml_integer: x=" + std::to_string(x) + " outside the Borel envelope");
  }
  return borel_sum(alpha, alpha * m, m, x, rule);
}

SeriesResult e_sab(int s, double alpha, double beta, double xi, const SeriesOptions& options) {
  if (s < 0) throw RangeError("e_sab: s must be non-negative");
  if (!(beta > 0.0)) throw PreconditionError("e_sab: beta must be positive");
  if (!(alpha > 1.0 / beta)) {
    throw PreconditionError("e_sab: requires alpha > 1/beta (alpha=" + std::to_string(alpha) +
                            ", beta=" + std::to_string(beta) + ")");
  }
  if (!std::isfinite(xi)) throw DomainError("e_sab: argument must be finite");
  const SeriesOutcome o = detail::e_series(s, alpha, beta, xi, 1.0, 0, policy_from(options));
  if (o.status != SeriesStatus::converged) fail("e_sab", o);
  return to_result(o);
}

CappedSum e_sab_capped(int s, double alpha, double beta, double xi, int max_terms) {
  if (s < 0) throw RangeError("e_sab_capped: s must be non-negative");
  if (!(beta > 0.0) || !(alpha > 0.0)) throw DomainError("e_sab_capped: alpha, beta must be positive");
  SeriesPolicy p;
  p.max_terms = max_terms;
  p.abs_tol = p.rel_tol;
  const SeriesOutcome o = detail::e_series(s, alpha, beta, xi, 1.0, 0, p);
  return {o.value, o.est_error, o.terms_used, o.status == SeriesStatus::converged};
}

}  // namespace mlkit
