#include "mlkit/fracstats.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "detail/mittag_internal.hpp"
#include "mlkit/errors.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/summation.hpp"

namespace mlkit {

namespace {

constexpr int kMaxTable = 400;

double lg(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

void check_alpha(const char* who, double alpha) {
  if (!(alpha > 0.5) || !(alpha <= 1.0)) {
    throw DomainError(std::string(who) + ": alpha must lie in (1/2, 1], got " + std::to_string(alpha));
  }
}

void check_intensity(const char* who, double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(who) + ": intensity must be finite and >= 0");
  }
}

void check_order(const char* who, int m) {
  if (m < 0) throw RangeError(std::string(who) + ": m must be non-negative");
}

// Kanter's representation of the Mittag-Leffler law: M = (E / A(U))^{1-alpha}
// with E ~ Exp(1), U ~ Unif(0, pi) has E[M^k] = Gamma(k+1) / Gamma(alpha k + 1).
double log_kanter_a(double alpha, double u) {
  const double c = 1.0 - alpha;
  return (alpha / c) * std::log(std::sin(alpha * u)) + std::log(std::sin(c * u)) -
         std::log(std::sin(u)) / c;
}

// E[exp(-damping lam) lam^m / m!] with lam = intensity M^power.
double mixture_probability(int m, double alpha, double intensity, int power, double damping) {
  if (intensity == 0.0) return m == 0 ? 1.0 : 0.0;
  const double c = 1.0 - alpha;
  const double log_i = std::log(intensity);
  const double log_mfact = lg(m + 1.0);
  boost::math::quadrature::exp_sinh<double> inner;
  boost::math::quadrature::tanh_sinh<double> outer;
  auto over_u = [&](double u) {
    const double la = log_kanter_a(alpha, u);
    if (!std::isfinite(la)) return 0.0;
    auto over_e = [&](double e) {
      if (!(e > 0.0)) return 0.0;
      const double log_lam = log_i + power * c * (std::log(e) - la);
      const double lam = std::exp(log_lam);
      const double log_g = -damping * lam + m * log_lam - log_mfact;
      return std::exp(-e + log_g);
    };
    return inner.integrate(over_e, 1e-12);
  };
  double err = 0.0;
  const double v = outer.integrate(over_u, 0.0, std::numbers::pi, 1e-11, &err) / std::numbers::pi;
  if (!std::isfinite(v)) {
    throw NonConvergenceError("mixture integral failed for m=" + std::to_string(m));
  }
  return v;
}

detail::SeriesPolicy probability_policy() {
  detail::SeriesPolicy p;
  p.rel_tol = 1e-12;
  p.abs_tol = 1e-14;
  p.max_terms = 400;
  return p;
}

// (I^m / m!) e_m^(alpha,beta)(xi), falling back to the mixture form.
double mixed_poisson(int m, double alpha, double beta, double intensity, double xi,
                     int power, double damping) {
  if (intensity == 0.0) return m == 0 ? 1.0 : 0.0;
  if (alpha == 1.0) {
    return std::exp(-damping * intensity + m * std::log(intensity) - lg(m + 1.0));
  }
  const detail::SeriesOutcome o =
      detail::e_series(m, alpha, beta, xi, intensity, m, probability_policy());
  if (o.status == detail::SeriesStatus::converged) return o.value;
  return mixture_probability(m, alpha, intensity, power, damping);
}

double clamp_probability(double p, const char* who, double* clamped = nullptr) {
  if (p >= 0.0) return p;
  if (p >= -1e-12) {
    if (clamped != nullptr) *clamped += -p;
    return 0.0;
  }
  throw NonConvergenceError(std::string(who) + ": probability " + std::to_string(p) +
                            " is negative beyond round-off");
}

double raw_schrodinger(int m, double alpha, double x) {
  return mixed_poisson(m, alpha, 2.0, x, -x, 2, 1.0);
}

double raw_laskin(int m, double alpha, double lambda) {
  return mixed_poisson(m, alpha, 1.0, lambda, -lambda, 1, 1.0);
}

double raw_hermitian(int m, double alpha, double x) {
  const double cpa = cos_pi(alpha);
  if (cpa == 0.0) {
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    // (X^m / m!) (2m)! / m!
    return std::exp(m * std::log(x) + lg(2.0 * m + 1.0) - 2.0 * lg(m + 1.0));
  }
  return mixed_poisson(m, alpha, 2.0, x, x * cpa, 2, -cpa);
}

void check_hermitian(double alpha, double x) {
  if (!(alpha >= 0.5) || !(alpha <= 1.0)) {
    throw DomainError("hermitian_square_amplitude: alpha must lie in [1/2, 1]");
  }
  check_intensity("hermitian_square_amplitude", x);
  if (cos_pi(alpha) == 0.0 && !(x < 0.25)) {
    throw DomainError("hermitian_square_amplitude: at alpha = 1/2 the amplitudes sum only for X < 1/4");
  }
}

}  // namespace

double p_m_schrodinger(int m, double alpha, double x) {
  check_order("p_m_schrodinger", m);
  check_alpha("p_m_schrodinger", alpha);
  check_intensity("p_m_schrodinger", x);
  return clamp_probability(raw_schrodinger(m, alpha, x), "p_m_schrodinger");
}

double p_m_laskin(int m, double alpha, double lambda) {
  check_order("p_m_laskin", m);
  check_alpha("p_m_laskin", alpha);
  check_intensity("p_m_laskin", lambda);
  return clamp_probability(raw_laskin(m, alpha, lambda), "p_m_laskin");
}

double generating_function_value(double s, double alpha, double lambda) {
  check_alpha("generating_function_value", alpha);
  check_intensity("generating_function_value", lambda);
  if (!std::isfinite(s)) throw DomainError("generating_function_value: s must be finite");
  return ml_e(MLParams(alpha, 1.0), -(1.0 - s) * lambda).value;
}

double schrodinger_mandel_factor(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("schrodinger_mandel_factor: alpha must be positive");
  const double g2 = reciprocal_gamma(2.0 * alpha + 1.0);
  return 6.0 * reciprocal_gamma(4.0 * alpha + 1.0) - g2 * g2;
}

MomentSummary schrodinger_moments(double alpha, double x) {
  check_alpha("schrodinger_moments", alpha);
  check_intensity("schrodinger_moments", x);
  const double g2 = reciprocal_gamma(2.0 * alpha + 1.0);
  const double factor = schrodinger_mandel_factor(alpha);
  MomentSummary out;
  out.mean = 2.0 * x * g2;
  out.variance = 2.0 * x * (2.0 * x * factor + g2);
  out.mandel_q = 2.0 * x * factor / g2;
  return out;
}

MomentSummary laskin_moments(double alpha, double lambda) {
  check_alpha("laskin_moments", alpha);
  check_intensity("laskin_moments", lambda);
  const double g1 = reciprocal_gamma(alpha + 1.0);
  const double g2 = reciprocal_gamma(2.0 * alpha + 1.0);
  MomentSummary out;
  out.mean = lambda * g1;
  out.variance = 2.0 * lambda * lambda * g2 + lambda * g1 - lambda * lambda * g1 * g1;
  out.mandel_q = out.mean > 0.0 ? (out.variance - out.mean) / out.mean : 0.0;
  return out;
}

double hermitian_square_amplitude(int m, double alpha, double x) {
  check_order("hermitian_square_amplitude", m);
  check_hermitian(alpha, x);
  return clamp_probability(raw_hermitian(m, alpha, x), "hermitian_square_amplitude");
}

CappedSum coherent_amplitude_laskin(int n, double zeta_abs2, double alpha) {
  check_order("coherent_amplitude_laskin", n);
  check_alpha("coherent_amplitude_laskin", alpha);
  check_intensity("coherent_amplitude_laskin", zeta_abs2);
  const double norm = std::exp(-0.5 * lg(n + 1.0));
  CappedSum out;
  try {
    const SeriesResult r = e_sab(n, alpha, 1.0, -0.5 * zeta_abs2);
    out = {r.value, r.est_error, r.terms_used, true};
  } catch (const PreconditionError&) {
    out = e_sab_capped(n, alpha, 1.0, -0.5 * zeta_abs2, 200);
  }
  out.value *= norm;
  out.est_error *= norm;
  return out;
}

CountDistribution count_distribution(CountVariant variant, double alpha, double intensity) {
  CountDistribution d;
  d.alpha = alpha;
  d.intensity = intensity;
  d.variant = variant;
  double mean = 0.0;
  switch (variant) {
    case CountVariant::schrodinger:
      mean = schrodinger_moments(alpha, intensity).mean;
      break;
    case CountVariant::laskin:
      mean = laskin_moments(alpha, intensity).mean;
      break;
    case CountVariant::hermitian:
      check_hermitian(alpha, intensity);
      break;
  }
  CompensatedSum<double> total;
  for (int m = 0; m <= kMaxTable; ++m) {
    double p = 0.0;
    switch (variant) {
      case CountVariant::schrodinger:
        p = raw_schrodinger(m, alpha, intensity);
        break;
      case CountVariant::laskin:
        p = raw_laskin(m, alpha, intensity);
        break;
      case CountVariant::hermitian:
        p = raw_hermitian(m, alpha, intensity);
        break;
    }
    p = clamp_probability(p, "count_distribution", &d.clamped_mass);
    d.probs.push_back(p);
    total.add(p);
    if (10.0 * p < 1e-9 && m > mean) {
      d.tail_converged = true;
      break;
    }
  }
  d.truncation_m = static_cast<int>(d.probs.size()) - 1;
  d.total_mass = total.value();
  return d;
}

MomentSummary table_moments(const CountDistribution& dist) {
  CompensatedSum<double> s1;
  CompensatedSum<double> s2;
  for (std::size_t m = 0; m < dist.probs.size(); ++m) {
    const double dm = static_cast<double>(m);
    s1.add(dm * dist.probs[m]);
    s2.add(dm * dm * dist.probs[m]);
  }
  MomentSummary out;
  out.mean = s1.value();
  out.variance = s2.value() - out.mean * out.mean;
  out.mandel_q = out.mean > 0.0 ? (out.variance - out.mean) / out.mean : 0.0;
  return out;
}

std::vector<int> sample_counts(const CountDistribution& dist, std::uint64_t seed, int n_samples) {
  if (dist.variant == CountVariant::hermitian) {
    throw PreconditionError("sample_counts: the Hermitian table is not a probability distribution");
  }
  if (n_samples < 1) throw RangeError("sample_counts: n_samples must be positive");
  if (dist.probs.empty() || !(dist.total_mass >= 1.0 - 1e-9)) {
    throw PreconditionError("sample_counts: truncated mass " + std::to_string(dist.total_mass) +
                            " is below 1 - 1e-9");
  }
  std::vector<double> cdf(dist.probs.size());
  double run = 0.0;
  for (std::size_t m = 0; m < cdf.size(); ++m) {
    run += dist.probs[m];
    cdf[m] = run;
  }
  std::mt19937_64 gen(seed);
  std::vector<int> out(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * run;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[i] = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
  }
  return out;
}

}  // namespace mlkit
