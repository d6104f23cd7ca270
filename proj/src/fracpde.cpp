#include "mlkit/fracpde.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mlkit/errors.hpp"
#include "mlkit/mittag.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/summation.hpp"

namespace mlkit {

namespace {

using cplx = std::complex<double>;

double lg(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Forward transform uses e^{-2 pi i j k / n}; the inverse is unscaled.
void fft_radix2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = cplx(std::cos(theta), sign * std::sin(theta));
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * twiddle[j * stride];
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

void dft_direct(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = (j * k) % n;
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n);
      acc += a[j] * cplx(std::cos(theta), sign * std::sin(theta));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

void transform(std::vector<cplx>& a, bool inverse) {
  if (is_power_of_two(a.size())) {
    fft_radix2(a, inverse);
  } else {
    dft_direct(a, inverse);
  }
}

}  // namespace

GridFunction::GridFunction(double x_min, double x_max, std::vector<double> values)
    : x_min_(x_min), x_max_(x_max), values_(std::move(values)) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw DomainError("GridFunction: need finite x_min < x_max");
  }
  if (values_.empty()) throw RangeError("GridFunction: at least one point is required");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("GridFunction: values must be finite");
  }
}

GridFunction GridFunction::sample(double x_min, double x_max, int n,
                                  const std::function<double(double)>& f) {
  if (n < 1) throw RangeError("GridFunction::sample: n must be positive");
  std::vector<double> v(n);
  const double h = (x_max - x_min) / n;
  for (int i = 0; i < n; ++i) v[i] = f(x_min + i * h);
  return GridFunction(x_min, x_max, std::move(v));
}

GenPowerSeries::GenPowerSeries(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!std::isfinite(terms_[i].coeff) || !std::isfinite(terms_[i].exponent)) {
      throw DomainError("GenPowerSeries: coefficients and exponents must be finite");
    }
    if (i > 0 && !(terms_[i].exponent > terms_[i - 1].exponent)) {
      throw PreconditionError("GenPowerSeries: exponents must be strictly increasing");
    }
  }
}

bool GenPowerSeries::singular() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.exponent < 0.0; });
}

double GenPowerSeries::evaluate(double x) const {
  if (!(x > 0.0)) throw DomainError("GenPowerSeries::evaluate: x must be positive");
  CompensatedSum<double> acc;
  for (const PowerTerm& t : terms_) acc.add(t.coeff * std::pow(x, t.exponent));
  return acc.value();
}

double hermite_kdf(int n, double x, double y) {
  if (n < 0 || n > 60) throw RangeError("hermite_kdf: order must lie in [0, 60], got " + std::to_string(n));
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur + 2.0 * k * y * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

DiffusionSolution solve_fractional_diffusion(const GridFunction& f, double alpha, double t,
                                             const DiffusionOptions& options) {
  const double alpha_max = options.experimental ? 4.0 : 2.0;
  if (!(alpha > 0.0) || !(alpha <= alpha_max)) {
    throw DomainError("solve_fractional_diffusion: alpha=" + std::to_string(alpha) +
                      (options.experimental ? " outside (0, 4]" : " outside (0, 2]; larger orders need the experimental flag"));
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("solve_fractional_diffusion: t must be finite and >= 0");

  const auto v = f.values();
  const std::size_t n = v.size();
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::fabs(x));
  const bool warn = std::max(std::fabs(v.front()), std::fabs(v.back())) > 1e-8 * vmax;

  if (t == 0.0) return {f, warn, 0.0};

  std::vector<cplx> modes(v.begin(), v.end());
  transform(modes, false);

  double amp_max = 0.0;
  for (const cplx& c : modes) amp_max = std::max(amp_max, std::abs(c));

  const double length = f.x_max() - f.x_min();
  const double ta = std::pow(t, alpha);
  const MLParams params(alpha, 1.0);
  const std::size_t half = n / 2;
  std::vector<double> symbol(half + 1, 0.0);
  std::vector<double> symbol_err(half + 1, 0.0);
  std::vector<bool> needed(half + 1, false);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = std::min(j, n - j);
    if (alpha <= 2.0 || std::abs(modes[j]) >= 1e-14 * amp_max) needed[m] = true;
  }
  for (std::size_t m = 0; m <= half; ++m) {
    if (!needed[m]) continue;
    const double k = 2.0 * std::numbers::pi * static_cast<double>(m) / length;
    try {
      const SeriesResult s = ml_e(params, -ta * k * k);
      symbol[m] = s.value;
      symbol_err[m] = s.est_error;
    } catch (const NonConvergenceError& e) {
      throw NonConvergenceError("solve_fractional_diffusion: symbol at k=" + std::to_string(k) +
                                " outside the accuracy envelope (" + e.what() + ")");
    }
  }

  double err = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t m = std::min(j, n - j);
    err += std::abs(modes[j]) * symbol_err[m];
    modes[j] *= symbol[m];
  }
  transform(modes, true);

  std::vector<double> out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = modes[i].real() * scale;
  return {GridFunction(f.x_min(), f.x_max(), std::move(out)), warn, err * scale};
}

DriftSolution solve_drift_pde(double a, double b, double alpha, double t, double x_min,
                              double x_max, int n) {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) throw DomainError("solve_drift_pde: alpha must lie in (0, 1]");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("solve_drift_pde: t must be finite and >= 0");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("solve_drift_pde: a and b must be finite");
  if (n < 1) throw RangeError("solve_drift_pde: n must be positive");

  GridFunction base = GridFunction::sample(x_min, x_max, n, [](double x) { return std::exp(-x * x); });
  if (t == 0.0) return {base, 0.0, 1};

  using ext = long double;
  const ext y = -(0.5L * a * b + static_cast<ext>(b) * b);
  const ext c = static_cast<ext>(a) + 2.0L * b;
  const double log_t = std::log(t);
  const double reach = std::pow(t, alpha) *
                       (std::fabs(static_cast<double>(c)) * std::max(std::fabs(x_min), std::fabs(x_max)) +
                        std::sqrt(2.0 * std::fabs(static_cast<double>(y))) + 1.0);
  const double peak = std::pow(reach, 1.0 / alpha) / alpha;
  if (!(peak < 1500.0)) {
    throw NonConvergenceError("solve_drift_pde: grid extent and time need about " + std::to_string(peak) +
                              " Hermite terms, beyond the supported 1500");
  }
  const int max_terms = std::max(120, static_cast<int>(3.0 * peak) + 60);

  std::vector<ext> h_prev(n, 0.0L);
  std::vector<ext> h_cur(n, 1.0L);
  std::vector<CompensatedSum<ext>> acc(n);
  int small_run = 0;
  ext last_sup = 0.0L;
  for (int r = 0; r < max_terms; ++r) {
    if (r == 1) {
      for (int i = 0; i < n; ++i) {
        h_prev[i] = 1.0L;
        h_cur[i] = c * base.x(i);
      }
    } else if (r > 1) {
      for (int i = 0; i < n; ++i) {
        const ext next = c * base.x(i) * h_cur[i] + 2.0L * (r - 1) * y * h_prev[i];
        h_prev[i] = h_cur[i];
        h_cur[i] = next;
      }
    }
    const ext log_coeff = static_cast<ext>(alpha * r * log_t) - static_cast<ext>(lg(alpha * r + 1.0));
    ext term_sup = 0.0L;
    ext sum_sup = 0.0L;
    for (int i = 0; i < n; ++i) {
      const double xi = base.x(i);
      const ext term = h_cur[i] == 0.0L
                           ? 0.0L
                           : std::copysign(std::exp(log_coeff + std::log(std::fabs(h_cur[i])) -
                                                    static_cast<ext>(xi) * xi),
                                           h_cur[i]);
      acc[i].add(term);
      term_sup = std::max(term_sup, std::fabs(term));
      sum_sup = std::max(sum_sup, std::fabs(acc[i].value()));
    }
    if (!std::isfinite(term_sup)) break;
    last_sup = term_sup;
    small_run = term_sup < 1e-12L * sum_sup ? small_run + 1 : 0;
    if (small_run >= 2) {
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) out[i] = static_cast<double>(acc[i].value());
      for (double v : out) {
        if (!std::isfinite(v)) throw NonConvergenceError("solve_drift_pde: solution overflows double on this grid");
      }
      return {GridFunction(x_min, x_max, std::move(out)), static_cast<double>(last_sup), r + 1};
    }
  }
  throw NonConvergenceError("solve_drift_pde: Hermite series did not settle within " +
                            std::to_string(max_terms) + " terms (last sup-norm term " +
                            std::to_string(static_cast<double>(last_sup)) + ")");
}

GenPowerSeries rl_frac_derivative(const GenPowerSeries& series, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("rl_frac_derivative: alpha must be positive");
  std::vector<PowerTerm> out;
  out.reserve(series.size());
  for (const PowerTerm& t : series.terms()) {
    if (t.coeff == 0.0) continue;
    if (t.exponent == 0.0) {
      const double rg = reciprocal_gamma(1.0 - alpha);
      if (rg != 0.0) out.push_back({t.coeff * rg, -alpha});
      continue;
    }
    const double p = t.exponent;
    if (!(p - alpha > -1.0)) {
      throw DomainError("rl_frac_derivative: term x^" + std::to_string(p) +
                        " has p - alpha <= -1 (alpha=" + std::to_string(alpha) + ")");
    }
    out.push_back({t.coeff * std::exp(lg(p + 1.0) - lg(p + 1.0 - alpha)), p - alpha});
  }
  return GenPowerSeries(std::move(out));
}

GenPowerSeries ml_derivative_apply(const GenPowerSeries& series, int n) {
  if (n < 1) throw RangeError("ml_derivative_apply: n must be >= 1");
  if (series.singular()) throw DomainError("ml_derivative_apply: exponents must be non-negative");
  const double inv_n = 1.0 / n;
  const double scale = std::pow(static_cast<double>(n), n);
  std::vector<PowerTerm> out;
  out.reserve(series.size());
  for (const PowerTerm& t : series.terms()) {
    double c = t.coeff * scale;
    for (int j = 0; j < n && c != 0.0; ++j) c *= t.exponent - j * inv_n;
    if (c != 0.0) out.push_back({c, t.exponent - 1.0});
  }
  return GenPowerSeries(std::move(out));
}

double grid_mass(const GridFunction& f) {
  CompensatedSum<double> acc;
  for (double v : f.values()) acc.add(v);
  return acc.value() * f.spacing();
}

double grid_second_moment(const GridFunction& f) {
  CompensatedSum<double> mass;
  CompensatedSum<double> moment;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    mass.add(f[i]);
    moment.add(x * x * f[i]);
  }
  if (!(mass.value() > 0.0)) throw DomainError("grid_second_moment: grid function has no positive mass");
  return moment.value() / mass.value();
}

}  // namespace mlkit
