#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mlkit {

/// Samples of a function on the uniform periodic grid
/// x_i = x_min + i (x_max - x_min) / n, i = 0..n-1.
class GridFunction {
 public:
  GridFunction(double x_min, double x_max, std::vector<double> values);

  static GridFunction sample(double x_min, double x_max, int n,
                             const std::function<double(double)>& f);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(values_.size()); }
  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * spacing(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  double x_min_;
  double x_max_;
  std::vector<double> values_;
};

struct PowerTerm {
  double coeff = 0.0;
  double exponent = 0.0;
};

/// Finite sum of c x^p with strictly increasing finite exponents.
class GenPowerSeries {
 public:
  GenPowerSeries() = default;
  explicit GenPowerSeries(std::vector<PowerTerm> terms);

  std::span<const PowerTerm> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  /// True when some term has a negative exponent.
  bool singular() const;
  /// Value at x > 0.
  double evaluate(double x) const;

 private:
  std::vector<PowerTerm> terms_;
};

/// Two-variable Hermite polynomial H_n(x, y) = n! sum_r x^{n-2r} y^r / ((n-2r)! r!),
/// 0 <= n <= 60.
double hermite_kdf(int n, double x, double y);

struct DiffusionOptions {
  /// Admit 2 < alpha <= 4.
  bool experimental = false;
};

struct DiffusionSolution {
  GridFunction grid;
  /// |f| at either end of the grid exceeds 1e-8 max|f|, so periodic
  /// wrap-around may contaminate the result.
  bool decay_warning = false;
  /// Largest error estimate among the Fourier symbols, weighted by mode amplitude.
  double est_error = 0.0;
};

/// F(x, t) = inverse Fourier transform of E_{alpha,1}(-t^alpha k^2) f^(k),
/// evaluated spectrally on the periodic grid of f. alpha must lie in (0, 2],
/// or in (0, 4] with options.experimental.
DiffusionSolution solve_fractional_diffusion(const GridFunction& f, double alpha, double t,
                                             const DiffusionOptions& options = {});

struct DriftSolution {
  GridFunction grid;
  double est_error = 0.0;
  int terms_used = 0;
};

/// e^{-x^2} sum_r t^{alpha r} / Gamma(alpha r + 1) H_r(x (a + 2b), -(a b / 2 + b^2))
/// on the n-point periodic grid over [x_min, x_max). alpha in (0, 1].
/// The term budget grows with t^alpha |x| (at least 120, at most 1500);
/// NonConvergenceError when the grid needs more.
DriftSolution solve_drift_pde(double a, double b, double alpha, double t, double x_min,
                              double x_max, int n);

/// Riemann-Liouville derivative of order alpha, applied termwise:
/// c x^p -> c Gamma(p+1)/Gamma(p+1-alpha) x^{p-alpha}, and c -> c x^{-alpha}/Gamma(1-alpha).
GenPowerSeries rl_frac_derivative(const GenPowerSeries& series, double alpha);

/// n^n (x^{1-1/n} d/dx)^n applied termwise. Requires non-negative exponents.
GenPowerSeries ml_derivative_apply(const GenPowerSeries& series, int n);

/// Periodic trapezoid estimate of the integral of F over the grid.
double grid_mass(const GridFunction& f);

/// Integral of x^2 F divided by the integral of F, both by the periodic
/// trapezoid rule. Throws DomainError when the mass is not positive.
double grid_second_moment(const GridFunction& f);

}  // namespace mlkit
