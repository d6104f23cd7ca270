#pragma once

// Shared summation engine for the Gamma-weighted power series used across
// the library. Terms are produced in log-magnitude form so that huge
// intermediate factors never overflow; the sum is first attempted in double
// precision and repeated in binary128 when the rounding estimate says the
// double result is not trustworthy.

#include <quadmath.h>

#include <cfloat>
#include <cmath>
#include <limits>
#include <type_traits>

#include "mlkit/summation.hpp"

namespace mlkit::detail {

using quad = __float128;

inline double lgam(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}
inline quad lgam(quad x) { return lgammaq(x); }
inline double exp_of(double x) { return std::exp(x); }
inline quad exp_of(quad x) { return expq(x); }
inline double log_of(double x) { return std::log(x); }
inline quad log_of(quad x) { return logq(x); }
inline double abs_of(double x) { return std::fabs(x); }
inline quad abs_of(quad x) { return fabsq(x); }

template <typename Real>
struct RealTraits;

template <>
struct RealTraits<double> {
  static constexpr double eps = DBL_EPSILON;
  static constexpr double log_max = 709.0;
};

template <>
struct RealTraits<quad> {
  static constexpr double eps = 1.92592994438723585305597794258492732e-34;
  static constexpr double log_max = 11355.0;
};

/// One term t_r = sign * exp(log_mag). `log_scale` is the sum of the
/// magnitudes of the pieces that were added to form log_mag; it bounds the
/// absolute error of log_mag, hence the relative error of the term.
template <typename Real>
struct LogTerm {
  Real log_mag = 0;
  Real log_scale = 0;
  int sign = 0;
};

template <typename Real>
using Tag = std::type_identity<Real>;

struct SeriesPolicy {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  int max_terms = 400;
  bool allow_extended = true;
};

enum class SeriesStatus { converged, term_cap, ill_conditioned, overflow };

struct SeriesOutcome {
  double value = 0.0;
  double est_error = 0.0;
  double rounding = 0.0;
  int terms_used = 0;
  SeriesStatus status = SeriesStatus::converged;
  bool extended = false;
};

inline bool meets_tolerance(const SeriesOutcome& o, const SeriesPolicy& p) {
  return o.est_error <= std::max(p.rel_tol * std::fabs(o.value), p.abs_tol);
}

template <typename Real, typename Gen>
SeriesOutcome sum_in_precision(const Gen& gen, const SeriesPolicy& policy) {
  using Traits = RealTraits<Real>;
  const Real eps = Traits::eps;
  // Terms are compared against tolerance / 100.
  const Real tol = Real(policy.rel_tol) * Real(1e-2);

  CompensatedSum<Real> sum;
  Real rounding = 0;
  Real prev = std::numeric_limits<double>::infinity();
  int small_run = 0;
  int r = 0;
  bool converged = false;

  for (; r < policy.max_terms; ++r) {
    const LogTerm<Real> t = gen(Tag<Real>{}, r);
    Real mag = 0;
    if (t.sign != 0) {
      if (t.log_mag > Real(Traits::log_max)) {
        SeriesOutcome out;
        out.status = SeriesStatus::overflow;
        out.terms_used = r;
        out.extended = std::is_same_v<Real, quad>;
        return out;
      }
      mag = exp_of(t.log_mag);
      sum.add(t.sign > 0 ? mag : -mag);
      rounding += mag * (Real(4) + t.log_scale) * eps;
    }
    const Real s = abs_of(sum.value());
    const bool tiny = mag == Real(0) || mag <= tol * s;
    small_run = (tiny && mag <= prev) ? small_run + 1 : 0;
    prev = mag;
    if (small_run >= 2) {
      ++r;
      converged = true;
      break;
    }
  }

  SeriesOutcome out;
  out.terms_used = r;
  out.extended = std::is_same_v<Real, quad>;
  if (!converged) {
    out.status = SeriesStatus::term_cap;
    out.value = static_cast<double>(sum.value());
    out.est_error = std::numeric_limits<double>::infinity();
    return out;
  }

  // Tail: first omitted term, extended geometrically with the local ratio.
  const LogTerm<Real> next = gen(Tag<Real>{}, r);
  Real omitted = 0;
  if (next.sign != 0) omitted = exp_of(next.log_mag);
  Real tail = omitted;
  if (prev > Real(0)) {
    const Real q = omitted / prev;
    if (q < Real(1)) tail = omitted / (Real(1) - q);
  }

  const Real total = sum.value();
  if (abs_of(total) > Real(DBL_MAX)) {
    out.status = SeriesStatus::overflow;
    return out;
  }
  out.value = static_cast<double>(total);
  out.rounding = static_cast<double>(rounding);
  out.est_error = static_cast<double>(tail + rounding);
  if (out.extended) out.est_error += 0.5 * DBL_EPSILON * std::fabs(out.value);
  out.status = SeriesStatus::converged;
  return out;
}

/// Sum in double; escalate to binary128 when the double result misses the
/// relative tolerance and the extended attempt can plausibly succeed.
template <typename Gen>
SeriesOutcome sum_series(const Gen& gen, const SeriesPolicy& policy) {
  SeriesOutcome d = sum_in_precision<double>(gen, policy);
  if (d.status == SeriesStatus::converged && d.est_error <= policy.rel_tol * std::fabs(d.value)) {
    return d;
  }
  if (d.status == SeriesStatus::term_cap || d.status == SeriesStatus::overflow) return d;

  const double goal = std::max(policy.rel_tol * std::fabs(d.value), policy.abs_tol);
  const double predicted = d.rounding * (RealTraits<quad>::eps / DBL_EPSILON);
  if (!policy.allow_extended || predicted > goal) {
    if (!meets_tolerance(d, policy)) d.status = SeriesStatus::ill_conditioned;
    return d;
  }

  SeriesOutcome q = sum_in_precision<quad>(gen, policy);
  if (q.status == SeriesStatus::converged && !meets_tolerance(q, policy)) {
    q.status = SeriesStatus::ill_conditioned;
  }
  if (q.status != SeriesStatus::converged && meets_tolerance(d, policy)) return d;
  return q;
}

}  // namespace mlkit::detail
