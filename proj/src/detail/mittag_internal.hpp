#pragma once

#include <optional>

#include "detail/series.hpp"
#include "mlkit/mittag.hpp"

namespace mlkit::detail {

/// base^power / power! * e_s^(alpha,beta)(xi), with the prefactor folded into
/// each term's logarithm so that large s never overflows. No domain checks.
SeriesOutcome e_series(int s, double alpha, double beta, double xi, double base, int power,
                       const SeriesPolicy& policy);

/// E_{alpha,beta}(-y), y > 0, from the integral representation; empty when no
/// representation is implemented for the parameter pair.
std::optional<SeriesResult> ml_negative_axis(double alpha, double beta, double y);

/// W_alpha^(mu)(x) with a loose policy, for use inside weighted quadrature
/// where only absolute accuracy relative to the weight matters.
double wright_for_quadrature(double alpha, double mu, double x);

}  // namespace mlkit::detail
