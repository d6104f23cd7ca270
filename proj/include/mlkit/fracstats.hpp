#pragma once

#include <cstdint>
#include <vector>

#include "mlkit/mittag.hpp"

namespace mlkit {

enum class CountVariant { schrodinger, laskin, hermitian };

/// Truncated photon-count table. `intensity` is X = (Omega t^alpha)^2 for the
/// Schrodinger and Hermitian variants and Lambda = Omega t^alpha for Laskin.
struct CountDistribution {
  double alpha = 1.0;
  double intensity = 0.0;
  CountVariant variant = CountVariant::schrodinger;
  std::vector<double> probs;
  int truncation_m = 0;
  /// Sum of the table after clamping.
  double total_mass = 0.0;
  /// Magnitude of the round-off negatives that were clamped to zero.
  double clamped_mass = 0.0;
  /// False when the cap of 400 was reached before the tail criterion held.
  bool tail_converged = false;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  double mandel_q = 0.0;
};

/// (X^m / m!) e_m^(alpha,2)(-X), 1/2 < alpha <= 1.
double p_m_schrodinger(int m, double alpha, double x);

/// (Lambda^m / m!) sum_n (n+m)! / Gamma(alpha (n+m) + 1) (-Lambda)^n / n!, 1/2 < alpha <= 1.
double p_m_laskin(int m, double alpha, double lambda);

/// G(s) = E_{alpha,1}(-(1 - s) Lambda).
double generating_function_value(double s, double alpha, double lambda);

/// 6/Gamma(4 alpha + 1) - 1/Gamma(2 alpha + 1)^2, the factor that fixes the
/// sign of the Schrodinger Mandel parameter. Defined for every alpha > 0.
double schrodinger_mandel_factor(double alpha);

MomentSummary schrodinger_moments(double alpha, double x);
MomentSummary laskin_moments(double alpha, double lambda);

/// (X^m / m!) e_m^(alpha,2)(X cos(pi alpha)), 1/2 <= alpha <= 1. Not normalized.
/// At alpha = 1/2 only the r = 0 term survives and X < 1/4 is required.
double hermitian_square_amplitude(int m, double alpha, double x);

/// Modulus factor e_n^(alpha,1)(-|zeta|^2 / 2) / sqrt(n!) of the n-th coherent-state
/// coefficient. For alpha < 1 the series is summed with a hard cap of 200 terms;
/// check `converged` before trusting the value.
CappedSum coherent_amplitude_laskin(int n, double zeta_abs2, double alpha);

/// Table over m = 0..M with M grown until 10 p_M < 1e-9 and M exceeds the
/// mean (cap 400).
CountDistribution count_distribution(CountVariant variant, double alpha, double intensity);

/// Mean sum m p_m and variance sum m^2 p_m - mean^2 over the truncated table.
MomentSummary table_moments(const CountDistribution& dist);

/// Inverse-CDF samples from a normalized table. Deterministic in the seed.
std::vector<int> sample_counts(const CountDistribution& dist, std::uint64_t seed, int n_samples);

}  // namespace mlkit
