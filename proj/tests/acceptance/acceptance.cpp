#include <unistd.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mlkit/cli.hpp"
#include "mlkit/fracpde.hpp"
#include "mlkit/fracstats.hpp"
#include "mlkit/mittag.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/umbral.hpp"

using namespace mlkit;

namespace {

namespace tol {
constexpr double napier = 1e-12;
constexpr double napier_runtime_ms = 1.0;
constexpr double exp_reduction = 1e-12;
constexpr double closed_integral = 1e-4;
constexpr double semigroup = 1e-6;
constexpr double borel = 1e-8;
constexpr double rl_residual = 1e-12;
constexpr double mld_residual = 1e-12;
constexpr double heat = 1e-6;
constexpr double moment_growth = 1e-3;
constexpr double solve_seconds = 1.0;
constexpr double weyl = 1e-8;
constexpr double normalization = 1e-6;
constexpr double brute_moments = 1e-6;
constexpr double mandel_anchor = 1e-12;
constexpr double laskin_m0 = 1e-10;
constexpr double generating = 1e-8;
constexpr double hermitian = 1e-6;
constexpr double hermitian_gap = 0.29;
constexpr double standard_errors = 3.0;
}  // namespace tol

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] #%d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Runs a criterion body, turning any exception into a failure line.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, name, ok, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("threw: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Integral of E_{alpha,beta}(-x^gamma) over (0, inf): adaptive quadrature on
/// (0, L] plus the algebraic tail from the large-argument expansion.
double half_line_quadrature(double alpha, double beta, double gamma) {
  constexpr double L = 20.0;
  auto f = [&](double x) { return ml_e(MLParams(alpha, beta), -std::pow(x, gamma)).value; };
  double err = 0.0;
  double body = 0.0;
  const double cuts[] = {0.0, 1.0, 2.0, 4.0, 8.0, L};
  for (int i = 0; i + 1 < 6; ++i) {
    body += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-12, &err);
  }
  double tail = 0.0;
  for (int k = 1; k <= 6; ++k) {
    const double sign = k % 2 == 1 ? 1.0 : -1.0;
    tail += sign * std::pow(L, 1.0 - gamma * k) / (gamma * k - 1.0) * reciprocal_gamma(beta - alpha * k);
  }
  return body + tail;
}

double sample_mean(const std::vector<int>& s) {
  return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

}  // namespace

int main() {
  std::printf("acceptance suite: 13 criteria\n");

  criterion(1, "l-Napier number", [] {
    const double v = laguerre_exp(1.0).value;
    const double err = std::fabs(v - 2.279585302336067);
    constexpr int reps = 200;
    const auto start = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int i = 0; i < reps; ++i) sink += laguerre_exp(1.0 + 1e-17 * i).value;
    const double ms = 1e3 * seconds_since(start) / reps;
    const bool ok = err <= tol::napier && ms < tol::napier_runtime_ms && sink > 0.0;
    return std::pair{ok, "laguerre_exp(1)=" + std::to_string(v) + " |err|=" + g(err) + " (tol " +
                             g(tol::napier) + "), " + g(ms) + " ms per call (limit 1 ms)"};
  });

  criterion(2, "exponential reduction", [] {
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = -10.0 + 0.2 * i;
      const double e = std::exp(x);
      worst = std::max(worst, std::fabs(ml_e(MLParams(1.0, 1.0), x).value - e) / e);
    }
    return std::pair{worst <= tol::exp_reduction,
                     "max relative error " + g(worst) + " over 101 points (tol " + g(tol::exp_reduction) + ")"};
  });

  criterion(3, "closed-form integrals", [] {
    double worst = 0.0;
    std::string detail;
    const std::pair<double, double> cases[] = {{0.5, 1.0}, {0.8, 1.5}, {1.0, 1.0}};
    for (const auto& [a, b] : cases) {
      const double quad = 2.0 * half_line_quadrature(a, b, 2.0);
      const double d = std::fabs(ml_gaussian_integral(a, b) - quad);
      worst = std::max(worst, d);
      detail += "gauss(" + g(a) + "," + g(b) + ") diff " + g(d) + "; ";
    }
    const double d = std::fabs(ml_stretched_integral(0.5, 2.0) - half_line_quadrature(0.5, 1.0, 2.0));
    worst = std::max(worst, d);
    detail += "stretched(0.5,2) diff " + g(d) + " (tol " + g(tol::closed_integral) + ")";
    return std::pair{worst <= tol::closed_integral, detail};
  });

  criterion(4, "semigroup identity", [] {
    const double s = ml_semigroup_sum(0.2, 0.3, 0.5, 1.0, 60).value;
    const double p = ml_e(MLParams(0.5, 1.0), 0.2).value * ml_e(MLParams(0.5, 1.0), 0.3).value;
    const double d = std::fabs(s - p);
    return std::pair{d <= tol::semigroup, "|sum - product| = " + g(d) + " (tol " + g(tol::semigroup) + ")"};
  });

  criterion(5, "Borel consistency", [] {
    const QuadratureRule rule = gauss_laguerre_rule(64);
    double worst = 0.0;
    for (double a : {0.5, 0.625, 0.75, 0.875, 1.0}) {
      for (double x : {-5.0, -2.0, -0.5, 2.0, 5.0}) {
        const double e = ml_e(MLParams(a, 1.0), x).value;
        const double b = ml_via_borel(MLParams(a, 1.0), x, rule);
        worst = std::max(worst, std::fabs(b - e) / std::max(1.0, std::fabs(e)));
      }
    }
    return std::pair{worst <= tol::borel, "max |borel - ml_e| / max(1,|ml_e|) = " + g(worst) +
                                              " on 5x5 grid, 64 nodes (tol " + g(tol::borel) + ")"};
  });

  criterion(6, "RL eigenrelation", [] {
    const double lambda = 0.8;
    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.8}) {
      std::vector<PowerTerm> terms;
      for (int r = 0; r < 40; ++r) terms.push_back({std::exp(r * std::log(lambda) - log_gamma(a * r + 1.0)), a * r});
      const GenPowerSeries s(terms);
      const GenPowerSeries d = rl_frac_derivative(s, a);
      if (d.size() != 40) return std::pair{false, std::string("unexpected term count")};
      worst = std::max(worst, std::fabs(d.terms()[0].coeff - reciprocal_gamma(1.0 - a)));
      worst = std::max(worst, std::fabs(d.terms()[0].exponent + a));
      for (int r = 1; r < 40; ++r) {
        worst = std::max(worst, std::fabs(d.terms()[r].coeff - lambda * terms[r - 1].coeff));
        worst = std::max(worst, std::fabs(d.terms()[r].exponent - terms[r - 1].exponent));
      }
    }
    return std::pair{worst <= tol::rl_residual,
                     "max coefficient residual " + g(worst) + " (tol " + g(tol::rl_residual) + ")"};
  });

  criterion(7, "ML-derivative eigenrelation", [] {
    const double lambda = 0.6;
    double worst = 0.0;
    for (int n : {1, 2, 3}) {
      std::vector<PowerTerm> terms;
      for (int r = 0; r < 30; ++r) terms.push_back({std::exp(r * std::log(lambda) - log_gamma(n * r + 1.0)), double(r)});
      const GenPowerSeries d = ml_derivative_apply(GenPowerSeries(terms), n);
      if (d.size() != 29) return std::pair{false, std::string("unexpected term count")};
      for (int r = 0; r < 29; ++r) {
        worst = std::max(worst, std::fabs(d.terms()[r].coeff - lambda * terms[r].coeff));
        worst = std::max(worst, std::fabs(d.terms()[r].exponent - terms[r].exponent));
      }
    }
    return std::pair{worst <= tol::mld_residual,
                     "max coefficient residual " + g(worst) + " (tol " + g(tol::mld_residual) + ")"};
  });

  criterion(8, "fractional diffusion", [] {
    const GridFunction f = GridFunction::sample(-20.0, 20.0, 1024, [](double x) { return std::exp(-x * x); });
    double slowest = 0.0;
    auto timed = [&](double a, double t) {
      const auto start = std::chrono::steady_clock::now();
      DiffusionSolution s = solve_fractional_diffusion(f, a, t);
      slowest = std::max(slowest, seconds_since(start));
      return s;
    };
    const double t0 = 0.5;
    const DiffusionSolution heat = timed(1.0, t0);
    double heat_err = 0.0;
    const double d = 1.0 + 4.0 * t0;
    for (std::size_t i = 0; i < heat.grid.size(); ++i) {
      const double x = heat.grid.x(i);
      heat_err = std::max(heat_err, std::fabs(heat.grid[i] - std::exp(-x * x / d) / std::sqrt(d)));
    }
    const double m0 = grid_second_moment(f);
    double growth_err = 0.0;
    for (double a : {0.5, 0.8, 1.0}) {
      for (double t : {0.5, 1.0}) {
        const double growth = grid_second_moment(timed(a, t).grid) - m0;
        growth_err = std::max(growth_err, std::fabs(growth - 2.0 * std::pow(t, a) / std::tgamma(1.0 + a)));
      }
    }
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("mlkit_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    std::ostringstream out;
    std::ostringstream err;
    const std::string csv = (dir / "fig1.csv").string();
    const int code = cli::run({"figures", "fig1", "--alpha", "1.5,3.5", "--t", "0.2,0.6,1.0", "--experimental",
                               "--out", csv},
                              out, err);
    std::ifstream in(csv);
    const long lines = code == 0 ? std::count(std::istreambuf_iterator<char>(in), {}, '\n') : 0;
    std::filesystem::remove_all(dir);
    const bool emitted = code == 0 && lines == 1 + 6 * 1025;
    const bool ok = heat_err <= tol::heat && growth_err <= tol::moment_growth && slowest < tol::solve_seconds &&
                    emitted;
    return std::pair{ok, "heat sup error " + g(heat_err) + " (tol " + g(tol::heat) + "), growth error " +
                             g(growth_err) + " (tol " + g(tol::moment_growth) + "), slowest solve " +
                             g(slowest) + " s, experimental fig1 curves " + (emitted ? "emitted" : "missing")};
  });

  criterion(9, "drift PDE", [] {
    struct Triple {
      double a, b, t;
    };
    double worst = 0.0;
    for (const Triple& p : {Triple{1, 0.5, 0.4}, Triple{2, 1, 0.2}, Triple{0.5, 0.25, 1}}) {
      const DriftSolution s = solve_drift_pde(p.a, p.b, 1.0, p.t, -10.0, 10.0, 512);
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double x = s.grid.x(i);
        const double w = std::exp(p.a * x * p.t - 0.5 * p.a * p.b * p.t * p.t) *
                         std::exp(-(x - p.b * p.t) * (x - p.b * p.t));
        worst = std::max(worst, std::fabs(s.grid[i] - w));
      }
    }
    return std::pair{worst <= tol::weyl, "max sup-norm gap to the Weyl form " + g(worst) + " (tol " + g(tol::weyl) + ")"};
  });

  criterion(10, "photon statistics", [] {
    double mass_err = 0.0;
    for (double a : {0.6, 0.8, 1.0}) {
      for (double x : {0.25, 1.0, 4.0}) {
        mass_err = std::max(mass_err, std::fabs(count_distribution(CountVariant::schrodinger, a, x).total_mass - 1.0));
      }
    }
    const MomentSummary t = table_moments(count_distribution(CountVariant::schrodinger, 0.8, 0.5));
    const MomentSummary c = schrodinger_moments(0.8, 0.5);
    const double mom_err = std::max(std::fabs(t.mean - c.mean), std::fabs(t.variance - c.variance));
    double q1 = 0.0;
    for (double x : {0.25, 1.0, 4.0}) q1 = std::max(q1, std::fabs(schrodinger_moments(1.0, x).mandel_q));
    const bool ok = mass_err <= tol::normalization && mom_err <= tol::brute_moments && q1 <= tol::mandel_anchor;
    return std::pair{ok, "mass error " + g(mass_err) + " (tol " + g(tol::normalization) + "), moment error " +
                             g(mom_err) + " (tol " + g(tol::brute_moments) + "), |Q(1)| " + g(q1) + " (tol " +
                             g(tol::mandel_anchor) + ")"};
  });

  criterion(11, "Laskin distribution", [] {
    double m0 = 0.0;
    for (double a : {0.6, 0.8, 0.95}) {
      for (double l : {0.5, 1.0, 3.0}) {
        m0 = std::max(m0, std::fabs(p_m_laskin(0, a, l) - ml_e(MLParams(a, 1.0), -l).value));
      }
    }
    const CountDistribution d = count_distribution(CountVariant::laskin, 0.8, 1.5);
    double gf = 0.0;
    for (double s : {0.0, 0.5, 0.9}) {
      double poly = 0.0;
      for (std::size_t m = d.probs.size(); m-- > 0;) poly = poly * s + d.probs[m];
      gf = std::max(gf, std::fabs(generating_function_value(s, 0.8, 1.5) - poly));
    }
    const MomentSummary t = table_moments(d);
    const MomentSummary c = laskin_moments(0.8, 1.5);
    const double mom = std::max(std::fabs(t.mean - c.mean), std::fabs(t.variance - c.variance));
    const double mean_formula = std::fabs(c.mean - 1.5 / std::tgamma(1.8));
    const bool ok = m0 <= tol::laskin_m0 && gf <= tol::generating && mom <= tol::brute_moments &&
                    mean_formula <= 1e-14;
    return std::pair{ok, "|p_0 - E| " + g(m0) + " (tol " + g(tol::laskin_m0) + "), generating function gap " +
                             g(gf) + " (tol " + g(tol::generating) + "), moment error " + g(mom) + " (tol " +
                             g(tol::brute_moments) + ")"};
  });

  criterion(12, "Hermitian non-normalization", [] {
    const CountDistribution d = count_distribution(CountVariant::hermitian, 0.5, 0.1);
    const double closed = 1.0 / std::sqrt(0.6);
    const double gap = std::fabs(d.total_mass - closed);
    const double off = std::fabs(d.total_mass - 1.0);
    const bool ok = gap <= tol::hermitian && off > tol::hermitian_gap;
    return std::pair{ok, "sum " + std::to_string(d.total_mass) + ", gap to 1/sqrt(0.6) " + g(gap) + " (tol " +
                             g(tol::hermitian) + "), distance from 1 " + g(off) + " (> " +
                             g(tol::hermitian_gap) + ")"};
  });

  criterion(13, "sampling", [] {
    constexpr int n = 100000;
    std::string detail;
    bool ok = true;
    struct Case {
      CountVariant v;
      double a, x;
      const char* name;
    };
    for (const Case& c : {Case{CountVariant::schrodinger, 0.8, 1.0, "schrodinger"},
                          Case{CountVariant::laskin, 0.8, 1.0, "laskin"}}) {
      const CountDistribution d = count_distribution(c.v, c.a, c.x);
      const std::vector<int> s1 = sample_counts(d, 20240601, n);
      const std::vector<int> s2 = sample_counts(d, 20240601, n);
      const bool same = std::memcmp(s1.data(), s2.data(), s1.size() * sizeof(int)) == 0;
      const MomentSummary m =
          c.v == CountVariant::schrodinger ? schrodinger_moments(c.a, c.x) : laskin_moments(c.a, c.x);
      const double z = std::fabs(sample_mean(s1) - m.mean) / std::sqrt(m.variance / n);
      ok = ok && same && z <= tol::standard_errors;
      detail += std::string(c.name) + ": " + g(z) + " SE, streams " + (same ? "identical" : "differ") + "; ";
    }
    detail += "limit " + g(tol::standard_errors) + " SE";
    return std::pair{ok, detail};
  });

  std::printf("%d of 13 criteria passed\n", 13 - failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
