#include "mlkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlkit/errors.hpp"
#include "mlkit/fracpde.hpp"
#include "mlkit/fracstats.hpp"
#include "mlkit/mittag.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/umbral.hpp"

namespace mlkit::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

/// Raised for problems that map to exit code 2 outside CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json metadata = json::object();
};

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i > 0) s += ',';
    s += t.columns[i];
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) s += ',';
      s += fmt17(row[i]);
    }
    s += '\n';
  }
  return s;
}

std::string to_json(const Table& t) {
  json doc;
  doc["metadata"] = t.metadata;
  doc["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) rows.push_back(row);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

/// Every value any command can take. Only the selected command's fields are read.
struct Options {
  double alpha = 0.0;
  double beta = 1.0;
  double mu = 0.0;
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double omega = 1.0;
  double x_min = -10.0;
  double x_max = 10.0;
  double x_grid_max = 5.0;
  double tolerance = 1e-10;
  int s = 0;
  int n = 0;
  int r = 0;
  int m = 0;
  int nodes = 64;
  int points = 1024;
  int alpha_points = 50;
  int x_points = 100;
  int n_max = 60;
  int cap = 0;
  int samples = 0;
  std::uint64_t seed = 1;
  bool experimental = false;
  std::string part = "cos";
  std::string out;
  std::string format;
  std::vector<double> alphas;
  std::vector<double> ts;
  std::vector<int> ms;
};

const CLI::Validator& finite_real() {
  static const CLI::Validator v(
      [](std::string& in) -> std::string {
        std::istringstream is(in);
        double d = 0.0;
        is >> d;
        if (is.fail() || !is.eof() || !std::isfinite(d)) return "must be a finite real, got '" + in + "'";
        return {};
      },
      "FINITE");
  return v;
}

CLI::Option* real(CLI::App* app, const std::string& name, double& target, const std::string& help) {
  return app->add_option(name, target, help)->check(finite_real());
}

CLI::Option* real_list(CLI::App* app, const std::string& name, std::vector<double>& target,
                       const std::string& help) {
  return app->add_option(name, target, help)->delimiter(',')->check(finite_real());
}

void add_output(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "output file; relative paths resolve under $MLKIT_OUTPUT_DIR");
  app->add_option("--format", o.format, "csv or json (default from the --out extension, else csv)")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::string result_line(double value, double est_error) {
  return "value=" + fmt17(value) + " est_error=" + fmt17(est_error);
}

std::filesystem::path resolve_output(const Options& o, const std::string& default_stem) {
  std::string format = o.format;
  std::filesystem::path p = o.out;
  if (format.empty()) format = p.extension() == ".json" ? "json" : "csv";
  if (p.empty()) p = default_stem + "." + format;
  if (p.is_relative()) {
    if (const char* dir = std::getenv("MLKIT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_table(const Options& o, const std::string& default_stem, Table& t, std::ostream& out) {
  const std::filesystem::path p = resolve_output(o, default_stem);
  const bool as_json = o.format == "json" || (o.format.empty() && p.extension() == ".json");
  t.metadata["version"] = std::string("mlkit ") + kVersion;
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("--out: cannot open '" + p.string() + "' for writing");
  f << (as_json ? to_json(t) : to_csv(t));
  f.close();
  if (!f) throw UsageError("--out: failed writing '" + p.string() + "'");
  out << "wrote=" << p.string() << " rows=" << t.rows.size() << "\n";
}

// ---- eval ---------------------------------------------------------------

void setup_eval(CLI::App& app, Options& o, std::ostream& out) {
  auto* eval = app.add_subcommand("eval", "evaluate a single function value");
  eval->require_subcommand(1);

  auto* ml = eval->add_subcommand("ml", "Mittag-Leffler E_{alpha,beta}(x)");
  real(ml, "--alpha", o.alpha, "alpha > 0")->required();
  real(ml, "--beta", o.beta, "beta > 0 (default 1)");
  real(ml, "--x", o.x, "argument")->required();
  ml->callback([&] {
    const SeriesResult r = ml_e(MLParams(o.alpha, o.beta), o.x);
    out << result_line(r.value, r.est_error) << "\n";
  });

  auto* wr = eval->add_subcommand("wright", "Bessel-Wright W_alpha^(mu)(x)");
  real(wr, "--alpha", o.alpha, "alpha > 0")->required();
  real(wr, "--mu", o.mu, "mu > -1 (default 0)");
  real(wr, "--x", o.x, "argument")->required();
  wr->callback([&] {
    const SeriesResult r = wright(o.alpha, o.mu, o.x);
    out << result_line(r.value, r.est_error) << "\n";
  });

  auto* lag = eval->add_subcommand("laguerre", "Laguerre exponential sum x^r/(r!)^2");
  real(lag, "--x", o.x, "argument")->required();
  lag->callback([&] {
    const SeriesResult r = laguerre_exp(o.x);
    out << result_line(r.value, r.est_error) << "\n";
  });

  auto* trig = eval->add_subcommand("trig", "Mittag-Leffler cosine or sine");
  real(trig, "--alpha", o.alpha, "alpha > 0")->required();
  real(trig, "--x", o.x, "argument")->required();
  trig->add_option("--part", o.part, "cos or sin")->check(CLI::IsMember({"cos", "sin"}));
  trig->callback([&] {
    const TrigPair p = ml_trig(o.alpha, o.x);
    out << result_line(o.part == "cos" ? p.cos_like : p.sin_like, p.est_error) << "\n";
  });

  auto* esab = eval->add_subcommand("esab", "e_s^(alpha,beta)(x)");
  esab->add_option("--s", o.s, "order s >= 0")->required();
  real(esab, "--alpha", o.alpha, "alpha")->required();
  real(esab, "--beta", o.beta, "beta (default 1)");
  real(esab, "--x", o.x, "argument")->required();
  esab->add_option("--cap", o.cap, "sum at most this many terms and report convergence");
  esab->callback([&] {
    if (o.cap > 0) {
      const CappedSum c = e_sab_capped(o.s, o.alpha, o.beta, o.x, o.cap);
      out << result_line(c.value, c.est_error) << "\n";
      if (!c.converged) throw NonConvergenceError("--cap: capped sum did not converge");
      return;
    }
    const SeriesResult r = e_sab(o.s, o.alpha, o.beta, o.x);
    out << result_line(r.value, r.est_error) << "\n";
  });

  auto* borel = eval->add_subcommand("borel", "E_{alpha,beta}(x) via the Borel-Laplace integral");
  real(borel, "--alpha", o.alpha, "alpha > 0")->required();
  real(borel, "--beta", o.beta, "beta (default 1)");
  real(borel, "--x", o.x, "argument")->required();
  borel->add_option("--nodes", o.nodes, "Gauss-Laguerre nodes (default 64)");
  borel->callback([&] {
    const MLParams p(o.alpha, o.beta);
    const double v = ml_via_borel(p, o.x, gauss_laguerre_rule(o.nodes));
    out << result_line(v, std::fabs(v - ml_e(p, o.x).value)) << "\n";
  });

  auto* rg = eval->add_subcommand("rgamma", "1/Gamma(x)");
  real(rg, "--x", o.x, "argument")->required();
  rg->callback([&] { out << result_line(reciprocal_gamma(o.x), 0.0) << "\n"; });

  auto* lgm = eval->add_subcommand("lgamma", "log|Gamma(x)|");
  real(lgm, "--x", o.x, "argument")->required();
  lgm->callback([&] { out << result_line(log_gamma(o.x), 0.0) << "\n"; });
}

// ---- compose / integrate -------------------------------------------------

void setup_compose(CLI::App& app, Options& o, std::ostream& out) {
  auto* compose = app.add_subcommand("compose", "argument-composition identities");
  compose->require_subcommand(1);

  auto* sg = compose->add_subcommand("semigroup", "sum_n (x (+) y)^n / Gamma(alpha n + beta)");
  real(sg, "--x", o.x, "first argument")->required();
  real(sg, "--y", o.y, "second argument")->required();
  real(sg, "--alpha", o.alpha, "alpha > 0")->required();
  real(sg, "--beta", o.beta, "beta (default 1)");
  sg->add_option("--n-max", o.n_max, "highest order 1..200 (default 60)");
  real(sg, "--tolerance", o.tolerance, "convergence threshold on the last order (default 1e-10)");
  sg->callback([&] {
    const SemigroupSum s = ml_semigroup_sum(o.x, o.y, o.alpha, o.beta, o.n_max, o.tolerance);
    out << result_line(s.value, std::fabs(s.last_term)) << "\n";
    if (!s.converged) throw NonConvergenceError("--n-max: the last order still exceeds --tolerance");
  });

  auto* pw = compose->add_subcommand("power", "(x (+) y)^n under the modified binomial law");
  real(pw, "--x", o.x, "first argument")->required();
  real(pw, "--y", o.y, "second argument")->required();
  pw->add_option("--n", o.n, "power n >= 0")->required();
  real(pw, "--alpha", o.alpha, "alpha > 0")->required();
  real(pw, "--beta", o.beta, "beta (default 1)");
  pw->callback([&] { out << result_line(ml_compose_power(o.x, o.y, o.n, o.alpha, o.beta), 0.0) << "\n"; });

  auto* bn = compose->add_subcommand("binomial", "modified binomial coefficient");
  bn->add_option("--n", o.n, "n >= 0")->required();
  bn->add_option("--r", o.r, "0 <= r <= n")->required();
  real(bn, "--alpha", o.alpha, "alpha > 0")->required();
  real(bn, "--beta", o.beta, "beta (default 1)");
  bn->callback([&] { out << result_line(ml_binomial(o.n, o.r, o.alpha, o.beta), 0.0) << "\n"; });
}

void setup_integrate(CLI::App& app, Options& o, std::ostream& out) {
  auto* integ = app.add_subcommand("integrate", "closed-form integrals over the real line");
  integ->require_subcommand(1);

  auto* g = integ->add_subcommand("gaussian", "integral of E_{alpha,beta}(-x^2)");
  real(g, "--alpha", o.alpha, "alpha > 0")->required();
  real(g, "--beta", o.beta, "beta (default 1)");
  g->callback([&] { out << result_line(ml_gaussian_integral(o.alpha, o.beta), 0.0) << "\n"; });

  auto* st = integ->add_subcommand("stretched", "integral of E_{alpha,1}(-|x|^gamma)");
  real(st, "--alpha", o.alpha, "alpha > 0")->required();
  real(st, "--gamma", o.gamma, "gamma > 1")->required();
  st->callback([&] { out << result_line(ml_stretched_integral(o.alpha, o.gamma), 0.0) << "\n"; });
}

// ---- pde ------------------------------------------------------------------

void setup_pde(CLI::App& app, Options& o, std::ostream& out) {
  auto* pde = app.add_subcommand("pde", "solve a fractional PDE on a grid");
  pde->require_subcommand(1);

  auto* diff = pde->add_subcommand("diffusion", "time-fractional diffusion from f(x) = exp(-x^2)");
  real(diff, "--alpha", o.alpha, "order in (0, 2], or (0, 4] with --experimental")->required();
  real(diff, "--t", o.t, "time >= 0")->required();
  real(diff, "--x-min", o.x_min, "left end (default -10)");
  real(diff, "--x-max", o.x_max, "right end (default 10)");
  diff->add_option("--points", o.points, "grid size (default 1024)")->check(CLI::Range(2, 1 << 22));
  diff->add_flag("--experimental", o.experimental, "admit 2 < alpha <= 4");
  add_output(diff, o);
  diff->callback([&] {
    const GridFunction f =
        GridFunction::sample(o.x_min, o.x_max, o.points, [](double x) { return std::exp(-x * x); });
    const DiffusionSolution s = solve_fractional_diffusion(f, o.alpha, o.t, {o.experimental});
    Table t;
    t.columns = {"x", "value"};
    for (std::size_t i = 0; i < s.grid.size(); ++i) t.rows.push_back({s.grid.x(i), s.grid[i]});
    t.metadata["command"] = "pde diffusion";
    t.metadata["parameters"] = {{"alpha", o.alpha}, {"t", o.t}, {"x_min", o.x_min},
                                {"x_max", o.x_max}, {"points", o.points},
                                {"experimental", o.experimental}};
    t.metadata["est_error"] = s.est_error;
    t.metadata["decay_warning"] = s.decay_warning;
    write_table(o, "diffusion", t, out);
  });

  auto* drift = pde->add_subcommand("drift", "drift problem with Gaussian initial data");
  real(drift, "--a", o.a, "drift coefficient a")->required();
  real(drift, "--b", o.b, "drift coefficient b")->required();
  real(drift, "--alpha", o.alpha, "order in (0, 1]")->required();
  real(drift, "--t", o.t, "time >= 0")->required();
  real(drift, "--x-min", o.x_min, "left end (default -10)");
  real(drift, "--x-max", o.x_max, "right end (default 10)");
  drift->add_option("--points", o.points, "grid size (default 1024)")->check(CLI::Range(1, 1 << 22));
  add_output(drift, o);
  drift->callback([&] {
    const DriftSolution s = solve_drift_pde(o.a, o.b, o.alpha, o.t, o.x_min, o.x_max, o.points);
    Table t;
    t.columns = {"x", "value"};
    for (std::size_t i = 0; i < s.grid.size(); ++i) t.rows.push_back({s.grid.x(i), s.grid[i]});
    t.metadata["command"] = "pde drift";
    t.metadata["parameters"] = {{"a", o.a},         {"b", o.b},         {"alpha", o.alpha},
                                {"t", o.t},         {"x_min", o.x_min}, {"x_max", o.x_max},
                                {"points", o.points}};
    t.metadata["est_error"] = s.est_error;
    t.metadata["terms_used"] = s.terms_used;
    write_table(o, "drift", t, out);
  });
}

// ---- dist ---------------------------------------------------------------

void setup_dist(CLI::App& app, Options& o, std::ostream& out) {
  auto* dist = app.add_subcommand("dist", "photon-count distribution tables and samples");
  dist->require_subcommand(1);

  struct Variant {
    const char* name;
    CountVariant kind;
    const char* intensity_flag;
    const char* help;
  };
  static const Variant variants[] = {
      {"schrodinger", CountVariant::schrodinger, "--x", "fractional Schrodinger counts"},
      {"laskin", CountVariant::laskin, "--lambda", "fractional Poisson (Laskin) counts"},
      {"hermitian", CountVariant::hermitian, "--x", "squared Hermitian amplitudes (not normalized)"},
  };
  for (const Variant& v : variants) {
    auto* sub = dist->add_subcommand(v.name, v.help);
    real(sub, "--alpha", o.alpha, "order alpha")->required();
    double& level = v.kind == CountVariant::laskin ? o.lambda : o.x;
    auto* lvl = real(sub, v.intensity_flag, level,
                     v.kind == CountVariant::laskin ? "Lambda = Omega t^alpha" : "X = (Omega t^alpha)^2");
    auto* om = real(sub, "--omega", o.omega, "Omega, combined with --t instead of the intensity");
    auto* tt = real(sub, "--t", o.t, "time, combined with --omega");
    om->needs(tt);
    tt->needs(om);
    lvl->excludes(om);
    if (v.kind != CountVariant::hermitian) {
      sub->add_option("--samples", o.samples, "draw this many seeded samples instead of the table")
          ->check(CLI::PositiveNumber);
      sub->add_option("--seed", o.seed, "sampler seed (default 1)");
    }
    add_output(sub, o);
    const Variant* vp = &v;
    sub->callback([&o, &out, vp, lvl, om] {
      if (lvl->count() == 0 && om->count() == 0) {
        throw UsageError(std::string(vp->intensity_flag) + ": required unless --omega and --t are given");
      }
      double intensity = vp->kind == CountVariant::laskin ? o.lambda : o.x;
      if (om->count() > 0) {
        const double base = o.omega * std::pow(o.t, o.alpha);
        intensity = vp->kind == CountVariant::laskin ? base : base * base;
      }
      const CountDistribution d = count_distribution(vp->kind, o.alpha, intensity);
      Table t;
      t.metadata["command"] = std::string("dist ") + vp->name;
      t.metadata["parameters"] = {{"alpha", o.alpha}, {"intensity", intensity}};
      t.metadata["truncation_m"] = d.truncation_m;
      t.metadata["total_mass"] = d.total_mass;
      t.metadata["clamped_mass"] = d.clamped_mass;
      t.metadata["tail_converged"] = d.tail_converged;
      if (o.samples > 0) {
        const std::vector<int> draws = sample_counts(d, o.seed, o.samples);
        t.metadata["seed"] = o.seed;
        t.columns = {"sample", "m"};
        for (std::size_t i = 0; i < draws.size(); ++i) {
          t.rows.push_back({static_cast<double>(i), static_cast<double>(draws[i])});
        }
      } else {
        t.columns = {"m", "probability"};
        for (std::size_t m = 0; m < d.probs.size(); ++m) {
          t.rows.push_back({static_cast<double>(m), d.probs[m]});
        }
      }
      write_table(o, vp->name, t, out);
    });
  }
}

// ---- figures ---------------------------------------------------------------

void setup_figures(CLI::App& app, Options& o, std::ostream& out) {
  auto* fig = app.add_subcommand("figures", "emit tidy CSV data for the four figure families");
  fig->require_subcommand(1);

  auto* f1 = fig->add_subcommand("fig1", "fractional diffusion of exp(-x^2) on [-10, 10]");
  real_list(f1, "--alpha", o.alphas, "comma-separated orders")->required();
  real_list(f1, "--t", o.ts, "comma-separated times")->required();
  f1->add_option("--points", o.points, "grid size (default 1024)")->check(CLI::Range(2, 1 << 22));
  f1->add_flag("--experimental", o.experimental, "admit 2 < alpha <= 4");
  add_output(f1, o);
  f1->callback([&] {
    Table t;
    t.columns = {"curve", "alpha", "t", "x", "value"};
    const GridFunction f =
        GridFunction::sample(-10.0, 10.0, o.points, [](double x) { return std::exp(-x * x); });
    bool warn = false;
    double est = 0.0;
    int curve = 0;
    for (double a : o.alphas) {
      for (double tv : o.ts) {
        const DiffusionSolution s = solve_fractional_diffusion(f, a, tv, {o.experimental});
        warn = warn || s.decay_warning;
        est = std::max(est, s.est_error);
        for (std::size_t i = 0; i <= s.grid.size(); ++i) {
          const std::size_t j = i % s.grid.size();
          const double x = i == s.grid.size() ? 10.0 : s.grid.x(i);
          t.rows.push_back({static_cast<double>(curve), a, tv, x, s.grid[j]});
        }
        ++curve;
      }
    }
    t.metadata["command"] = "figures fig1";
    t.metadata["parameters"] = {{"alpha", o.alphas}, {"t", o.ts}, {"points", o.points},
                                {"experimental", o.experimental}};
    t.metadata["est_error"] = est;
    t.metadata["decay_warning"] = warn;
    write_table(o, "fig1", t, out);
  });

  auto* f2 = fig->add_subcommand("fig2", "drift problem solution for a list of orders");
  real(f2, "--a", o.a, "drift coefficient a")->required();
  real(f2, "--b", o.b, "drift coefficient b")->required();
  real_list(f2, "--alpha", o.alphas, "comma-separated orders in (0, 1]")->required();
  real(f2, "--t", o.t, "time")->required();
  real(f2, "--x-min", o.x_min, "left end (default -10)");
  real(f2, "--x-max", o.x_max, "right end (default 10)");
  f2->add_option("--points", o.points, "intervals (default 1024)")->check(CLI::Range(1, 1 << 22));
  add_output(f2, o);
  f2->callback([&] {
    if (!(o.x_max > o.x_min)) throw UsageError("--x-max: must exceed --x-min");
    Table t;
    t.columns = {"curve", "a", "b", "alpha", "t", "x", "value"};
    const double h = (o.x_max - o.x_min) / o.points;
    double est = 0.0;
    int curve = 0;
    for (double a : o.alphas) {
      const DriftSolution s = solve_drift_pde(o.a, o.b, a, o.t, o.x_min, o.x_max + h, o.points + 1);
      est = std::max(est, s.est_error);
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        const double x = i + 1 == s.grid.size() ? o.x_max : o.x_min + static_cast<double>(i) * h;
        t.rows.push_back({static_cast<double>(curve), o.a, o.b, a, o.t, x, s.grid[i]});
      }
      ++curve;
    }
    t.metadata["command"] = "figures fig2";
    t.metadata["parameters"] = {{"a", o.a},         {"b", o.b},         {"alpha", o.alphas},
                                {"t", o.t},         {"x_min", o.x_min}, {"x_max", o.x_max},
                                {"points", o.points}};
    t.metadata["est_error"] = est;
    write_table(o, "fig2", t, out);
  });

  auto* f3 = fig->add_subcommand("fig3", "Schrodinger Mandel parameter against alpha");
  real_list(f3, "--t", o.ts, "comma-separated times")->required();
  real(f3, "--omega", o.omega, "Omega (default 1)");
  f3->add_option("--points", o.alpha_points, "alpha grid size over (1/2, 1] (default 50)")
      ->check(CLI::Range(1, 100000));
  add_output(f3, o);
  f3->callback([&] {
    Table t;
    t.columns = {"curve", "t", "omega", "alpha", "Q"};
    int curve = 0;
    for (double tv : o.ts) {
      for (int i = 1; i <= o.alpha_points; ++i) {
        const double a = i == o.alpha_points ? 1.0 : 0.5 + 0.5 * i / o.alpha_points;
        const double base = o.omega * std::pow(tv, a);
        t.rows.push_back({static_cast<double>(curve), tv, o.omega, a,
                          schrodinger_moments(a, base * base).mandel_q});
      }
      ++curve;
    }
    t.metadata["command"] = "figures fig3";
    t.metadata["parameters"] = {{"t", o.ts}, {"omega", o.omega}, {"points", o.alpha_points}};
    write_table(o, "fig3", t, out);
  });

  auto* f4 = fig->add_subcommand("fig4", "Schrodinger count probabilities p_m against X");
  f4->add_option("--m", o.ms, "comma-separated counts (default 1,2,4)")->delimiter(',')->check(CLI::NonNegativeNumber);
  real_list(f4, "--alpha", o.alphas, "comma-separated orders in (1/2, 1]")->required();
  real(f4, "--x-max", o.x_grid_max, "largest X (default 5)");
  f4->add_option("--points", o.x_points, "X grid intervals (default 100)")
      ->check(CLI::Range(1, 100000));
  add_output(f4, o);
  f4->callback([&] {
    if (o.ms.empty()) o.ms = {1, 2, 4};
    if (!(o.x_grid_max > 0.0)) throw UsageError("--x-max: must be positive");
    Table t;
    t.columns = {"curve", "m", "alpha", "X", "p"};
    int curve = 0;
    for (double a : o.alphas) {
      for (int m : o.ms) {
        for (int i = 0; i <= o.x_points; ++i) {
          const double xv = o.x_grid_max * i / o.x_points;
          t.rows.push_back({static_cast<double>(curve), static_cast<double>(m), a, xv,
                            p_m_schrodinger(m, a, xv)});
        }
        ++curve;
      }
    }
    t.metadata["command"] = "figures fig4";
    t.metadata["parameters"] = {{"m", o.ms}, {"alpha", o.alphas}, {"x_max", o.x_grid_max},
                                {"points", o.x_points}};
    write_table(o, "fig4", t, out);
  });
}

// ---- config file ------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("--config: cannot read '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string l = trim(line);
    if (l.empty() || l[0] == '#') continue;
    const auto eq = l.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config: line " + std::to_string(lineno) + " is not key=value");
    }
    std::string key = trim(l.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    entries.emplace_back(key, trim(l.substr(eq + 1)));
  }
  return entries;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

/// Chooses the flag to blame for a library error by the earliest parameter name in its message.
std::string blame(const CLI::App* leaf, const std::string& message) {
  if (leaf == nullptr) return {};
  std::size_t best = std::string::npos;
  std::string flag;
  const auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  for (const CLI::Option* opt : leaf->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::string words[2] = {name, name};
    for (char& c : words[1]) {
      if (c == '-') c = '_';
    }
    if (name == "x" || name == "lambda") words[1] = "intensity";
    for (const std::string& w : words) {
      for (std::size_t pos = message.find(w); pos != std::string::npos; pos = message.find(w, pos + 1)) {
        const bool left = pos == 0 || !is_word(message[pos - 1]);
        const bool right = pos + w.size() >= message.size() || !is_word(message[pos + w.size()]);
        if (left && right && pos < best) {
          best = pos;
          flag = "--" + name;
        }
      }
    }
  }
  return flag;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return trim(s);
}

}  // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i] == "--config") {
      if (i + 1 >= input.size()) {
        err << "error: --config: expected a file path\n";
        return kExitUsage;
      }
      config_path = input[++i];
    } else if (input[i].rfind("--config=", 0) == 0) {
      config_path = input[i].substr(9);
    } else {
      args.push_back(input[i]);
    }
  }

  Options o;
  CLI::App app("Mittag-Leffler toolkit: special functions, fractional PDEs and count statistics", "mlkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mlkit ") + kVersion);
  app.footer("Flags may also come from --config FILE with key=value lines; flags win.");
  setup_eval(app, o, out);
  setup_compose(app, o, out);
  setup_integrate(app, o, out);
  setup_pde(app, o, out);
  setup_dist(app, o, out);
  setup_figures(app, o, out);

  CLI::App* leaf = nullptr;
  try {
    if (args.size() >= 2) {
      CLI::App* cmd = app.get_subcommand_no_throw(args[0]);
      if (cmd != nullptr) leaf = cmd->get_subcommand_no_throw(args[1]);
    }
    if (config_path) {
      if (leaf == nullptr) throw UsageError("--config: a command and kind must precede the config file");
      std::vector<std::string> extra;
      for (const auto& [key, value] : read_config(*config_path)) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = leaf->get_option_no_throw(flag);
        if (opt == nullptr || key == "help") throw UsageError("--config: unknown key '" + key + "'");
        if (given_on_command_line(args, flag)) continue;
        if (opt->get_expected_min() == 0) {
          if (value == "true" || value == "1") {
            extra.push_back(flag);
          } else if (value != "false" && value != "0") {
            throw UsageError("--config: key '" + key + "' expects true or false");
          }
        } else {
          extra.push_back(flag);
          extra.push_back(value);
        }
      }
      args.insert(args.end(), extra.begin(), extra.end());
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return kExitOk;
  } catch (const CLI::CallForHelp&) {
    out << (leaf != nullptr && args.size() >= 2 ? leaf->help() : app.help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "mlkit " << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    const std::string flag = blame(leaf, e.what());
    err << "error: " << (flag.empty() || std::string(e.what()).rfind("--", 0) == 0 ? "" : flag + ": ")
        << one_line(e.what()) << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    const std::string msg = one_line(e.what());
    const std::string flag = msg.rfind("--", 0) == 0 ? std::string() : blame(leaf, msg);
    err << "error: " << (flag.empty() ? "" : flag + ": ") << msg << "\n";
    return kExitUsage;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mlkit::cli
