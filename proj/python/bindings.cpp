#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "mlkit/cli.hpp"
#include "mlkit/errors.hpp"
#include "mlkit/fracpde.hpp"
#include "mlkit/fracstats.hpp"
#include "mlkit/mittag.hpp"
#include "mlkit/scalar_core.hpp"
#include "mlkit/umbral.hpp"

namespace py = pybind11;
using namespace mlkit;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<double> grid_x(const GridFunction& g) {
  py::array_t<double> a(static_cast<py::ssize_t>(g.size()));
  double* p = a.mutable_data();
  for (std::size_t i = 0; i < g.size(); ++i) p[i] = g.x(i);
  return a;
}

CountVariant parse_variant(const std::string& name) {
  if (name == "schrodinger") return CountVariant::schrodinger;
  if (name == "laskin") return CountVariant::laskin;
  if (name == "hermitian") return CountVariant::hermitian;
  throw DomainError("unknown variant '" + name + "' (schrodinger, laskin or hermitian)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mittag-Leffler functions, fractional PDE solvers and count statistics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_ArithmeticError);

  py::enum_<Method>(m, "Method")
      .value("series", Method::series)
      .value("series_extended", Method::series_extended)
      .value("integral", Method::integral)
      .value("closed_form", Method::closed_form);

  py::class_<SeriesResult>(m, "SeriesResult")
      .def_readonly("value", &SeriesResult::value)
      .def_readonly("est_error", &SeriesResult::est_error)
      .def_readonly("terms_used", &SeriesResult::terms_used)
      .def_readonly("method", &SeriesResult::method)
      .def("__repr__", [](const SeriesResult& r) {
        return "SeriesResult(value=" + std::to_string(r.value) + ", est_error=" + std::to_string(r.est_error) + ")";
      });

  py::class_<CappedSum>(m, "CappedSum")
      .def_readonly("value", &CappedSum::value)
      .def_readonly("est_error", &CappedSum::est_error)
      .def_readonly("terms_used", &CappedSum::terms_used)
      .def_readonly("converged", &CappedSum::converged);

  py::class_<SemigroupSum>(m, "SemigroupSum")
      .def_readonly("value", &SemigroupSum::value)
      .def_readonly("last_term", &SemigroupSum::last_term)
      .def_readonly("terms_used", &SemigroupSum::terms_used)
      .def_readonly("converged", &SemigroupSum::converged);

  py::class_<MomentSummary>(m, "MomentSummary")
      .def_readonly("mean", &MomentSummary::mean)
      .def_readonly("variance", &MomentSummary::variance)
      .def_readonly("mandel_q", &MomentSummary::mandel_q);

  py::class_<CountDistribution>(m, "CountDistribution")
      .def_readonly("alpha", &CountDistribution::alpha)
      .def_readonly("intensity", &CountDistribution::intensity)
      .def_property_readonly("probs", [](const CountDistribution& d) { return to_array(d.probs); })
      .def_readonly("truncation_m", &CountDistribution::truncation_m)
      .def_readonly("total_mass", &CountDistribution::total_mass)
      .def_readonly("clamped_mass", &CountDistribution::clamped_mass)
      .def_readonly("tail_converged", &CountDistribution::tail_converged);

  m.def("log_gamma", &log_gamma, py::arg("x"));
  m.def("reciprocal_gamma", &reciprocal_gamma, py::arg("x"));

  m.def(
      "ml_e",
      [](double alpha, double beta, double x, double tolerance, int max_terms) {
        return ml_e(MLParams(alpha, beta), x, SeriesOptions{tolerance, max_terms});
      },
      py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("tolerance") = 1e-12, py::arg("max_terms") = 400,
      "E_{alpha,beta}(x) with an error estimate.");
  m.def(
      "wright", [](double alpha, double mu, double x) { return wright(alpha, mu, x); }, py::arg("alpha"),
      py::arg("mu"), py::arg("x"));
  m.def("laguerre_exp", &laguerre_exp, py::arg("x"));
  m.def(
      "ml_trig",
      [](double alpha, double x) {
        const TrigPair p = ml_trig(alpha, x);
        return py::make_tuple(p.cos_like, p.sin_like, p.est_error);
      },
      py::arg("alpha"), py::arg("x"), "(cos_like, sin_like, est_error)");
  m.def(
      "e_sab", [](int s, double alpha, double beta, double xi) { return e_sab(s, alpha, beta, xi); },
      py::arg("s"), py::arg("alpha"), py::arg("beta"), py::arg("xi"));
  m.def(
      "ml_via_borel",
      [](double alpha, double beta, double x, int nodes) {
        return ml_via_borel(MLParams(alpha, beta), x, gauss_laguerre_rule(nodes));
      },
      py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("nodes") = 64);

  m.def("ml_binomial", &ml_binomial, py::arg("n"), py::arg("r"), py::arg("alpha"), py::arg("beta"));
  m.def("ml_compose_power", &ml_compose_power, py::arg("x"), py::arg("y"), py::arg("n"), py::arg("alpha"),
        py::arg("beta"));
  m.def("ml_semigroup_sum", &ml_semigroup_sum, py::arg("x"), py::arg("y"), py::arg("alpha"), py::arg("beta"),
        py::arg("n_max"), py::arg("tolerance") = 1e-10);
  m.def("ml_gaussian_integral", &ml_gaussian_integral, py::arg("alpha"), py::arg("beta"));
  m.def("ml_stretched_integral", &ml_stretched_integral, py::arg("alpha"), py::arg("gamma"));

  m.def(
      "solve_fractional_diffusion",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> values, double x_min, double x_max,
         double alpha, double t, bool experimental) {
        std::vector<double> v(values.data(), values.data() + values.size());
        const DiffusionSolution s =
            solve_fractional_diffusion(GridFunction(x_min, x_max, std::move(v)), alpha, t, {experimental});
        py::dict out;
        out["x"] = grid_x(s.grid);
        out["value"] = to_array(s.grid.values());
        out["est_error"] = s.est_error;
        out["decay_warning"] = s.decay_warning;
        return out;
      },
      py::arg("values"), py::arg("x_min"), py::arg("x_max"), py::arg("alpha"), py::arg("t"),
      py::arg("experimental") = false, "Spectral solve on the periodic grid of `values` over [x_min, x_max).");
  m.def(
      "solve_drift_pde",
      [](double a, double b, double alpha, double t, double x_min, double x_max, int n) {
        const DriftSolution s = solve_drift_pde(a, b, alpha, t, x_min, x_max, n);
        py::dict out;
        out["x"] = grid_x(s.grid);
        out["value"] = to_array(s.grid.values());
        out["est_error"] = s.est_error;
        out["terms_used"] = s.terms_used;
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("t"), py::arg("x_min"), py::arg("x_max"), py::arg("n"));

  m.def("p_m_schrodinger", &p_m_schrodinger, py::arg("m"), py::arg("alpha"), py::arg("x"));
  m.def("p_m_laskin", &p_m_laskin, py::arg("m"), py::arg("alpha"), py::arg("lam"));
  m.def("hermitian_square_amplitude", &hermitian_square_amplitude, py::arg("m"), py::arg("alpha"), py::arg("x"));
  m.def("generating_function_value", &generating_function_value, py::arg("s"), py::arg("alpha"), py::arg("lam"));
  m.def("schrodinger_moments", &schrodinger_moments, py::arg("alpha"), py::arg("x"));
  m.def("laskin_moments", &laskin_moments, py::arg("alpha"), py::arg("lam"));
  m.def("coherent_amplitude_laskin", &coherent_amplitude_laskin, py::arg("n"), py::arg("zeta_abs2"),
        py::arg("alpha"));
  m.def(
      "count_distribution",
      [](const std::string& variant, double alpha, double intensity) {
        return count_distribution(parse_variant(variant), alpha, intensity);
      },
      py::arg("variant"), py::arg("alpha"), py::arg("intensity"));
  m.def("table_moments", &table_moments, py::arg("dist"));
  m.def(
      "sample_counts",
      [](const CountDistribution& d, std::uint64_t seed, int n) {
        const std::vector<int> s = sample_counts(d, seed, n);
        py::array_t<int> a(static_cast<py::ssize_t>(s.size()));
        std::copy(s.begin(), s.end(), a.mutable_data());
        return a;
      },
      py::arg("dist"), py::arg("seed"), py::arg("n"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        std::vector<const char*> argv{"mlkit"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli::run(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line front end in-process and returns its exit code.");
}
