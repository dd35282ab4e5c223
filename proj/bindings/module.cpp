#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relspec/duhamel.hpp"
#include "relspec/errors.hpp"
#include "relspec/experiment.hpp"
#include "relspec/models.hpp"
#include "relspec/verify.hpp"
#include "relspec/zeta.hpp"

namespace py = pybind11;
using namespace relspec;

namespace {

PerturbationPair make_pair(const Eigen::MatrixXd& base, const Eigen::MatrixXd& perturbed,
                           bool laplacian_like) {
  return PerturbationPair(OperatorHandle(base, "base", laplacian_like),
                          OperatorHandle(perturbed, "perturbed", laplacian_like));
}

py::dict expansion_dict(const AsymptoticExpansion& fit) {
  py::dict d;
  d["exponents"] = fit.exponents;
  d["coefficients"] = fit.coefficients;
  d["stderrs"] = fit.stderrs;
  d["residual_rms"] = fit.residual_rms;
  d["condition_number"] = fit.condition_number;
  d["ill_conditioned"] = fit.ill_conditioned;
  return d;
}

py::dict zeta_dict(const ZetaResult& z) {
  py::dict d;
  d["s_values"] = z.s_values;
  d["zeta_values"] = z.zeta_values;
  d["zeta_prime_at_zero"] = z.zeta_prime_at_zero;
  d["relative_determinant"] = z.relative_determinant;
  d["h"] = z.h;
  d["poles"] = z.poles;
  d["split_point"] = z.split_point;
  d["fit_residual"] = z.diagnostics.fit_residual;
  d["tail_bound"] = z.diagnostics.tail_bound;
  d["spectral_gap"] = z.diagnostics.spectral_gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "relative spectral invariants for pairs of discretized operators";
  m.attr("__version__") = "0.1.0";

  py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<capability_error>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<numerical_error>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<io_error>(m, "IoError", PyExc_OSError);

  py::class_<PerturbationPair>(m, "PerturbationPair")
      .def_property_readonly("dim", &PerturbationPair::dim)
      .def_property_readonly("h", &PerturbationPair::kernel_dim_diff)
      .def("spectral_gap", &PerturbationPair::spectral_gap)
      .def("relative_trace", &PerturbationPair::relative_trace, py::arg("t"));

  m.def("make_pair", &make_pair, py::arg("base"), py::arg("perturbed"),
        py::arg("laplacian_like") = true,
        "pair of symmetric operators differing by a perturbation");

  m.def(
      "relative_heat_trace",
      [](const PerturbationPair& pair, const std::vector<double>& t_grid,
         const std::string& method, int probes, std::uint64_t seed, int threads) {
        StochasticOptions opts;
        opts.probes = probes;
        opts.seed = seed;
        HeatTraceSeries s =
            relative_heat_trace(pair, t_grid, trace_method_from_string(method), opts, threads);
        return py::make_tuple(s.values, s.error_estimates);
      },
      py::arg("pair"), py::arg("t_grid"), py::arg("method") = "dense_spectral",
      py::arg("probes") = 64, py::arg("seed") = 7, py::arg("threads") = 1,
      "values and error estimates of tr(exp(-tA) - exp(-tA')) over the grid");

  m.def(
      "fit_expansion",
      [](const std::vector<double>& t_grid, const std::vector<double>& values, int n_dim,
         int terms, double window_min, double window_max) {
        HeatTraceSeries series;
        series.t_grid = t_grid;
        series.values = values;
        series.error_estimates.assign(values.size(), 0.0);
        return expansion_dict(fit_expansion(series, n_dim, terms, window_min, window_max));
      },
      py::arg("t_grid"), py::arg("values"), py::arg("n_dim"), py::arg("terms"),
      py::arg("window_min"), py::arg("window_max"),
      "weighted least squares fit of the small-time expansion");

  m.def(
      "zeta_pipeline",
      [](const PerturbationPair& pair, double split_point,
         const std::vector<std::complex<double>>& s_values, int n_dim, int terms,
         double window_min, double window_max, int threads) {
        ZetaPipelineOptions opt;
        opt.split_point = split_point;
        opt.s_values = s_values;
        opt.n_dim = n_dim;
        opt.terms = terms;
        opt.window_min = window_min;
        opt.window_max = window_max;
        opt.threads = threads;
        return zeta_dict(zeta_pipeline(pair, opt));
      },
      py::arg("pair"), py::arg("split_point") = 1.0,
      py::arg("s_values") = std::vector<std::complex<double>>{}, py::arg("n_dim") = 2,
      py::arg("terms") = 4, py::arg("window_min") = 1e-3, py::arg("window_max") = 1e-1,
      py::arg("threads") = 1, "heat series, expansion fit, zeta values and determinant");

  m.def(
      "relative_determinant",
      [](const PerturbationPair& pair, double split_point, int n_dim, int terms) {
        ZetaPipelineOptions opt;
        opt.split_point = split_point;
        opt.n_dim = n_dim;
        opt.terms = terms;
        return zeta_pipeline(pair, opt).relative_determinant;
      },
      py::arg("pair"), py::arg("split_point") = 1.0, py::arg("n_dim") = 2, py::arg("terms") = 4,
      "exp(-zeta'(0)) for the pair");

  m.def(
      "relative_index",
      [](const Eigen::MatrixXd& dplus_base, const Eigen::MatrixXd& dplus_perturbed,
         const std::vector<double>& t_grid) {
        RelativeIndexResult idx = relative_index(graded_from_block(dplus_base, "base"),
                                                 graded_from_block(dplus_perturbed, "perturbed"),
                                                 t_grid);
        py::dict d;
        d["values"] = idx.values;
        d["mean"] = idx.mean;
        d["max_deviation"] = idx.max_deviation;
        d["nearest_integer"] = idx.nearest_integer;
        return d;
      },
      py::arg("dplus_base"), py::arg("dplus_perturbed"),
      py::arg("t_grid") = std::vector<double>{0.1, 1.0, 10.0},
      "supertrace of the graded heat difference built from two + -> - blocks");

  m.def(
      "duhamel_residual",
      [](const PerturbationPair& pair, double t, int nodes) {
        const QuadratureRule rule =
            QuadratureRule::make(QuadratureKind::gauss_legendre, nodes, t);
        const Eigen::MatrixXd exact =
            heat_kernel(pair.base(), t).entries - heat_kernel(pair.perturbed(), t).entries;
        return (duhamel_difference(pair, t, rule) - exact).norm() /
               std::max(exact.norm(), 1e-30);
      },
      py::arg("pair"), py::arg("t") = 1.0, py::arg("nodes") = 64,
      "relative error of the quadrature interpolation identity");

  m.def(
      "verify",
      [](const std::string& level, int threads) {
        VerifyReport report = verify_suite(verify_level_from_string(level), threads);
        return py::make_tuple(report.all_passed(), report.render());
      },
      py::arg("level") = "fast", py::arg("threads") = 1,
      "run the named invariant suite, returning (all_passed, report_text)");

  m.def(
      "run_config",
      [](const std::string& config_text, const std::string& output_root, int threads) {
        ExperimentResult r = run_experiment(Config::parse(config_text), output_root, threads);
        py::dict d;
        d["output_directory"] = r.output_directory;
        d["written"] = r.written;
        d["h"] = r.zeta.h;
        d["zeta_prime_at_zero"] = r.zeta.zeta_prime_at_zero;
        d["relative_determinant"] = r.zeta.relative_determinant;
        return d;
      },
      py::arg("config_text"), py::arg("output_root") = "", py::arg("threads") = 1,
      "full pipeline from config text to written artifacts");
}
