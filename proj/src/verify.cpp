#include "relspec/verify.hpp"

#include <cmath>
#include <complex>

#include "relspec/config.hpp"
#include "relspec/duhamel.hpp"
#include "relspec/errors.hpp"
#include "relspec/models.hpp"
#include "relspec/textio.hpp"
#include "relspec/zeta.hpp"

namespace relspec {
namespace {

struct Suite {
  VerifyReport report;
  int threads = 1;

  // passes when observed <= bound
  void check_le(const std::string& module, const std::string& name, double observed,
                double bound) {
    report.checks.push_back({module, name, observed <= bound, observed, bound});
  }
  // passes when observed is true; bound column carries the expectation 1
  void check_true(const std::string& module, const std::string& name, bool observed) {
    report.checks.push_back({module, name, observed, observed ? 1.0 : 0.0, 1.0});
  }
};

ModelSpec spd_spec(int n, std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::random_spd;
  spec.label = "verify_spd";
  spec.n = n;
  spec.seed = seed;
  spec.support_lo = 0;
  spec.support_hi = std::max(1, n / 4);
  spec.eta_scale = 0.2;
  return spec;
}

ModelSpec schrodinger_spec(int n, double length) {
  ModelSpec spec;
  spec.kind = ModelKind::schrodinger_1d;
  spec.label = "verify_schrodinger";
  spec.n = n;
  spec.dx = length / (n + 1);
  spec.support_lo = 0;
  spec.support_hi = n - 1;
  spec.potential_base.assign(n, 0.0);
  spec.potential_perturbed.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * spec.dx;
    spec.potential_perturbed[i] = std::exp(-8.0 * (x - 0.5 * length) * (x - 0.5 * length));
  }
  return spec;
}

HodgeComplexSpec weighted_triangle() {
  HodgeComplexSpec c;
  c.simplices = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}};
  c.weights_base = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0}};
  c.weights_perturbed = {{1.3, 0.8, 1.1}, {0.9, 1.2, 1.4}, {0.7}};
  return c;
}

double dense_log_torsion(const HodgeComplexSpec& complex) {
  auto tower = build_hodge_tower(complex);
  double acc = 0.0;
  for (std::size_t q = 0; q < tower.size(); ++q) {
    double logdet_base = 0.0, logdet_pert = 0.0;
    const double thr_b = tower[q].base().kernel_threshold();
    const double thr_p = tower[q].perturbed().kernel_threshold();
    for (double ev : tower[q].base().spectrum().eigenvalues)
      if (std::abs(ev) > thr_b) logdet_base += std::log(ev);
    for (double ev : tower[q].perturbed().spectrum().eigenvalues)
      if (std::abs(ev) > thr_p) logdet_pert += std::log(ev);
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    acc += sign * (logdet_pert - logdet_base);
  }
  return 0.5 * acc;
}

void operator_checks(Suite& s) {
  bool rejected = false;
  try {
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 2.0, 0.0, 1.0;
    OperatorHandle bad(m, "asym");
  } catch (const validation_error&) {
    rejected = true;
  }
  s.check_true("operator_core", "asymmetric_rejected", rejected);

  ModelSpec path;
  path.kind = ModelKind::path_graph;
  path.label = "verify_path";
  path.n = 12;
  PerturbationPair pair = build_model(path);
  s.check_true("operator_core", "path_graph_kernel_dim_one",
               pair.base().kernel_dimension() == 1);

  HodgeComplexSpec hollow;
  hollow.simplices = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}};
  hollow.weights_base = {{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
  hollow.weights_perturbed = {{2.0, 1.0, 1.5}, {1.0, 0.5, 1.0}};
  auto tower = build_hodge_tower(hollow);
  const bool betti_ok = tower[0].base().kernel_dimension() == 1 &&
                        tower[1].base().kernel_dimension() == 1 &&
                        tower[0].perturbed().kernel_dimension() == 1 &&
                        tower[1].perturbed().kernel_dimension() == 1;
  s.check_true("operator_core", "hollow_triangle_betti_weight_independent", betti_ok);
}

void quadrature_checks(Suite& s) {
  // reference rule straight from the recurrence, no construction hooks involved
  std::vector<double> x, w;
  gauss_legendre_reference(32, &x, &w);
  double sum = 0.0;
  for (double wi : w) sum += wi;
  s.check_le("quadrature", "reference_weights_sum", std::abs(sum - 2.0), 1e-12);
}

void duhamel_checks(Suite& s, bool full) {
  PerturbationPair pair = build_model(spd_spec(8, 3));
  const double t = 1.0;
  const Eigen::MatrixXd exact =
      heat_kernel(pair.base(), t).entries - heat_kernel(pair.perturbed(), t).entries;
  const double scale = std::max(exact.norm(), 1e-30);
  const QuadratureRule rule = QuadratureRule::make(QuadratureKind::gauss_legendre, 64, t);
  const double residual = (duhamel_difference(pair, t, rule) - exact).norm() / scale;
  s.check_le("duhamel", "residual_small", residual, 1e-8);

  if (full) {
    const QuadratureRule r8 = QuadratureRule::make(QuadratureKind::gauss_legendre, 8, t);
    const QuadratureRule r16 = QuadratureRule::make(QuadratureKind::gauss_legendre, 16, t);
    const double res8 = (duhamel_difference(pair, t, r8) - exact).norm() / scale;
    const double res16 = (duhamel_difference(pair, t, r16) - exact).norm() / scale;
    const bool improved = res16 <= res8 / 10.0 || res16 <= 1e-13;
    s.check_true("duhamel", "node_doubling_converges", improved);
  }

  BoundScan scan = uniform_bound_scan(pair, 0.1, 10.0, 25);
  bool finite = true;
  for (double v : scan.norms) finite = finite && std::isfinite(v);
  s.check_true("duhamel", "bound_scan_finite", finite);
}

void heat_checks(Suite& s, bool full) {
  PerturbationPair pair = build_model(spd_spec(40, 11));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(40);
  v(0) = 1.0;
  v(17) = -0.5;
  const Eigen::VectorXd dense = heat_apply(pair.base(), 0.7, v, ApplyMode::dense);
  const Eigen::VectorXd krylov = heat_apply(pair.base(), 0.7, v, ApplyMode::lanczos);
  s.check_le("heat_engine", "dense_krylov_agree", (dense - krylov).norm() / dense.norm(), 1e-8);

  StochasticOptions opts;
  opts.probes = 256;
  opts.seed = 5;
  const std::vector<double> grid = {1.0};
  HeatTraceSeries exact = relative_heat_trace(pair, grid, TraceMethod::dense_spectral, {},
                                              s.threads);
  HeatTraceSeries noisy = relative_heat_trace(pair, grid, TraceMethod::stochastic, opts,
                                              s.threads);
  const double err = std::abs(noisy.values[0] - exact.values[0]);
  s.check_le("heat_engine", "stochastic_within_four_sigma", err,
             4.0 * noisy.error_estimates[0] + 1e-10);

  if (full) {
    StochasticOptions big = opts;
    big.probes = opts.probes * 4;
    HeatTraceSeries fine = relative_heat_trace(pair, grid, TraceMethod::stochastic, big,
                                               s.threads);
    const double ratio = fine.error_estimates[0] / noisy.error_estimates[0];
    s.check_true("heat_engine", "stderr_halves_with_4x_probes", ratio > 0.35 && ratio < 0.65);

    PerturbationPair wide = build_model(schrodinger_spec(200, 2.0));
    HeatTraceSeries a = relative_heat_trace(wide, {0.5}, TraceMethod::dense_spectral, {},
                                            s.threads);
    StochasticOptions sw;
    sw.probes = 200;
    sw.seed = 9;
    HeatTraceSeries b = relative_heat_trace(wide, {0.5}, TraceMethod::stochastic, sw, s.threads);
    s.check_le("heat_engine", "dim200_stochastic_consistent",
               std::abs(a.values[0] - b.values[0]), 4.0 * b.error_estimates[0] + 1e-10);
  }
}

void asymptotics_checks(Suite& s) {
  // synthetic series with known coefficients, n = 1: exponents -1/2, 0, 1/2
  HeatTraceSeries series;
  const double c0 = 0.75, c1 = -0.2, c2 = 0.05;
  for (int i = 0; i < 30; ++i) {
    const double t = std::exp(std::log(1e-4) + (std::log(0.5) - std::log(1e-4)) * i / 29.0);
    series.t_grid.push_back(t);
    series.values.push_back(c0 / std::sqrt(t) + c1 + c2 * std::sqrt(t));
    series.error_estimates.push_back(0.0);
  }
  AsymptoticExpansion fit = fit_expansion(series, 1, 3, 1e-4, 0.5);
  const double worst = std::max({std::abs(fit.coefficients[0] - c0) / std::abs(c0),
                                 std::abs(fit.coefficients[1] - c1) / std::abs(c1),
                                 std::abs(fit.coefficients[2] - c2) / std::abs(c2)});
  s.check_le("asymptotics", "synthetic_recovery", worst, 1e-6);
}

ModelSpec diag_spec(std::vector<double> base, std::vector<double> pert) {
  ModelSpec spec;
  spec.kind = ModelKind::explicit_diag;
  spec.label = "verify_diag";
  spec.diag_base = std::move(base);
  spec.diag_perturbed = std::move(pert);
  return spec;
}

void zeta_checks(Suite& s) {
  {
    PerturbationPair pair = build_model(diag_spec({1.0, 2.0}, {1.0, 1.0}));
    ZetaPipelineOptions opt;
    opt.n_dim = 0;
    opt.terms = 3;
    ZetaResult z = zeta_pipeline(pair, opt);
    s.check_le("zeta_invariants", "frozen_pair_log2",
               std::abs(z.zeta_prime_at_zero + std::log(2.0)), 1e-6);
    s.check_le("zeta_invariants", "frozen_pair_det2", std::abs(z.relative_determinant - 2.0),
               2e-6);
  }
  {
    PerturbationPair pair = build_model(diag_spec({0.0, 1.0}, {1.0, 1.0}));
    ZetaPipelineOptions opt;
    opt.n_dim = 0;
    opt.terms = 3;
    opt.s_values = {{0.7, 0.0}};
    ZetaResult z = zeta_pipeline(pair, opt);
    s.check_le("zeta_invariants", "kernel_shift_constant_zeta",
               std::abs(z.zeta_values[0].real() + 1.0), 1e-8);
    s.check_le("zeta_invariants", "kernel_shift_flat_at_zero", std::abs(z.zeta_prime_at_zero),
               1e-6);
  }
  {
    PerturbationPair pair = build_model(spd_spec(10, 21));
    HeatTraceSeries series = relative_heat_trace(pair, default_t_grid(),
                                                 TraceMethod::dense_spectral, {}, s.threads);
    AsymptoticExpansion fit = fit_expansion(series, 2, 4, 1e-3, 1e-1);
    const double z1 = zeta_prime_at_zero(pair, fit, series, 1.0);
    const double z2 = zeta_prime_at_zero(pair, fit, series, 0.5);
    s.check_le("zeta_invariants", "split_point_invariance", std::abs(z1 - z2), 1e-6);
  }
  {
    // expansion with a genuine half-order term must guard s = 1/2
    AsymptoticExpansion fake;
    fake.n_dim = 1;
    fake.step = 1.0;
    fake.exponents = {-0.5, 0.5};
    fake.coefficients = {0.3, -0.1};
    fake.stderrs = {0.0, 0.0};
    fake.t_min = 1e-3;
    fake.t_max = 1e-1;
    PerturbationPair pair = build_model(diag_spec({1.0, 2.0}, {1.0, 1.0}));
    bool raised = false;
    try {
      zeta1(pair, {0.5, 0.0}, fake, 1.0);
    } catch (const pole_error& e) {
      raised = std::abs(e.location() - 0.5) < 1e-12;
    }
    s.check_true("zeta_invariants", "pole_guard_at_half", raised);
  }
}

void index_checks(Suite& s) {
  ModelSpec spec;
  spec.kind = ModelKind::graded_block;
  spec.label = "verify_graded";
  spec.n = 9;
  spec.seed = 4;
  spec.eta_scale = 0.15;
  auto [da, db] = build_graded_pair(spec);
  RelativeIndexResult idx = relative_index(da, db, {0.1, 1.0, 10.0});
  // rank-nullity: each index is dim(+) - dim(-), so the difference vanishes
  s.check_le("zeta_invariants", "relative_index_integer",
             std::abs(idx.mean - static_cast<double>(idx.nearest_integer)), 1e-9);
  s.check_le("zeta_invariants", "relative_index_t_independent", idx.max_deviation, 1e-9);
}

void torsion_checks(Suite& s) {
  const HodgeComplexSpec complex = weighted_triangle();
  auto tower = build_hodge_tower(complex);
  ZetaPipelineOptions opt;
  opt.n_dim = 0;
  opt.terms = 3;
  TorsionResult torsion = relative_torsion(tower, TorsionConvention::unit_weighted, opt);
  s.check_le("zeta_invariants", "torsion_matches_dense_logdet",
             std::abs(torsion.log_torsion - dense_log_torsion(complex)), 1e-6);

  double worst = 0.0;
  const int chi = complex.euler_characteristic();
  for (double t : {0.2, 0.7, 1.0, 3.0, 9.0}) {
    double alternating = 0.0;
    for (std::size_t q = 0; q < tower.size(); ++q) {
      double tr = 0.0;
      for (double ev : tower[q].base().spectrum().eigenvalues) tr += std::exp(-t * ev);
      alternating += ((q % 2 == 0) ? 1.0 : -1.0) * tr;
    }
    worst = std::max(worst, std::abs(alternating - chi));
  }
  s.check_le("heat_engine", "mckean_singer_euler", worst, 1e-8);
}

void io_checks(Suite& s) {
  Config config = Config::parse(
      "[model]\nkind = explicit_diag\ndiag_base = 1 2\ndiag_perturbed = 1 1\n"
      "[zeta]\ns_list = 2\n");
  const std::string once = config.serialize();
  const std::string twice = Config::parse(once).serialize();
  s.check_true("experiment_cli", "config_roundtrip_fixed_point", once == twice);

  Record record;
  record.set_double("x", 0.1 + 0.2);
  record.set_double_list("xs", {1e-300, -3.25, 7.0});
  Record back = Record::parse(record.serialize());
  const bool same = back.get_double("x") == 0.1 + 0.2 &&
                    back.get_double_list("xs") == std::vector<double>{1e-300, -3.25, 7.0};
  s.check_true("experiment_cli", "record_roundtrip_lossless", same);
}

}  // namespace

VerifyLevel verify_level_from_string(const std::string& name) {
  if (name == "fast") return VerifyLevel::fast;
  if (name == "full") return VerifyLevel::full;
  throw validation_error("unknown verify level: " + name);
}

bool VerifyReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string VerifyReport::render() const {
  std::string out = "verify level=";
  out += level == VerifyLevel::fast ? "fast" : "full";
  out += '\n';
  int failed = 0;
  for (const auto& c : checks) {
    out += c.passed ? "ok   " : "FAIL ";
    out += c.module + "." + c.name;
    out += " observed=" + format_double(c.observed);
    out += " bound=" + format_double(c.bound);
    out += '\n';
    if (!c.passed) ++failed;
  }
  out += "checks=" + std::to_string(checks.size()) + " failed=" + std::to_string(failed) + "\n";
  return out;
}

VerifyReport verify_suite(VerifyLevel level, int threads) {
  Suite s;
  s.report.level = level;
  s.threads = threads;
  const bool full = level == VerifyLevel::full;
  operator_checks(s);
  quadrature_checks(s);
  duhamel_checks(s, full);
  heat_checks(s, full);
  asymptotics_checks(s);
  zeta_checks(s);
  index_checks(s);
  torsion_checks(s);
  io_checks(s);
  return s.report;
}

}  // namespace relspec
