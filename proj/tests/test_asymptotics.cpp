#include <doctest.h>

#include <cmath>
#include <vector>

#include "relspec/asymptotics.hpp"
#include "relspec/errors.hpp"
#include "relspec/heat.hpp"
#include "relspec/models.hpp"

using namespace relspec;

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> t(count);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < count; ++i)
    t[i] = std::exp(la + (lb - la) * i / double(count - 1));
  return t;
}

HeatTraceSeries synthetic_series(const std::vector<double>& t_grid,
                                 const std::vector<double>& exponents,
                                 const std::vector<double>& coeffs) {
  HeatTraceSeries s;
  s.t_grid = t_grid;
  s.values.resize(t_grid.size());
  s.error_estimates.assign(t_grid.size(), 0.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < exponents.size(); ++j)
      v += coeffs[j] * std::pow(t_grid[i], exponents[j]);
    s.values[i] = v;
  }
  return s;
}

}  // namespace

TEST_CASE("three term half-integer model is recovered exactly") {
  auto grid = log_grid(1e-4, 1e-1, 60);
  HeatTraceSeries s = synthetic_series(grid, {-0.5, 0.0, 0.5}, {2.0, -3.0, 1.0});
  AsymptoticExpansion fit = fit_expansion(s, 1, 3, 1e-4, 1e-1);
  REQUIRE(fit.coefficients.size() == 3);
  CHECK(fit.exponents[0] == doctest::Approx(-0.5));
  CHECK(fit.exponents[1] == doctest::Approx(0.0));
  CHECK(fit.exponents[2] == doctest::Approx(0.5));
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fit.coefficients[1] == doctest::Approx(-3.0).epsilon(1e-8));
  CHECK(fit.coefficients[2] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fit.residual_rms <= 1e-8);
  CHECK_FALSE(fit.ill_conditioned);
}

TEST_CASE("identical operators fit to zero coefficients") {
  ModelSpec spec;
  spec.kind = ModelKind::path_graph;
  spec.n = 30;
  PerturbationPair pair(build_model(spec).base(), build_model(spec).base());
  HeatTraceSeries s = relative_heat_trace(pair, log_grid(1e-3, 1e-1, 40));
  AsymptoticExpansion fit = fit_expansion(s, 1, 4, 1e-3, 1e-1);
  for (double c : fit.coefficients) CHECK(std::abs(c) <= 1e-10);
}

TEST_CASE("step choices fix the exponent ladder") {
  auto grid = log_grid(1e-3, 1e-1, 40);
  HeatTraceSeries s = synthetic_series(grid, {-1.0, 0.0}, {1.0, 2.0});
  AsymptoticExpansion whole = fit_expansion(s, 2, 3, 1e-3, 1e-1, ExponentStep::integer);
  CHECK(whole.exponents[0] == doctest::Approx(-1.0));
  CHECK(whole.exponents[1] == doctest::Approx(0.0));
  CHECK(whole.exponents[2] == doctest::Approx(1.0));
  AsymptoticExpansion half = fit_expansion(s, 2, 3, 1e-3, 1e-1, ExponentStep::half);
  CHECK(half.exponents[1] == doctest::Approx(-0.5));
  // even dimension defaults to the whole step
  AsymptoticExpansion autofit = fit_expansion(s, 2, 3, 1e-3, 1e-1);
  CHECK(autofit.exponents[1] == doctest::Approx(0.0));
  CHECK(autofit.step == doctest::Approx(1.0));
}

TEST_CASE("fitting is stable under grid refinement") {
  auto coarse_fit = fit_expansion(
      synthetic_series(log_grid(1e-4, 1e-1, 50), {-0.5, 0.0, 0.5}, {1.5, 0.25, -2.0}), 1, 3,
      1e-4, 1e-1);
  auto fine_fit = fit_expansion(
      synthetic_series(log_grid(1e-4, 1e-1, 100), {-0.5, 0.0, 0.5}, {1.5, 0.25, -2.0}), 1, 3,
      1e-4, 1e-1);
  for (int j = 0; j < 3; ++j)
    CHECK(std::abs(coarse_fit.coefficients[j] - fine_fit.coefficients[j]) <= 1e-9);
}

TEST_CASE("condition number grows with the term count") {
  auto grid = log_grid(1e-3, 1e-1, 80);
  HeatTraceSeries s = synthetic_series(grid, {-0.5}, {1.0});
  double prev = 0.0;
  for (int terms = 2; terms <= 5; ++terms) {
    AsymptoticExpansion fit = fit_expansion(s, 1, terms, 1e-3, 1e-1);
    CHECK(fit.condition_number > prev);
    prev = fit.condition_number;
  }
}

TEST_CASE("fit validation rejects bad windows and starved grids") {
  auto grid = log_grid(1e-3, 1e-1, 40);
  HeatTraceSeries s = synthetic_series(grid, {0.0}, {1.0});
  CHECK_THROWS_AS(fit_expansion(s, 1, 5, 1.0, 10.0), validation_error);   // no samples inside
  CHECK_THROWS_AS(fit_expansion(s, 1, 0, 1e-3, 1e-1), validation_error);  // no terms
  CHECK_THROWS_AS(fit_expansion(s, -1, 3, 1e-3, 1e-1), validation_error);
  CHECK_THROWS_AS(fit_expansion(s, 1, 3, 1e-1, 1e-3), validation_error);  // inverted window
  // fewer interior samples than coefficients
  HeatTraceSeries tiny = synthetic_series(log_grid(1e-3, 1e-1, 3), {0.0}, {1.0});
  CHECK_THROWS_AS(fit_expansion(tiny, 1, 5, 1e-3, 1e-1), validation_error);
}

TEST_CASE("partial_sum evaluates the fitted model") {
  auto grid = log_grid(1e-4, 1e-1, 50);
  HeatTraceSeries s = synthetic_series(grid, {-0.5, 0.0}, {1.0, 2.0});
  AsymptoticExpansion fit = fit_expansion(s, 1, 2, 1e-4, 1e-1);
  const double t = 3e-3;
  CHECK(fit.partial_sum(t) ==
        doctest::Approx(1.0 / std::sqrt(t) + 2.0).epsilon(1e-9));
}

TEST_CASE("site report localizes a compactly supported perturbation") {
  ModelSpec spec;
  spec.kind = ModelKind::schrodinger_1d;
  spec.n = 200;
  spec.dx = 0.1;  // lattice diffusion t/dx^2 stays <= 1 over the fit window
  spec.support_lo = 40;
  spec.support_hi = 60;
  spec.potential_perturbed.assign(200, 0.0);
  for (int i = 40; i <= 60; ++i) spec.potential_perturbed[i] = 5.0;
  PerturbationPair pair = build_model(spec);

  auto grid = log_grid(1e-3, 1e-2, 30);
  SiteCoefficientReport report =
      coefficient_difference_report(pair, grid, 1, 3, 1e-3, 1e-2);
  REQUIRE(report.per_site.rows() == 200);
  REQUIRE(report.per_site.cols() == 3);
  double inside = 0.0, outside = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double lead = report.per_site.row(i).cwiseAbs().maxCoeff();
    if (i >= 40 && i <= 60) inside = std::max(inside, lead);
    if (i < 20 || i > 80) outside = std::max(outside, lead);
  }
  CHECK(inside > 1e-4);
  CHECK(outside <= 1e-8);
  CHECK(report.l1_per_order.size() == 3);
  CHECK(report.l1_per_order[2] > 0.0);
}

TEST_CASE("site report l1 mass shrinks for a nested support") {
  auto make = [](int lo, int hi) {
    ModelSpec spec;
    spec.kind = ModelKind::schrodinger_1d;
    spec.n = 120;
    spec.dx = 0.1;
    spec.support_lo = lo;
    spec.support_hi = hi;
    spec.potential_perturbed.assign(120, 0.0);
    for (int i = lo; i <= hi; ++i) spec.potential_perturbed[i] = 5.0;
    return build_model(spec);
  };
  auto grid = log_grid(1e-3, 1e-2, 25);
  SiteCoefficientReport wide = coefficient_difference_report(make(30, 70), grid, 1, 3, 1e-3, 1e-2);
  SiteCoefficientReport narrow =
      coefficient_difference_report(make(45, 55), grid, 1, 3, 1e-3, 1e-2);
  CHECK(narrow.l1_per_order[2] < wide.l1_per_order[2]);
}
