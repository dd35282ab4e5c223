#include "relspec/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "relspec/errors.hpp"
#include "relspec/quadrature.hpp"
#include "relspec/special.hpp"

namespace relspec {
namespace {

using cd = std::complex<double>;

constexpr double kPoleGuardDistance = 1e-10;
constexpr double kPlateauTol = 1e-9;

const std::vector<double>& panel_nodes() {
  static const std::vector<double> nodes = [] {
    std::vector<double> x, w;
    gauss_legendre_reference(24, &x, &w);
    return x;
  }();
  return nodes;
}

const std::vector<double>& panel_weights() {
  static const std::vector<double> weights = [] {
    std::vector<double> x, w;
    gauss_legendre_reference(24, &x, &w);
    return w;
  }();
  return weights;
}

// One Gauss panel of integral t^(s-1) g(t) dt written in u = log t.
cd log_panel(cd s, double u_lo, double u_hi, const std::function<double(double)>& g) {
  const auto& xs = panel_nodes();
  const auto& ws = panel_weights();
  const double mid = 0.5 * (u_lo + u_hi), half = 0.5 * (u_hi - u_lo);
  cd acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = mid + half * xs[i];
    acc += ws[i] * std::exp(s * u) * g(std::exp(u));
  }
  return half * acc;
}

// integral over [a, b] of t^(s-1) g(t) dt, half-decade panels
cd integrate_log(cd s, double a, double b, const std::function<double(double)>& g) {
  if (!(b > a)) return 0.0;
  const double ua = std::log(a), ub = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((ub - ua) / 1.15)));
  cd acc = 0.0;
  for (int k = 0; k < panels; ++k)
    acc += log_panel(s, ua + (ub - ua) * k / panels, ua + (ub - ua) * (k + 1) / panels, g);
  return acc;
}

// integral over (0, b] of t^(s-1) g(t) dt for g vanishing linearly at zero,
// descending one decade per panel until the contributions are negligible
cd integrate_to_zero(cd s, double b, const std::function<double(double)>& g) {
  if (s.real() <= -1.0) throw validation_error("integral domain requires Re(s) > -1");
  cd acc = 0.0;
  double hi = std::log(b);
  int quiet = 0;
  const double dec = std::log(10.0);
  for (int k = 0; k < 3200; ++k) {
    const cd piece = log_panel(s, hi - dec, hi, g);
    acc += piece;
    hi -= dec;
    if (std::abs(piece) <= 1e-18 * (std::abs(acc) + 1e-300)) {
      if (++quiet >= 3) return acc;
    } else {
      quiet = 0;
    }
    if (hi < std::log(1e-280)) return acc;
  }
  throw numerical_error("small-time integral did not converge; s too close to the domain edge");
}

// (exp(eps*ub) - exp(eps*ua)) / eps, stable through the removable point eps = 0
cd power_diff(cd eps, double ua, double ub) {
  const double scale = std::max(std::abs(ua), std::abs(ub));
  if (std::abs(eps) * scale > 0.3) return (std::exp(eps * ub) - std::exp(eps * ua)) / eps;
  cd term_b = ub, term_a = ua;  // (ln^k)/k! terms, k = 1
  cd acc = term_b - term_a;
  cd eps_pow = 1.0;
  for (int k = 2; k <= 30; ++k) {
    term_b *= ub / k;
    term_a *= ua / k;
    eps_pow *= eps;
    const cd add = eps_pow * (term_b - term_a);
    acc += add;
    if (std::abs(add) <= 1e-18 * (std::abs(acc) + 1e-300)) break;
  }
  return acc;
}

void check_domain(cd s) {
  if (!(s.real() > -1.0))
    throw validation_error("zeta evaluation requires Re(s) > -1");
}

struct TailIntegral {
  cd value = 0.0;
  double truncation_bound = 0.0;
};

// integral over [T, infinity) of t^(s-1) (f(t) - h) dt for an exponentially
// decaying integrand with rate close to gap
TailIntegral integrate_decaying(cd s, double T, double gap,
                                const std::function<double(double)>& g) {
  TailIntegral out;
  if (!(gap > 0.0)) {
    // no nonzero spectrum anywhere: the integrand must already be zero
    if (std::abs(g(2.0 * T)) > 1e-12)
      throw numerical_error("large-time tail does not decay");
    return out;
  }
  const auto& xs = panel_nodes();
  const auto& ws = panel_weights();
  const double width = std::max(T, 0.5 / gap);
  double lo = T;
  int quiet = 0;
  for (int k = 0; k < 2000; ++k) {
    const double mid = lo + 0.5 * width, half = 0.5 * width;
    cd piece = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double t = mid + half * xs[i];
      piece += ws[i] * std::exp((s - 1.0) * std::log(t)) * g(t);
    }
    piece *= half;
    out.value += piece;
    lo += width;
    if (std::abs(piece) <= 1e-18 * (std::abs(out.value) + 1e-300)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
  }
  const double rest = std::abs(g(lo));
  out.truncation_bound = rest * std::exp((s.real() - 1.0) * std::log(lo)) / gap;
  if (out.truncation_bound > 1e-10)
    throw numerical_error("large-time tail not converged within the panel budget");
  return out;
}

double series_largest_time(const HeatTraceSeries& series) {
  if (series.t_grid.empty()) throw validation_error("series is empty");
  return *std::max_element(series.t_grid.begin(), series.t_grid.end());
}

double plateau_gap_at_largest_time(const PerturbationPair& pair, const HeatTraceSeries& series) {
  const double tmax = series_largest_time(series);
  auto it = std::max_element(series.t_grid.begin(), series.t_grid.end());
  const double value = series.values[std::distance(series.t_grid.begin(), it)];
  return std::abs(value - static_cast<double>(pair.kernel_dim_diff()));
}

}  // namespace

std::vector<std::pair<double, double>> expansion_poles(const AsymptoticExpansion& expansion) {
  std::vector<std::pair<double, double>> poles;
  double scale = 0.0;
  for (double a : expansion.coefficients) scale = std::max(scale, std::abs(a));
  const double floor = 1e-8 * (1.0 + scale);
  for (std::size_t j = 0; j < expansion.exponents.size(); ++j) {
    const double loc = -expansion.exponents[j];
    // nonpositive integer locations are cancelled by 1/Gamma
    const double nearest = std::round(loc);
    if (nearest <= 0.0 && std::abs(loc - nearest) < 1e-12) continue;
    if (loc <= -1.0) continue;  // outside the continued domain
    if (std::abs(expansion.coefficients[j]) <= floor) continue;
    poles.emplace_back(loc, expansion.coefficients[j] / gamma_real(loc));
  }
  std::sort(poles.begin(), poles.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  return poles;
}

std::complex<double> zeta1(const PerturbationPair& pair, std::complex<double> s,
                           const AsymptoticExpansion& expansion, double split_point) {
  check_domain(s);
  if (!(split_point > 0.0)) throw validation_error("split point must be positive");
  if (expansion.exponents.empty()) throw validation_error("expansion has no terms");
  for (const auto& [loc, residue] : expansion_poles(expansion))
    if (std::abs(s - cd(loc, 0.0)) < kPoleGuardDistance)
      throw pole_error("zeta evaluation at a pole of the continued small-time part", loc,
                       residue);

  const double w0 = std::min(expansion.t_min, split_point);
  auto f = [&](double t) { return pair.relative_trace(t); };

  cd bracket = 0.0;
  // basis terms in closed form over (w0, split]
  const double uw = std::log(w0), ut = std::log(split_point);
  for (std::size_t j = 0; j < expansion.exponents.size(); ++j)
    bracket += expansion.coefficients[j] * power_diff(s + expansion.exponents[j], uw, ut);
  // below the fit window the series itself is integrated
  bracket += integrate_to_zero(s, w0, f);
  // remainder between window edge and split point
  if (w0 < split_point)
    bracket += integrate_log(s, w0, split_point,
                             [&](double t) { return f(t) - expansion.partial_sum(t); });
  return recip_gamma(s) * bracket;
}

std::complex<double> zeta2(const PerturbationPair& pair, std::complex<double> s,
                           const HeatTraceSeries& series, double split_point) {
  check_domain(s);
  if (!(split_point > 0.0)) throw validation_error("split point must be positive");
  const double tmax = series_largest_time(series);
  if (tmax < split_point)
    throw validation_error("series does not reach the split point");
  if (plateau_gap_at_largest_time(pair, series) > kPlateauTol)
    throw numerical_error("series has not reached its large-time plateau");

  const double h = static_cast<double>(pair.kernel_dim_diff());
  cd value = -h * std::exp(s * std::log(split_point)) * recip_gamma(s + 1.0);
  const double gap = pair.spectral_gap();
  TailIntegral tail = integrate_decaying(
      s, split_point, gap, [&](double t) { return pair.relative_trace_tail(t); });
  return value + recip_gamma(s) * tail.value;
}

std::complex<double> zeta_total(const PerturbationPair& pair, std::complex<double> s,
                                const AsymptoticExpansion& expansion,
                                const HeatTraceSeries& series, double split_point) {
  return zeta1(pair, s, expansion, split_point) + zeta2(pair, s, series, split_point);
}

double zeta_prime_at_zero(const PerturbationPair& pair, const AsymptoticExpansion& expansion,
                          const HeatTraceSeries& series, double split_point, double fd_step) {
  if (!(fd_step > 0.0) || fd_step > 1e-2)
    throw validation_error("finite difference step out of range");
  auto z = [&](double s) {
    return zeta_total(pair, cd(s, 0.0), expansion, series, split_point).real();
  };
  const double d = fd_step;
  // fourth-order five-point rule; the Richardson combination of the two
  // central differences at d and 2d
  return (8.0 * (z(d) - z(-d)) - (z(2.0 * d) - z(-2.0 * d))) / (12.0 * d);
}

double relative_determinant(const PerturbationPair& pair, const AsymptoticExpansion& expansion,
                            const HeatTraceSeries& series, double split_point, double fd_step) {
  return std::exp(-zeta_prime_at_zero(pair, expansion, series, split_point, fd_step));
}

RelativeIndexResult relative_index(const GradedOperator& a, const GradedOperator& b,
                                   const std::vector<double>& t_grid) {
  if (!a.grading_matches(b))
    throw validation_error("relative index needs operators with one shared grading");
  if (t_grid.size() < 3)
    throw validation_error("relative index needs at least 3 grid points");
  RelativeIndexResult result;
  result.t_grid = t_grid;
  const OperatorHandle sqa = a.square(), sqb = b.square();
  auto str = [&](const OperatorHandle& sq, const Eigen::VectorXd& tau, double t) {
    const auto& sc = sq.spectrum();
    const Eigen::ArrayXd decay = (-t * sc.eigenvalues.array()).exp();
    double acc = 0.0;
    for (int k = 0; k < sq.dim(); ++k)
      acc += decay(k) * sc.eigenvectors.col(k).dot(tau.asDiagonal() * sc.eigenvectors.col(k));
    return acc;
  };
  for (double t : t_grid) {
    if (!(t > 0.0)) throw validation_error("time must be positive");
    result.values.push_back(str(sqa, a.grading(), t) - str(sqb, b.grading(), t));
  }
  result.mean = 0.0;
  for (double v : result.values) result.mean += v;
  result.mean /= static_cast<double>(result.values.size());
  result.max_deviation = 0.0;
  for (double v : result.values)
    result.max_deviation = std::max(result.max_deviation, std::abs(v - result.mean));
  result.nearest_integer = std::llround(result.mean);
  return result;
}

std::string to_string(TorsionConvention convention) {
  return convention == TorsionConvention::unit_weighted ? "unit_weighted" : "q_weighted";
}

TorsionConvention torsion_convention_from_string(const std::string& name) {
  if (name == "unit_weighted") return TorsionConvention::unit_weighted;
  if (name == "q_weighted") return TorsionConvention::q_weighted;
  throw validation_error("unknown torsion convention: " + name);
}

std::vector<double> default_t_grid() {
  std::vector<double> grid(40);
  const double la = std::log(1e-3), lb = std::log(1e2);
  for (int i = 0; i < 40; ++i) grid[i] = std::exp(la + (lb - la) * i / 39.0);
  return grid;
}

ZetaResult zeta_pipeline(const PerturbationPair& pair, const ZetaPipelineOptions& options) {
  ZetaResult result;
  result.split_point = options.split_point;
  result.h = pair.kernel_dim_diff();

  HeatTraceSeries series =
      relative_heat_trace(pair, options.t_grid.empty() ? default_t_grid() : options.t_grid,
                          TraceMethod::dense_spectral, {}, options.threads);
  AsymptoticExpansion expansion =
      fit_expansion(series, options.n_dim, options.terms, options.window_min, options.window_max,
                    options.step);
  result.poles = expansion_poles(expansion);
  result.zeta_prime_at_zero = zeta_prime_at_zero(pair, expansion, series, options.split_point,
                                                 options.fd_step);
  result.relative_determinant = std::exp(-result.zeta_prime_at_zero);
  for (cd s : options.s_values) {
    result.s_values.push_back(s);
    result.zeta_values.push_back(zeta_total(pair, s, expansion, series, options.split_point));
  }
  result.diagnostics.fit_residual = expansion.residual_rms;
  result.diagnostics.spectral_gap = pair.spectral_gap();
  result.diagnostics.tail_bound = plateau_gap_at_largest_time(pair, series);
  return result;
}

TorsionResult relative_torsion(const std::vector<PerturbationPair>& tower,
                               TorsionConvention convention,
                               const ZetaPipelineOptions& options) {
  if (tower.empty()) throw validation_error("torsion needs a nonempty tower");
  TorsionResult result;
  result.convention = convention;
  for (std::size_t q = 0; q < tower.size(); ++q) {
    const PerturbationPair& pair = tower[q];
    for (const OperatorHandle* op : {&pair.base(), &pair.perturbed()}) {
      const double lmax = op->lambda_max_abs();
      if (!(lmax > 0.0))
        throw numerical_error("torsion degenerate: a degree has no nonzero spectrum");
      const double gap = op->min_nonzero_eigenvalue();
      if (!(gap >= 1e-8 * lmax))
        throw numerical_error("torsion degenerate: nonzero spectrum reaches below the gap floor");
      // kernel count must be stable when the threshold doubles
      const auto& ev = op->spectrum().eigenvalues;
      const double thr = op->kernel_threshold();
      int k1 = 0, k2 = 0;
      for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) <= thr) ++k1;
        if (std::abs(ev(i)) <= 2.0 * thr) ++k2;
      }
      if (k1 != k2)
        throw numerical_error("torsion degenerate: kernel dimension unstable under threshold");
    }
    HeatTraceSeries series =
        relative_heat_trace(pair, options.t_grid.empty() ? default_t_grid() : options.t_grid,
                            TraceMethod::dense_spectral, {}, options.threads);
    AsymptoticExpansion expansion =
        fit_expansion(series, options.n_dim, options.terms, options.window_min,
                      options.window_max, options.step);
    const double zp = zeta_prime_at_zero(pair, expansion, series, options.split_point,
                                         options.fd_step);
    result.per_degree.emplace_back(static_cast<int>(q), zp);
  }
  double acc = 0.0;
  for (const auto& [q, zp] : result.per_degree) {
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    const double factor =
        convention == TorsionConvention::unit_weighted ? sign : sign * static_cast<double>(q);
    acc += factor * zp;
  }
  result.log_torsion = 0.5 * acc;
  return result;
}

}  // namespace relspec
