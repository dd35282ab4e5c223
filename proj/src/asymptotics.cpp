#include "relspec/asymptotics.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "relspec/errors.hpp"

namespace relspec {
namespace {

struct Design {
  std::vector<double> exponents;
  std::vector<int> picks;      // indices of grid points inside the window
  Eigen::MatrixXd x;           // weighted design
  Eigen::VectorXd row_weight;  // t^(n/2) per picked point
};

double resolve_step(ExponentStep step, int n_dim) {
  switch (step) {
    case ExponentStep::automatic: return (n_dim % 2 == 1) ? 0.5 : 1.0;
    case ExponentStep::integer: return 1.0;
    case ExponentStep::half: return 0.5;
  }
  throw validation_error("unknown exponent step");
}

Design build_design(const std::vector<double>& t_grid, int n_dim, int terms, double t_min,
                    double t_max, ExponentStep step) {
  // n_dim = 0 covers finite pairs whose ladder starts at t^0
  if (n_dim < 0) throw validation_error("expansion dimension must be nonnegative");
  if (terms < 1) throw validation_error("expansion needs at least one coefficient");
  if (!(t_min > 0.0) || !(t_max > t_min)) throw validation_error("bad fit window");
  Design d;
  const double h = resolve_step(step, n_dim);
  for (int j = 0; j < terms; ++j) d.exponents.push_back(-0.5 * n_dim + h * j);
  for (int i = 0; i < static_cast<int>(t_grid.size()); ++i)
    if (t_grid[i] >= t_min && t_grid[i] <= t_max) d.picks.push_back(i);
  if (static_cast<int>(d.picks.size()) < terms)
    throw validation_error("fit window holds fewer grid points than coefficients");
  const int m = static_cast<int>(d.picks.size());
  d.x.resize(m, terms);
  d.row_weight.resize(m);
  for (int r = 0; r < m; ++r) {
    const double t = t_grid[d.picks[r]];
    d.row_weight(r) = std::pow(t, 0.5 * n_dim);
    for (int j = 0; j < terms; ++j) d.x(r, j) = d.row_weight(r) * std::pow(t, d.exponents[j]);
  }
  return d;
}

}  // namespace

std::string to_string(ExponentStep step) {
  switch (step) {
    case ExponentStep::automatic: return "auto";
    case ExponentStep::integer: return "integer";
    case ExponentStep::half: return "half";
  }
  throw validation_error("unknown exponent step");
}

ExponentStep exponent_step_from_string(const std::string& name) {
  if (name == "auto") return ExponentStep::automatic;
  if (name == "integer") return ExponentStep::integer;
  if (name == "half") return ExponentStep::half;
  throw validation_error("unknown exponent step: " + name);
}

double AsymptoticExpansion::partial_sum(double t) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j)
    acc += coefficients[j] * std::pow(t, exponents[j]);
  return acc;
}

AsymptoticExpansion fit_expansion(const HeatTraceSeries& series, int n_dim, int terms,
                                  double t_min, double t_max, ExponentStep step) {
  Design d = build_design(series.t_grid, n_dim, terms, t_min, t_max, step);
  const int m = static_cast<int>(d.picks.size());
  Eigen::VectorXd rhs(m);
  for (int r = 0; r < m; ++r) rhs(r) = d.row_weight(r) * series.values[d.picks[r]];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  Eigen::VectorXd coef = svd.solve(rhs);

  AsymptoticExpansion exp;
  exp.n_dim = n_dim;
  exp.step = resolve_step(step, n_dim);
  exp.exponents = d.exponents;
  exp.coefficients.assign(coef.data(), coef.data() + coef.size());
  exp.t_min = t_min;
  exp.t_max = t_max;
  exp.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  exp.ill_conditioned = !(exp.condition_number <= 1e12);

  const double p_last = d.exponents.back();
  double ss = 0.0;
  Eigen::VectorXd resid(m);
  for (int r = 0; r < m; ++r) {
    const double t = series.t_grid[d.picks[r]];
    const double e = series.values[d.picks[r]] - exp.partial_sum(t);
    resid(r) = d.row_weight(r) * e;
    const double scaled = e / std::pow(t, p_last);
    ss += scaled * scaled;
  }
  exp.residual_rms = std::sqrt(ss / m);

  // standard errors from the weighted normal equations
  exp.stderrs.assign(terms, 0.0);
  if (m > terms) {
    const double sigma2 = resid.squaredNorm() / (m - terms);
    // (X^T X)^{-1} = V S^{-2} V^T
    for (int j = 0; j < terms; ++j) {
      double acc = 0.0;
      for (int k = 0; k < sv.size(); ++k) {
        if (sv(k) <= 0.0) continue;
        const double vj = svd.matrixV()(j, k);
        acc += vj * vj / (sv(k) * sv(k));
      }
      exp.stderrs[j] = std::sqrt(sigma2 * acc);
    }
  }
  return exp;
}

SiteCoefficientReport coefficient_difference_report(const PerturbationPair& pair,
                                                    const std::vector<double>& t_grid, int n_dim,
                                                    int terms, double t_min, double t_max,
                                                    ExponentStep step) {
  if (pair.dim() >= OperatorHandle::kDenseThreshold)
    throw capability_error("per-site report is only available below the dense threshold");
  Design d = build_design(t_grid, n_dim, terms, t_min, t_max, step);
  const int m = static_cast<int>(d.picks.size());
  const int n = pair.dim();

  // per-site diagonal differences across the picked grid points
  const auto& sa = pair.base().spectrum();
  const auto& sb = pair.perturbed().spectrum();
  const Eigen::MatrixXd ua2 = sa.eigenvectors.array().square();
  const Eigen::MatrixXd ub2 = sb.eigenvectors.array().square();
  Eigen::MatrixXd rhs(m, n);
  for (int r = 0; r < m; ++r) {
    const double t = t_grid[d.picks[r]];
    const Eigen::VectorXd da = ua2 * (-t * sa.eigenvalues.array()).exp().matrix();
    const Eigen::VectorXd db = ub2 * (-t * sb.eigenvalues.array()).exp().matrix();
    rhs.row(r) = d.row_weight(r) * (da - db).transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd coef = svd.solve(rhs);  // (order, site)

  SiteCoefficientReport report;
  report.exponents = d.exponents;
  report.per_site = coef.transpose();
  for (int j = 0; j < terms; ++j)
    report.l1_per_order.push_back(coef.row(j).array().abs().sum());
  return report;
}

}  // namespace relspec
