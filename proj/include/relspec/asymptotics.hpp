#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "relspec/heat.hpp"
#include "relspec/perturbation.hpp"

namespace relspec {

enum class ExponentStep { automatic, integer, half };

std::string to_string(ExponentStep step);
ExponentStep exponent_step_from_string(const std::string& name);

// Truncated short-time expansion of a relative heat trace:
//   value(t) ~ sum_j coefficients[j] * t^exponents[j]
// with exponents -n/2, -n/2 + step, ... The automatic step is a half step for
// odd n and a whole step for even n.
struct AsymptoticExpansion {
  int n_dim = 0;
  double step = 1.0;
  std::vector<double> exponents;
  std::vector<double> coefficients;
  std::vector<double> stderrs;  // least-squares standard errors
  double t_min = 0.0;
  double t_max = 0.0;
  double residual_rms = 0.0;       // of (value - partial sum) / t^(last exponent)
  double condition_number = 0.0;   // of the weighted design matrix
  bool ill_conditioned = false;    // condition_number > 1e12

  double partial_sum(double t) const;
};

// Weighted least squares over the grid points falling inside [t_min, t_max],
// weights t^(n/2). terms = number of coefficients (L + 1).
AsymptoticExpansion fit_expansion(const HeatTraceSeries& series, int n_dim, int terms,
                                  double t_min, double t_max,
                                  ExponentStep step = ExponentStep::automatic);

// Site-resolved version fitted against the per-site heat kernel diagonal
// differences of a pair, sharing one design matrix across sites.
struct SiteCoefficientReport {
  std::vector<double> exponents;
  Eigen::MatrixXd per_site;       // (site, order) fitted coefficients
  std::vector<double> l1_per_order;
};

SiteCoefficientReport coefficient_difference_report(const PerturbationPair& pair,
                                                    const std::vector<double>& t_grid, int n_dim,
                                                    int terms, double t_min, double t_max,
                                                    ExponentStep step = ExponentStep::automatic);

}  // namespace relspec
