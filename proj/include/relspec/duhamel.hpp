#pragma once

#include <Eigen/Dense>
#include <vector>

#include "relspec/graded.hpp"
#include "relspec/perturbation.hpp"
#include "relspec/quadrature.hpp"

namespace relspec {

// Quadrature approximation of the interpolation identity
//   exp(-t A) - exp(-t A') = integral over (0, t) of exp(-s A) (A' - A) exp(-(t-s) A') ds
// evaluated in the shared eigenbases, nodes summed in ascending order.
Eigen::MatrixXd duhamel_difference(const PerturbationPair& pair, double t,
                                   const QuadratureRule& rule);

// Same difference when base and perturbed operators are self adjoint with
// respect to different diagonal weights. The perturbed entries are first
// brought into the base inner product (congruence by the inverse square root
// of the weight change), and the integrand splits into the raw operator
// change plus the inner-product correction term. Matches the direct
// difference against the symmetrized perturbed operator.
Eigen::MatrixXd duhamel_difference_metric(const PerturbationPair& pair, double t,
                                          const QuadratureRule& rule);

// The symmetrized perturbed operator used by duhamel_difference_metric.
Eigen::MatrixXd symmetrized_perturbed(const PerturbationPair& pair);

// Sum of singular values.
double trace_norm(const Eigen::MatrixXd& m);

struct BoundScan {
  std::vector<double> t;
  std::vector<double> norms;  // trace norms of the direct difference
  double max_norm = 0.0;
  double argmax_t = 0.0;
};

// Trace norm of exp(-t A) - exp(-t A') over log-spaced samples of [a0, a1].
BoundScan uniform_bound_scan(const PerturbationPair& pair, double a0, double a1, int samples);

// D exp(-t D^2) - D' exp(-t D'^2) for graded operators with identical grading.
Eigen::MatrixXd dirac_level_difference(const GradedOperator& a, const GradedOperator& b, double t);

}  // namespace relspec
