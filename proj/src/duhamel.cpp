#include "relspec/duhamel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "relspec/errors.hpp"

namespace relspec {
namespace {

// Core quadrature sum between two spectral frames. eta sits between
// exp(-s A) on the left and exp(-(t-s) A') on the right.
Eigen::MatrixXd duhamel_core(const SpectralCache& left, const SpectralCache& right,
                             const Eigen::MatrixXd& eta, double t, const QuadratureRule& rule) {
  const Eigen::MatrixXd p = left.eigenvectors.transpose() * eta * right.eigenvectors;
  const int n = static_cast<int>(left.eigenvalues.size());
  const int m = static_cast<int>(right.eigenvalues.size());
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(n, m);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double s = rule.nodes[j];
    const double w = rule.weights[j];
    const Eigen::ArrayXd el = (-s * left.eigenvalues.array()).exp();
    const Eigen::ArrayXd er = (-(t - s) * right.eigenvalues.array()).exp();
    kernel.noalias() += w * (el.matrix() * er.matrix().transpose());
  }
  return left.eigenvectors * p.cwiseProduct(kernel) * right.eigenvectors.transpose();
}

void check_rule(const QuadratureRule& rule, double t) {
  if (!(t > 0.0)) throw validation_error("time must be positive");
  if (std::abs(rule.t - t) > 1e-12 * t)
    throw validation_error("quadrature rule was built for a different interval");
}

}  // namespace

Eigen::MatrixXd duhamel_difference(const PerturbationPair& pair, double t,
                                   const QuadratureRule& rule) {
  check_rule(rule, t);
  return duhamel_core(pair.base().spectrum(), pair.perturbed().spectrum(), pair.eta(), t, rule);
}

Eigen::MatrixXd symmetrized_perturbed(const PerturbationPair& pair) {
  if (!pair.weight_change())
    throw validation_error("pair carries no weight change");
  const Eigen::ArrayXd rsqrt = pair.weight_change()->array().rsqrt();
  Eigen::MatrixXd sym = rsqrt.matrix().asDiagonal() * pair.perturbed().entries() *
                        rsqrt.matrix().asDiagonal();
  return 0.5 * (sym + sym.transpose().eval());
}

Eigen::MatrixXd duhamel_difference_metric(const PerturbationPair& pair, double t,
                                          const QuadratureRule& rule) {
  check_rule(rule, t);
  Eigen::MatrixXd sym = symmetrized_perturbed(pair);
  OperatorHandle tilted(sym, pair.perturbed().label() + ":base-frame");
  const auto& left = pair.base().spectrum();
  const auto& right = tilted.spectrum();
  // raw operator change at fixed inner product
  Eigen::MatrixXd term1 = duhamel_core(left, right, pair.eta(), t, rule);
  // correction from the density between the two inner products
  Eigen::MatrixXd eta2 = sym - pair.perturbed().entries();
  Eigen::MatrixXd term2 = duhamel_core(left, right, eta2, t, rule);
  return term1 + term2;
}

double trace_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) throw validation_error("trace norm of an empty matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

BoundScan uniform_bound_scan(const PerturbationPair& pair, double a0, double a1, int samples) {
  if (!(a0 > 0.0) || !(a1 > a0)) throw validation_error("scan window must satisfy 0 < a0 < a1");
  if (samples < 2) throw validation_error("scan needs at least two samples");
  BoundScan scan;
  const double la = std::log(a0), lb = std::log(a1);
  const auto& ea = pair.base().spectrum();
  const auto& eb = pair.perturbed().spectrum();
  for (int i = 0; i < samples; ++i) {
    const double t = std::exp(la + (lb - la) * i / (samples - 1));
    const Eigen::MatrixXd diff =
        ea.eigenvectors * (-t * ea.eigenvalues.array()).exp().matrix().asDiagonal() *
            ea.eigenvectors.transpose() -
        eb.eigenvectors * (-t * eb.eigenvalues.array()).exp().matrix().asDiagonal() *
            eb.eigenvectors.transpose();
    // symmetric difference: singular values are absolute eigenvalues
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    const double norm = es.eigenvalues().array().abs().sum();
    if (!std::isfinite(norm)) throw numerical_error("trace norm scan produced a non-finite value");
    scan.t.push_back(t);
    scan.norms.push_back(norm);
    if (scan.norms.size() == 1 || norm > scan.max_norm) {
      scan.max_norm = norm;
      scan.argmax_t = t;
    }
  }
  return scan;
}

Eigen::MatrixXd dirac_level_difference(const GradedOperator& a, const GradedOperator& b, double t) {
  if (!(t > 0.0)) throw validation_error("time must be positive");
  if (!a.grading_matches(b))
    throw validation_error("dirac level difference needs a shared grading");
  auto level = [&](const GradedOperator& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.dirac());
    if (es.info() != Eigen::Success) throw numerical_error("eigendecomposition failed");
    const Eigen::ArrayXd lam = es.eigenvalues().array();
    const Eigen::ArrayXd f = lam * (-t * lam.square()).exp();
    return Eigen::MatrixXd(es.eigenvectors() * f.matrix().asDiagonal() *
                           es.eigenvectors().transpose());
  };
  return level(a) - level(b);
}

}  // namespace relspec
