#include "relspec/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>

#include "relspec/errors.hpp"

namespace relspec {

std::string to_string(QuadratureKind kind) {
  return kind == QuadratureKind::gauss_legendre ? "gauss_legendre" : "midpoint";
}

QuadratureKind quadrature_kind_from_string(const std::string& name) {
  if (name == "gauss_legendre") return QuadratureKind::gauss_legendre;
  if (name == "midpoint") return QuadratureKind::midpoint;
  throw validation_error("unknown quadrature kind: " + name);
}

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the Legendre
// recurrence, weights 2 v0^2 from the first eigenvector components.
void gauss_legendre_reference(int count, std::vector<double>* nodes, std::vector<double>* weights) {
  if (count < 1) throw validation_error("quadrature needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(count, count);
  for (int k = 1; k < count; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes->resize(count);
  weights->resize(count);
  for (int i = 0; i < count; ++i) {
    (*nodes)[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    (*weights)[i] = 2.0 * v0 * v0;
  }
}

QuadratureRule QuadratureRule::make(QuadratureKind kind, int count, double t) {
  if (count < 1) throw validation_error("quadrature needs at least one node");
  if (!(t > 0.0)) throw validation_error("quadrature interval length must be positive");
  QuadratureRule rule;
  rule.kind = kind;
  rule.t = t;
  if (kind == QuadratureKind::midpoint) {
    rule.nodes.resize(count);
    rule.weights.assign(count, t / count);
    for (int i = 0; i < count; ++i) rule.nodes[i] = (i + 0.5) * t / count;
  } else {
    std::vector<double> x, w;
    gauss_legendre_reference(count, &x, &w);
    rule.nodes.resize(count);
    rule.weights.resize(count);
    for (int i = 0; i < count; ++i) {
      rule.nodes[i] = 0.5 * t * (x[i] + 1.0);
      rule.weights[i] = 0.5 * t * w[i];
    }
  }
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  if (std::abs(sum - t) > 1e-12 * t)
    throw numerical_error("quadrature weights do not sum to the interval length");
  for (double x : rule.nodes)
    if (!(x > 0.0 && x < t)) throw numerical_error("quadrature node outside the open interval");
  // test hook: corrupt one weight so downstream residual checks must notice
  if (const char* fault = std::getenv("RELSPEC_FAULT_QUADRATURE"); fault && fault[0] == '1')
    rule.weights[0] *= 1.0 + 1e-3;
  return rule;
}

}  // namespace relspec
