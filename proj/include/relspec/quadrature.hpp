#pragma once

#include <string>
#include <vector>

namespace relspec {

enum class QuadratureKind { gauss_legendre, midpoint };

std::string to_string(QuadratureKind kind);
QuadratureKind quadrature_kind_from_string(const std::string& name);

// Quadrature over (0, t): nodes strictly inside, weights summing to t within
// 1e-12 relative.
struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::gauss_legendre;
  double t = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static QuadratureRule make(QuadratureKind kind, int count, double t);
};

// Nodes and weights on the reference interval [-1, 1].
void gauss_legendre_reference(int count, std::vector<double>* nodes, std::vector<double>* weights);

}  // namespace relspec
