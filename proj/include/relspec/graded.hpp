#pragma once

#include <Eigen/Dense>
#include <string>

#include "relspec/operator_handle.hpp"

namespace relspec {

// Symmetric operator odd with respect to a grading involution tau.
// grading holds the diagonal of tau, entries exactly +1 or -1, and the
// anticommutator tau D + D tau must vanish within 1e-12 (relative).
class GradedOperator {
public:
  GradedOperator(Eigen::MatrixXd dirac, Eigen::VectorXd grading, std::string label = {});

  int dim() const { return static_cast<int>(grading_.size()); }
  const Eigen::MatrixXd& dirac() const { return dirac_; }
  const Eigen::VectorXd& grading() const { return grading_; }
  const std::string& label() const { return label_; }

  // same dimension and identical grading diagonal
  bool grading_matches(const GradedOperator& other) const;

  // D^2, flagged nonnegative
  OperatorHandle square() const;

private:
  Eigen::MatrixXd dirac_;
  Eigen::VectorXd grading_;
  std::string label_;
};

// Assembles [[0, dplus^T], [dplus, 0]] on the ordered basis (+ block, then - block)
// with grading diag(+1...,-1...). dplus maps the + block into the - block.
GradedOperator graded_from_block(const Eigen::MatrixXd& dplus, std::string label = {});

}  // namespace relspec
