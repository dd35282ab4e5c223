#include "relspec/graded.hpp"

#include "relspec/errors.hpp"

namespace relspec {

GradedOperator::GradedOperator(Eigen::MatrixXd dirac, Eigen::VectorXd grading, std::string label)
    : dirac_(std::move(dirac)), grading_(std::move(grading)), label_(std::move(label)) {
  if (dirac_.rows() != dirac_.cols() || dirac_.rows() != grading_.size() || grading_.size() == 0)
    throw validation_error("graded operator shape mismatch: " + label_);
  for (int i = 0; i < grading_.size(); ++i)
    if (grading_(i) != 1.0 && grading_(i) != -1.0)
      throw validation_error("grading entries must be exactly +1 or -1: " + label_);
  const double scale = std::max(1.0, dirac_.norm());
  if ((dirac_ - dirac_.transpose()).norm() > OperatorHandle::kSymmetryTol * scale)
    throw validation_error("graded operator is not symmetric: " + label_);
  Eigen::MatrixXd anti = grading_.asDiagonal() * dirac_ + dirac_ * grading_.asDiagonal();
  if (anti.norm() > 1e-12 * scale)
    throw validation_error("operator does not anticommute with the grading: " + label_);
}

bool GradedOperator::grading_matches(const GradedOperator& other) const {
  return dim() == other.dim() && grading_ == other.grading_;
}

OperatorHandle GradedOperator::square() const {
  Eigen::MatrixXd sq = dirac_ * dirac_;
  sq = 0.5 * (sq + sq.transpose().eval());
  return OperatorHandle(std::move(sq), label_.empty() ? "dirac^2" : label_ + "^2", true);
}

GradedOperator graded_from_block(const Eigen::MatrixXd& dplus, std::string label) {
  const auto p = dplus.cols();   // + block size
  const auto m = dplus.rows();   // - block size
  if (p == 0 || m == 0) throw validation_error("graded block must be nonempty");
  const auto n = p + m;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  d.block(0, p, p, m) = dplus.transpose();
  d.block(p, 0, m, p) = dplus;
  Eigen::VectorXd tau(n);
  tau.head(p).setOnes();
  tau.tail(m).setConstant(-1.0);
  return GradedOperator(std::move(d), std::move(tau), std::move(label));
}

}  // namespace relspec
