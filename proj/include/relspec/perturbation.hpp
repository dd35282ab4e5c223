#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "relspec/operator_handle.hpp"

namespace relspec {

// Region profile of the perturbation: Frobenius norm of eta restricted to each
// principal index block, plus a flag raised when the profile does not decay
// toward either boundary region.
struct DecayProfile {
  int region_size = 0;
  std::vector<std::pair<int, double>> regions;  // (region index, norm)
  double relative_threshold = 1e-8;
  bool flagged = false;
};

// A pair (A, A') of same-dimension symmetric operators with perturbation
// eta = A' - A. weight_change optionally carries a positive diagonal density
// relating the two inner products (metric variation).
class PerturbationPair {
public:
  PerturbationPair(OperatorHandle base, OperatorHandle perturbed,
                   std::optional<Eigen::VectorXd> weight_change = std::nullopt);

  int dim() const { return base_.dim(); }
  const OperatorHandle& base() const { return base_; }
  const OperatorHandle& perturbed() const { return perturbed_; }
  const Eigen::MatrixXd& eta() const { return eta_; }
  const std::optional<Eigen::VectorXd>& weight_change() const { return weight_change_; }
  // h = dim ker(base) - dim ker(perturbed)
  int kernel_dim_diff() const { return kernel_dim_diff_; }
  const DecayProfile& decay_profile() const { return decay_profile_; }

  // trace of exp(-t base) - exp(-t perturbed) from the two spectra
  double relative_trace(double t) const;
  // same with the kernel-dimension difference h subtracted
  double relative_trace_tail(double t) const;
  // smallest nonzero eigenvalue across both operators (decay rate of the tail)
  double spectral_gap() const;

private:
  OperatorHandle base_;
  OperatorHandle perturbed_;
  Eigen::MatrixXd eta_;
  std::optional<Eigen::VectorXd> weight_change_;
  int kernel_dim_diff_ = 0;
  DecayProfile decay_profile_;
};

// Profile with explicit region size (defaults to dim/10 rounded up at construction).
DecayProfile decay_report(const PerturbationPair& pair, int region_size);

}  // namespace relspec
