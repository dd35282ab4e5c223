#include "relspec/perturbation.hpp"

#include <cmath>

#include "relspec/errors.hpp"

namespace relspec {

PerturbationPair::PerturbationPair(OperatorHandle base, OperatorHandle perturbed,
                                   std::optional<Eigen::VectorXd> weight_change)
    : base_(std::move(base)), perturbed_(std::move(perturbed)), weight_change_(std::move(weight_change)) {
  if (base_.dim() != perturbed_.dim())
    throw validation_error("pair operators must share a dimension: " + base_.label() + " / " +
                           perturbed_.label());
  if (weight_change_) {
    if (weight_change_->size() != base_.dim())
      throw validation_error("weight_change length does not match pair dimension");
    if ((weight_change_->array() <= 0.0).any())
      throw validation_error("weight_change entries must be positive");
  }
  eta_ = perturbed_.entries() - base_.entries();
  kernel_dim_diff_ = base_.kernel_dimension() - perturbed_.kernel_dimension();
  const int region = std::max(1, (dim() + 9) / 10);
  decay_profile_ = decay_report(*this, region);
}

double PerturbationPair::relative_trace(double t) const {
  if (!(t > 0.0)) throw validation_error("time must be positive");
  const auto& a = base_.spectrum().eigenvalues;
  const auto& b = perturbed_.spectrum().eigenvalues;
  // Both spectra are sorted, so pairing k-th against k-th keeps the gaps
  // bounded by the perturbation norm and the expm1 form stays accurate for
  // times far below machine resolution of a plain difference.
  double acc = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    const double gap = t * (a(k) - b(k));
    if (std::abs(gap) < 1e-3)
      acc += std::exp(-t * b(k)) * std::expm1(-gap);
    else
      acc += std::exp(-t * a(k)) - std::exp(-t * b(k));
  }
  return acc;
}

double PerturbationPair::relative_trace_tail(double t) const {
  return relative_trace(t) - static_cast<double>(kernel_dim_diff_);
}

double PerturbationPair::spectral_gap() const {
  const double a = base_.min_nonzero_eigenvalue();
  const double b = perturbed_.min_nonzero_eigenvalue();
  if (a == 0.0) return b;
  if (b == 0.0) return a;
  return std::min(a, b);
}

DecayProfile decay_report(const PerturbationPair& pair, int region_size) {
  if (region_size <= 0) throw validation_error("region size must be positive");
  DecayProfile profile;
  profile.region_size = region_size;
  const auto& eta = pair.eta();
  const int n = pair.dim();
  const double total = eta.norm();
  for (int start = 0, index = 0; start < n; start += region_size, ++index) {
    const int len = std::min(region_size, n - start);
    const double norm = eta.block(start, start, len, len).norm();
    profile.regions.emplace_back(index, norm);
  }
  // decay at infinity corresponds to both chain ends of the index range
  const double edge = std::max(profile.regions.front().second, profile.regions.back().second);
  profile.flagged = profile.regions.size() > 1 && edge > profile.relative_threshold * total;
  return profile;
}

}  // namespace relspec
