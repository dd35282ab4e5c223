#include "relspec/operator_handle.hpp"

#include <Eigen/Eigenvalues>
#include <mutex>

#include "relspec/errors.hpp"

namespace relspec {

struct OperatorHandle::CacheCell {
  std::once_flag once;
  SpectralCache cache;
};

OperatorHandle::OperatorHandle(Eigen::MatrixXd entries, std::string label, bool laplacian_like,
                               std::optional<std::vector<std::vector<int>>> adjacency)
    : entries_(std::move(entries)),
      label_(std::move(label)),
      laplacian_like_(laplacian_like),
      adjacency_(std::move(adjacency)),
      cache_(std::make_shared<CacheCell>()) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw validation_error("operator must be square and nonempty: " + label_);
  const double scale = entries_.norm();
  const double asym = (entries_ - entries_.transpose()).norm();
  if (asym > kSymmetryTol * std::max(1.0, scale))
    throw validation_error("operator entries are not symmetric within tolerance: " + label_);
  if (adjacency_ && static_cast<int>(adjacency_->size()) != dim())
    throw validation_error("adjacency size does not match dimension: " + label_);
  if (laplacian_like_) {
    const auto& sc = spectrum();
    const double lmin = sc.eigenvalues(sc.eigenvalues.size() - 1);
    if (lmin < -kNegativeEigTol)
      throw validation_error("operator flagged nonnegative has eigenvalue " + std::to_string(lmin) +
                             ": " + label_);
  }
}

const SpectralCache& OperatorHandle::spectrum() const {
  std::call_once(cache_->once, [this] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_);
    if (es.info() != Eigen::Success)
      throw numerical_error("eigendecomposition failed: " + label_);
    // ascending from Eigen, stored nonincreasing
    const int n = dim();
    cache_->cache.eigenvalues = es.eigenvalues().reverse();
    cache_->cache.eigenvectors.resize(n, n);
    for (int k = 0; k < n; ++k)
      cache_->cache.eigenvectors.col(k) = es.eigenvectors().col(n - 1 - k);
  });
  return cache_->cache;
}

Eigen::VectorXd OperatorHandle::apply(const Eigen::VectorXd& v) const {
  if (v.size() != dim()) throw validation_error("vector length does not match operator dimension");
  return entries_ * v;
}

double OperatorHandle::lambda_max_abs() const {
  const auto& ev = spectrum().eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double OperatorHandle::kernel_threshold() const { return kKernelThresholdRel * lambda_max_abs(); }

int OperatorHandle::kernel_dimension() const {
  const auto& ev = spectrum().eigenvalues;
  const double thr = kernel_threshold();
  int count = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) <= thr) ++count;
  return count;
}

double OperatorHandle::min_nonzero_eigenvalue() const {
  const auto& ev = spectrum().eigenvalues;
  const double thr = kernel_threshold();
  double best = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev(i));
    if (a > thr && (best == 0.0 || a < best)) best = a;
  }
  return best;
}

Eigen::MatrixXd heat_apply_dense(const OperatorHandle& op, double t, const Eigen::MatrixXd& v) {
  const auto& sc = op.spectrum();
  const Eigen::ArrayXd decay = (-t * sc.eigenvalues.array()).exp();
  return sc.eigenvectors * (decay.matrix().asDiagonal() * (sc.eigenvectors.transpose() * v));
}

}  // namespace relspec
