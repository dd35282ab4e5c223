#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relspec {

// Eigendecomposition of a handle, eigenvalues sorted nonincreasing.
struct SpectralCache {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column k pairs with eigenvalues[k]
};

// Immutable symmetric operator. Construction validates symmetry; operators
// flagged laplacian_like must in addition have spectrum >= -1e-10.
class OperatorHandle {
public:
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kNegativeEigTol = 1e-10;
  static constexpr double kKernelThresholdRel = 1e-9;
  static constexpr int kDenseThreshold = 2000;

  OperatorHandle() = default;
  OperatorHandle(Eigen::MatrixXd entries, std::string label = {}, bool laplacian_like = false,
                 std::optional<std::vector<std::vector<int>>> adjacency = std::nullopt);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::string& label() const { return label_; }
  bool laplacian_like() const { return laplacian_like_; }

  // neighbor lists of the sparsity/stencil graph, present only for structured models
  const std::vector<std::vector<int>>* adjacency() const {
    return adjacency_ ? &*adjacency_ : nullptr;
  }

  // Filled once on first use; safe under concurrent callers, always the same result.
  const SpectralCache& spectrum() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  double lambda_max_abs() const;      // max |eigenvalue|
  double kernel_threshold() const;    // kKernelThresholdRel * lambda_max_abs
  int kernel_dimension() const;       // eigenvalues with |lambda| <= threshold
  double min_nonzero_eigenvalue() const;  // smallest |lambda| above threshold, 0 if none

private:
  struct CacheCell;
  Eigen::MatrixXd entries_;
  std::string label_;
  bool laplacian_like_ = false;
  std::optional<std::vector<std::vector<int>>> adjacency_;
  std::shared_ptr<CacheCell> cache_;
};

// Columns of exp(-t A) applied to the columns of V through the spectral cache.
Eigen::MatrixXd heat_apply_dense(const OperatorHandle& op, double t, const Eigen::MatrixXd& v);

}  // namespace relspec
