#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "relspec/graded.hpp"
#include "relspec/perturbation.hpp"

namespace relspec {

// Weighted simplicial complex: simplices[q] lists the q-simplices as sorted
// vertex tuples; every face of a listed simplex must itself be listed.
// Weight vectors are positive, one entry per simplex, two weightings forming
// the model pair. Empty weight vectors mean unit weights.
struct HodgeComplexSpec {
  std::vector<std::vector<std::vector<int>>> simplices;
  std::vector<std::vector<double>> weights_base;
  std::vector<std::vector<double>> weights_perturbed;

  int dimension() const { return static_cast<int>(simplices.size()) - 1; }
  int count(int q) const { return static_cast<int>(simplices[q].size()); }
  int euler_characteristic() const;
};

enum class ModelKind {
  schrodinger_1d,
  cycle_graph,
  path_graph,
  hodge_complex,
  random_spd,
  graded_block,
  explicit_diag,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// Description of a model pair. Which fields apply depends on kind; see the
// builder for per-kind validation.
struct ModelSpec {
  ModelKind kind = ModelKind::random_spd;
  std::string label;
  int n = 0;            // grid points, vertices, or matrix dimension
  double dx = 1.0;      // mesh width (schrodinger_1d)
  double length = 0.0;  // circumference / chain length; 0 means unit edge weights
  std::vector<double> potential_base;       // samples, length n
  std::vector<double> potential_perturbed;  // samples, length n
  std::vector<double> weights_base;         // graph edge weights
  std::vector<double> weights_perturbed;
  std::vector<double> diag_base;       // explicit_diag entries
  std::vector<double> diag_perturbed;  // explicit_diag entries
  int support_lo = -1;  // declared compact window (inclusive indices)
  int support_hi = -1;
  double eta_scale = 0.1;  // random_spd / graded_block perturbation amplitude
  std::uint64_t seed = 1;
  HodgeComplexSpec complex;
};

// Deterministic: equal specs produce bit-identical matrices.
PerturbationPair build_model(const ModelSpec& spec);

// The two graded operators behind a graded_block spec (build_model squares them).
std::pair<GradedOperator, GradedOperator> build_graded_pair(const ModelSpec& spec);

// One pair per degree 0..dim of the complex, all flagged nonnegative.
std::vector<PerturbationPair> build_hodge_tower(const HodgeComplexSpec& complex);

// Signed incidence matrix from q-simplices to (q-1)-simplices (q >= 1).
Eigen::MatrixXd boundary_matrix(const HodgeComplexSpec& complex, int q);

}  // namespace relspec
