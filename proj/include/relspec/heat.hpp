#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "relspec/graded.hpp"
#include "relspec/perturbation.hpp"

namespace relspec {

enum class TraceMethod { dense_spectral, krylov, stochastic };

std::string to_string(TraceMethod method);
TraceMethod trace_method_from_string(const std::string& name);

// Sampled values of tr(exp(-t A) - exp(-t A')) over a time grid.
// error_estimates are zero for the deterministic methods and one standard
// error per point for the stochastic estimator.
struct HeatTraceSeries {
  std::vector<double> t_grid;
  std::vector<double> values;
  std::vector<double> error_estimates;
  TraceMethod method = TraceMethod::dense_spectral;
  std::string pair_label;
};

struct KernelMatrix {
  double t = 0.0;
  Eigen::MatrixXd entries;
};

struct StochasticOptions {
  int probes = 64;
  std::uint64_t seed = 7;
};

enum class ApplyMode { automatic, dense, lanczos };

// exp(-t A) v. Dimension below the dense threshold uses the spectral cache,
// larger operators a Lanczos iteration with relative residual 1e-10.
Eigen::VectorXd heat_apply(const OperatorHandle& op, double t, const Eigen::VectorXd& v,
                           ApplyMode mode = ApplyMode::automatic);

// Full kernel matrix exp(-t A); refused above the dense threshold.
KernelMatrix heat_kernel(const OperatorHandle& op, double t);

HeatTraceSeries relative_heat_trace(const PerturbationPair& pair, std::vector<double> t_grid,
                                    TraceMethod method = TraceMethod::dense_spectral,
                                    const StochasticOptions& opts = {}, int threads = 1);

// tr(tau exp(-t D^2))
double supertrace(const GradedOperator& op, double t);

// Off-diagonal decay of the heat kernel around one site, grouped by graph
// distance in the operator's adjacency structure.
struct DecayProbeTable {
  double t = 0.0;
  std::vector<int> distance;
  std::vector<double> max_abs;
  double slope = 0.0;  // of log|W| against -dist^2 / ((4 + delta) t)
};

struct DecayProbeResult {
  int site = 0;
  double delta = 1.0;
  std::vector<DecayProbeTable> tables;
};

DecayProbeResult offdiag_decay_probe(const OperatorHandle& op, const std::vector<double>& t_list,
                                     int site);

}  // namespace relspec
