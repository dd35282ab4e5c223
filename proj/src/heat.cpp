#include "relspec/heat.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <deque>
#include <map>

#include "relspec/errors.hpp"
#include "relspec/parallel.hpp"
#include "relspec/rng.hpp"

namespace relspec {
namespace {

void check_time(double t) {
  if (!(t > 0.0)) throw validation_error("time must be positive");
}

// exp(-t A) v by Lanczos on the Krylov space of v.
Eigen::VectorXd heat_apply_lanczos(const OperatorHandle& op, double t, const Eigen::VectorXd& v) {
  constexpr double kTol = 1e-10;
  const int n = op.dim();
  const double beta0 = v.norm();
  if (beta0 == 0.0) return Eigen::VectorXd::Zero(n);
  const int max_iter = std::min(n, 400);
  Eigen::MatrixXd basis(n, max_iter);
  std::vector<double> alpha, beta;  // tridiagonal entries
  basis.col(0) = v / beta0;
  Eigen::VectorXd result = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prev_result;
  for (int k = 0; k < max_iter; ++k) {
    Eigen::VectorXd w = op.apply(basis.col(k));
    const double a = basis.col(k).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(k);
    if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
    // full reorthogonalization keeps the small tridiagonal faithful
    w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    const double b = w.norm();

    const int m = k + 1;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Eigen::VectorXd small =
        es.eigenvectors() *
        ((-t * es.eigenvalues().array()).exp() * es.eigenvectors().row(0).transpose().array())
            .matrix() *
        beta0;
    result = basis.leftCols(m) * small;
    if (k > 0 &&
        (result - prev_result).norm() <= kTol * std::max(result.norm(), 1e-300))
      return result;
    prev_result = result;
    if (b <= 1e-14 * beta0) return result;  // invariant subspace found
    if (k + 1 < max_iter) {
      beta.push_back(b);
      basis.col(k + 1) = w / b;
    }
  }
  throw numerical_error("heat application did not reach the requested residual");
}

double hutchinson_point(const PerturbationPair& pair, double t, int probes, std::uint64_t seed,
                        double* stderr_out) {
  const int n = pair.dim();
  double sum = 0.0, sumsq = 0.0;
  Rng rng(seed);
  for (int p = 0; p < probes; ++p) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = rng.rademacher();
    const double xa = z.dot(heat_apply_dense(pair.base(), t, z).col(0));
    const double xb = z.dot(heat_apply_dense(pair.perturbed(), t, z).col(0));
    const double sample = xa - xb;
    sum += sample;
    sumsq += sample * sample;
  }
  const double mean = sum / probes;
  double var = (sumsq - probes * mean * mean) / std::max(1, probes - 1);
  if (var < 0.0) var = 0.0;
  *stderr_out = std::sqrt(var / probes);
  return mean;
}

}  // namespace

std::string to_string(TraceMethod method) {
  switch (method) {
    case TraceMethod::dense_spectral: return "dense_spectral";
    case TraceMethod::krylov: return "krylov";
    case TraceMethod::stochastic: return "stochastic";
  }
  throw validation_error("unknown trace method");
}

TraceMethod trace_method_from_string(const std::string& name) {
  if (name == "dense_spectral") return TraceMethod::dense_spectral;
  if (name == "krylov") return TraceMethod::krylov;
  if (name == "stochastic") return TraceMethod::stochastic;
  throw validation_error("unknown trace method: " + name);
}

Eigen::VectorXd heat_apply(const OperatorHandle& op, double t, const Eigen::VectorXd& v,
                           ApplyMode mode) {
  check_time(t);
  if (v.size() != op.dim()) throw validation_error("vector length does not match operator");
  if (mode == ApplyMode::automatic)
    mode = op.dim() < OperatorHandle::kDenseThreshold ? ApplyMode::dense : ApplyMode::lanczos;
  if (mode == ApplyMode::dense) return heat_apply_dense(op, t, v);
  return heat_apply_lanczos(op, t, v);
}

KernelMatrix heat_kernel(const OperatorHandle& op, double t) {
  check_time(t);
  if (op.dim() >= OperatorHandle::kDenseThreshold)
    throw capability_error("kernel matrix is only available below the dense threshold");
  KernelMatrix km;
  km.t = t;
  km.entries = heat_apply_dense(op, t, Eigen::MatrixXd::Identity(op.dim(), op.dim()));
  km.entries = 0.5 * (km.entries + km.entries.transpose().eval());
  return km;
}

HeatTraceSeries relative_heat_trace(const PerturbationPair& pair, std::vector<double> t_grid,
                                    TraceMethod method, const StochasticOptions& opts,
                                    int threads) {
  if (t_grid.empty()) throw validation_error("time grid must be nonempty");
  for (double t : t_grid) check_time(t);
  if (method == TraceMethod::stochastic && opts.probes <= 0)
    throw validation_error("stochastic estimator needs a positive probe count");

  HeatTraceSeries series;
  series.t_grid = std::move(t_grid);
  series.method = method;
  series.pair_label = pair.base().label();
  const int npts = static_cast<int>(series.t_grid.size());
  series.values.assign(npts, 0.0);
  series.error_estimates.assign(npts, 0.0);

  switch (method) {
    case TraceMethod::dense_spectral:
      parallel_for(npts, threads, [&](int i) {
        series.values[i] = pair.relative_trace(series.t_grid[i]);
      });
      break;
    case TraceMethod::krylov: {
      const int n = pair.dim();
      parallel_for(npts, threads, [&](int i) {
        const double t = series.t_grid[i];
        double acc = 0.0;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < n; ++j) {
          e(j) = 1.0;
          acc += heat_apply(pair.base(), t, e, ApplyMode::lanczos)(j) -
                 heat_apply(pair.perturbed(), t, e, ApplyMode::lanczos)(j);
          e(j) = 0.0;
        }
        series.values[i] = acc;
        series.error_estimates[i] = 0.0;
      });
      break;
    }
    case TraceMethod::stochastic:
      parallel_for(npts, threads, [&](int i) {
        double se = 0.0;
        // one fixed probe stream per series; every grid point reuses it
        series.values[i] =
            hutchinson_point(pair, series.t_grid[i], opts.probes, opts.seed, &se);
        series.error_estimates[i] = se;
      });
      break;
  }
  return series;
}

double supertrace(const GradedOperator& op, double t) {
  check_time(t);
  const OperatorHandle sq = op.square();
  const auto& sc = sq.spectrum();
  const Eigen::ArrayXd decay = (-t * sc.eigenvalues.array()).exp();
  // tr(tau exp(-t D^2)) through the eigenbasis of D^2
  double acc = 0.0;
  for (int k = 0; k < sq.dim(); ++k) {
    const Eigen::VectorXd& u = sc.eigenvectors.col(k);
    acc += decay(k) * u.dot(op.grading().asDiagonal() * u);
  }
  return acc;
}

DecayProbeResult offdiag_decay_probe(const OperatorHandle& op, const std::vector<double>& t_list,
                                     int site) {
  if (!op.adjacency())
    throw capability_error("decay probe needs an adjacency structure on the operator");
  if (site < 0 || site >= op.dim()) throw validation_error("probe site out of range");
  if (t_list.empty()) throw validation_error("time list must be nonempty");
  for (double t : t_list) check_time(t);

  // graph distances from the site
  const auto& adj = *op.adjacency();
  std::vector<int> dist(op.dim(), -1);
  std::deque<int> queue{site};
  dist[site] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w : adj[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
  }

  DecayProbeResult result;
  result.site = site;
  for (double t : t_list) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(op.dim());
    e(site) = 1.0;
    const Eigen::VectorXd row = heat_apply_dense(op, t, e);
    std::map<int, double> by_distance;
    for (int j = 0; j < op.dim(); ++j) {
      if (dist[j] < 0) continue;  // disconnected from the site
      auto& slot = by_distance[dist[j]];
      slot = std::max(slot, std::abs(row(j)));
    }
    DecayProbeTable table;
    table.t = t;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    const double floor = 1e-290;
    for (const auto& [d, v] : by_distance) {
      table.distance.push_back(d);
      table.max_abs.push_back(v);
      if (d > 0 && v > floor) {
        const double x = -static_cast<double>(d) * d / ((4.0 + result.delta) * t);
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
      }
    }
    const double denom = m * sxx - sx * sx;
    table.slope = (m >= 2 && denom != 0.0) ? (m * sxy - sx * sy) / denom : 0.0;
    result.tables.push_back(std::move(table));
  }
  return result;
}

}  // namespace relspec
