#include "relspec/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "relspec/errors.hpp"
#include "relspec/rng.hpp"

namespace relspec {
namespace {

std::vector<std::vector<int>> chain_adjacency(int n, bool periodic) {
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) adj[i].push_back(i - 1);
    if (i + 1 < n) adj[i].push_back(i + 1);
  }
  if (periodic && n > 2) {
    adj[0].push_back(n - 1);
    adj[n - 1].push_back(0);
  }
  return adj;
}

void check_window_covers(const std::vector<double>& v, int lo, int hi, const std::string& what) {
  bool any_nonzero = std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
  if (!any_nonzero) return;
  if (lo < 0 || hi < lo || hi >= static_cast<int>(v.size()))
    throw validation_error(what + " requires a declared compact support window");
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if ((i < lo || i > hi) && v[i] != 0.0)
      throw validation_error(what + " must vanish outside the declared window");
}

PerturbationPair build_schrodinger(const ModelSpec& spec) {
  const int n = spec.n;
  if (n < 2) throw validation_error("schrodinger_1d needs at least 2 grid points");
  if (!(spec.dx > 0.0)) throw validation_error("mesh width must be positive");
  std::vector<double> vb = spec.potential_base, vp = spec.potential_perturbed;
  if (vb.empty()) vb.assign(n, 0.0);
  if (vp.empty()) vp.assign(n, 0.0);
  if (static_cast<int>(vb.size()) != n || static_cast<int>(vp.size()) != n)
    throw validation_error("potential sample count must equal the grid size");
  check_window_covers(vb, spec.support_lo, spec.support_hi, "base potential");
  check_window_covers(vp, spec.support_lo, spec.support_hi, "perturbed potential");

  const double inv_h2 = 1.0 / (spec.dx * spec.dx);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    lap(i, i) = 2.0 * inv_h2;  // Dirichlet ends
    if (i > 0) lap(i, i - 1) = -inv_h2;
    if (i + 1 < n) lap(i, i + 1) = -inv_h2;
  }
  Eigen::MatrixXd a = lap, ap = lap;
  for (int i = 0; i < n; ++i) {
    a(i, i) += vb[i];
    ap(i, i) += vp[i];
  }
  auto adj = chain_adjacency(n, false);
  OperatorHandle base(std::move(a), spec.label + ":base", true, adj);
  OperatorHandle pert(std::move(ap), spec.label + ":perturbed", true, adj);
  return PerturbationPair(std::move(base), std::move(pert));
}

Eigen::MatrixXd graph_laplacian(int n, const std::vector<std::pair<int, int>>& edges,
                                const std::vector<double>& weights) {
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    const double w = weights[e];
    lap(i, i) += w;
    lap(j, j) += w;
    lap(i, j) -= w;
    lap(j, i) -= w;
  }
  return lap;
}

PerturbationPair build_graph(const ModelSpec& spec, bool cycle) {
  const int n = spec.n;
  if (n < 2) throw validation_error("graph models need at least 2 vertices");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (cycle) edges.emplace_back(n - 1, 0);
  const int ne = static_cast<int>(edges.size());

  std::vector<double> wb = spec.weights_base, wp = spec.weights_perturbed;
  if (wb.empty()) wb.assign(ne, 1.0);
  if (wp.empty()) wp = wb;
  if (static_cast<int>(wb.size()) != ne || static_cast<int>(wp.size()) != ne)
    throw validation_error("edge weight count must match the edge count");
  for (double w : wb)
    if (!(w > 0.0)) throw validation_error("edge weights must be positive");
  for (double w : wp)
    if (!(w > 0.0)) throw validation_error("edge weights must be positive");
  if (spec.length > 0.0) {
    // interpret weights as conductances on a chain of given length
    const double scale = static_cast<double>(n) / spec.length;
    for (auto& w : wb) w *= scale * scale;
    for (auto& w : wp) w *= scale * scale;
  }
  auto adj = chain_adjacency(n, cycle);
  OperatorHandle base(graph_laplacian(n, edges, wb), spec.label + ":base", true, adj);
  OperatorHandle pert(graph_laplacian(n, edges, wp), spec.label + ":perturbed", true, adj);
  return PerturbationPair(std::move(base), std::move(pert));
}

Eigen::MatrixXd random_symmetric(int n, Rng& rng) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double x = rng.normal();
      m(i, j) = x;
      m(j, i) = x;
    }
  return m;
}

PerturbationPair build_random_spd(const ModelSpec& spec) {
  const int n = spec.n;
  if (n < 2) throw validation_error("random_spd needs dimension >= 2");
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::MatrixXd a = (g.transpose() * g) / static_cast<double>(n);
  a += 0.5 * Eigen::MatrixXd::Identity(n, n);

  int lo = spec.support_lo, hi = spec.support_hi;
  if (lo < 0) {  // no declared window: dense perturbation over the full range
    lo = 0;
    hi = n - 1;
  }
  if (hi < lo || hi >= n) throw validation_error("support window out of range");
  const int m = hi - lo + 1;
  Eigen::MatrixXd block(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const double x = rng.normal();
      block(i, j) = x;
      block(j, i) = x;
    }
  // scale so the perturbed operator stays positive definite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esa(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esb(block);
  const double bnorm =
      std::max(std::abs(esb.eigenvalues()(0)), std::abs(esb.eigenvalues()(m - 1)));
  const double margin = esa.eigenvalues()(0);
  if (bnorm > 0.0) block *= spec.eta_scale * margin / bnorm;
  Eigen::MatrixXd ap = a;
  ap.block(lo, lo, m, m) += block;
  OperatorHandle base(std::move(a), spec.label + ":base", true);
  OperatorHandle pert(std::move(ap), spec.label + ":perturbed", true);
  return PerturbationPair(std::move(base), std::move(pert));
}

PerturbationPair build_explicit_diag(const ModelSpec& spec) {
  if (spec.diag_base.empty() || spec.diag_base.size() != spec.diag_perturbed.size())
    throw validation_error("explicit_diag needs two equal-length diagonals");
  const int n = static_cast<int>(spec.diag_base.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n), ap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = spec.diag_base[i];
    ap(i, i) = spec.diag_perturbed[i];
  }
  OperatorHandle base(std::move(a), spec.label + ":base", true);
  OperatorHandle pert(std::move(ap), spec.label + ":perturbed", true);
  return PerturbationPair(std::move(base), std::move(pert));
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::schrodinger_1d: return "schrodinger_1d";
    case ModelKind::cycle_graph: return "cycle_graph";
    case ModelKind::path_graph: return "path_graph";
    case ModelKind::hodge_complex: return "hodge_complex";
    case ModelKind::random_spd: return "random_spd";
    case ModelKind::graded_block: return "graded_block";
    case ModelKind::explicit_diag: return "explicit_diag";
  }
  throw validation_error("unknown model kind");
}

ModelKind model_kind_from_string(const std::string& name) {
  static const std::map<std::string, ModelKind> table = {
      {"schrodinger_1d", ModelKind::schrodinger_1d}, {"cycle_graph", ModelKind::cycle_graph},
      {"path_graph", ModelKind::path_graph},         {"hodge_complex", ModelKind::hodge_complex},
      {"random_spd", ModelKind::random_spd},         {"graded_block", ModelKind::graded_block},
      {"explicit_diag", ModelKind::explicit_diag}};
  auto it = table.find(name);
  if (it == table.end()) throw validation_error("unknown model kind: " + name);
  return it->second;
}

std::pair<GradedOperator, GradedOperator> build_graded_pair(const ModelSpec& spec) {
  if (spec.kind != ModelKind::graded_block)
    throw validation_error("graded pair requires kind graded_block");
  const int n = spec.n;
  if (n < 2) throw validation_error("graded_block needs dimension >= 2");
  const int p = (n + 1) / 2;  // + block
  const int m = n - p;        // - block
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x13198a2e03707344ULL);
  Eigen::MatrixXd dplus(m, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < p; ++j) dplus(i, j) = rng.normal();
  Eigen::MatrixXd bump = Eigen::MatrixXd::Zero(m, p);
  int lo = spec.support_lo < 0 ? 0 : spec.support_lo;
  int hi = spec.support_hi < 0 ? std::min(m, p) - 1 : spec.support_hi;
  if (lo > hi || hi >= std::min(m, p)) throw validation_error("support window out of range");
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j) bump(i, j) = rng.normal();
  Eigen::MatrixXd dplus2 = dplus + spec.eta_scale * bump;
  return {graded_from_block(dplus, spec.label + ":base"),
          graded_from_block(dplus2, spec.label + ":perturbed")};
}

PerturbationPair build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::schrodinger_1d: return build_schrodinger(spec);
    case ModelKind::cycle_graph: return build_graph(spec, true);
    case ModelKind::path_graph: return build_graph(spec, false);
    case ModelKind::random_spd: return build_random_spd(spec);
    case ModelKind::explicit_diag: return build_explicit_diag(spec);
    case ModelKind::graded_block: {
      auto [da, db] = build_graded_pair(spec);
      return PerturbationPair(da.square(), db.square());
    }
    case ModelKind::hodge_complex: {
      auto tower = build_hodge_tower(spec.complex);
      return tower.front();  // degree 0 pair
    }
  }
  throw validation_error("unknown model kind");
}

}  // namespace relspec
