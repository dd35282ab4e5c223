#include <algorithm>
#include <cmath>
#include <map>

#include "relspec/errors.hpp"
#include "relspec/models.hpp"

namespace relspec {
namespace {

using Simplex = std::vector<int>;

void validate_complex(const HodgeComplexSpec& cx) {
  if (cx.simplices.empty() || cx.simplices[0].empty())
    throw validation_error("complex needs at least one vertex");
  for (int q = 0; q < static_cast<int>(cx.simplices.size()); ++q) {
    std::map<Simplex, int> seen;
    for (const auto& s : cx.simplices[q]) {
      if (static_cast<int>(s.size()) != q + 1)
        throw validation_error("simplex arity does not match its degree");
      if (!std::is_sorted(s.begin(), s.end()) ||
          std::adjacent_find(s.begin(), s.end()) != s.end())
        throw validation_error("simplices must be sorted tuples of distinct vertices");
      if (!seen.emplace(s, 1).second) throw validation_error("duplicate simplex listed");
    }
  }
  auto check_weights = [&](const std::vector<std::vector<double>>& ws, const char* which) {
    if (ws.empty()) return;
    if (ws.size() != cx.simplices.size())
      throw validation_error(std::string(which) + " weights must cover every degree");
    for (std::size_t q = 0; q < ws.size(); ++q) {
      if (ws[q].size() != cx.simplices[q].size())
        throw validation_error(std::string(which) + " weight count mismatch at some degree");
      for (double w : ws[q])
        if (!(w > 0.0)) throw validation_error(std::string(which) + " weights must be positive");
    }
  };
  check_weights(cx.weights_base, "base");
  check_weights(cx.weights_perturbed, "perturbed");
}

Eigen::VectorXd degree_weights(const HodgeComplexSpec& cx,
                               const std::vector<std::vector<double>>& ws, int q) {
  const int n = cx.count(q);
  if (ws.empty()) return Eigen::VectorXd::Ones(n);
  return Eigen::Map<const Eigen::VectorXd>(ws[q].data(), n);
}

// Laplacian tower for one weighting. The boundary maps are conjugated by the
// square roots of the simplex weights first, which keeps the complex property
// and makes every level symmetric in a single coordinate frame.
std::vector<Eigen::MatrixXd> laplacians(const HodgeComplexSpec& cx,
                                        const std::vector<std::vector<double>>& ws) {
  const int top = cx.dimension();
  std::vector<Eigen::MatrixXd> normalized(top + 1);  // normalized boundary per degree >= 1
  for (int q = 1; q <= top; ++q) {
    Eigen::MatrixXd b = boundary_matrix(cx, q);
    Eigen::VectorXd wdom = degree_weights(cx, ws, q);
    Eigen::VectorXd wcod = degree_weights(cx, ws, q - 1);
    normalized[q] = wcod.array().sqrt().matrix().asDiagonal() * b *
                    wdom.array().rsqrt().matrix().asDiagonal();
  }
  std::vector<Eigen::MatrixXd> lap(top + 1);
  for (int q = 0; q <= top; ++q) {
    const int n = cx.count(q);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    if (q >= 1) l += normalized[q].transpose() * normalized[q];
    if (q + 1 <= top) l += normalized[q + 1] * normalized[q + 1].transpose();
    lap[q] = 0.5 * (l + l.transpose().eval());
  }
  return lap;
}

}  // namespace

int HodgeComplexSpec::euler_characteristic() const {
  int chi = 0;
  for (int q = 0; q <= dimension(); ++q) chi += (q % 2 == 0 ? 1 : -1) * count(q);
  return chi;
}

Eigen::MatrixXd boundary_matrix(const HodgeComplexSpec& cx, int q) {
  if (q < 1 || q > cx.dimension()) throw validation_error("boundary degree out of range");
  std::map<Simplex, int> index;
  for (int i = 0; i < cx.count(q - 1); ++i) index[cx.simplices[q - 1][i]] = i;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(cx.count(q - 1), cx.count(q));
  for (int j = 0; j < cx.count(q); ++j) {
    const auto& s = cx.simplices[q][j];
    for (int drop = 0; drop < static_cast<int>(s.size()); ++drop) {
      Simplex face;
      for (int k = 0; k < static_cast<int>(s.size()); ++k)
        if (k != drop) face.push_back(s[k]);
      auto it = index.find(face);
      if (it == index.end())
        throw validation_error("complex is missing a face of a listed simplex");
      b(it->second, j) += (drop % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return b;
}

std::vector<PerturbationPair> build_hodge_tower(const HodgeComplexSpec& cx) {
  validate_complex(cx);
  const int top = cx.dimension();
  // chain condition, exact for integer incidence entries
  for (int q = 2; q <= top; ++q) {
    Eigen::MatrixXd z = boundary_matrix(cx, q - 1) * boundary_matrix(cx, q);
    if (z.norm() > 1e-12) throw validation_error("boundary maps do not compose to zero");
  }
  auto base = laplacians(cx, cx.weights_base);
  auto pert = laplacians(cx, cx.weights_perturbed);
  std::vector<PerturbationPair> tower;
  tower.reserve(top + 1);
  for (int q = 0; q <= top; ++q) {
    std::optional<std::vector<std::vector<int>>> adjacency;
    if (q == 0 && top >= 1) {
      std::vector<std::vector<int>> adj(cx.count(0));
      for (const auto& e : cx.simplices[1]) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
      }
      adjacency = std::move(adj);
    }
    const std::string tag = "hodge:q=" + std::to_string(q);
    std::optional<Eigen::VectorXd> density;
    if (!cx.weights_base.empty() || !cx.weights_perturbed.empty()) {
      Eigen::VectorXd wb = degree_weights(cx, cx.weights_base, q);
      Eigen::VectorXd wp = degree_weights(cx, cx.weights_perturbed, q);
      density = (wp.array() / wb.array()).matrix();
    }
    tower.emplace_back(OperatorHandle(base[q], tag + ":base", true, adjacency),
                       OperatorHandle(pert[q], tag + ":perturbed", true, adjacency),
                       std::move(density));
  }
  return tower;
}

}  // namespace relspec
