#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "relspec/duhamel.hpp"
#include "relspec/errors.hpp"
#include "relspec/models.hpp"
#include "relspec/quadrature.hpp"

using namespace relspec;

namespace {

PerturbationPair small_pair(std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::random_spd;
  spec.label = "spd";
  spec.n = 8;
  spec.seed = seed;
  spec.eta_scale = 0.3;
  return build_model(spec);
}

double residual_against_exact(const PerturbationPair& pair, double t, int nodes) {
  const QuadratureRule rule = QuadratureRule::make(QuadratureKind::gauss_legendre, nodes, t);
  const Eigen::MatrixXd interp = duhamel_difference(pair, t, rule);
  const Eigen::MatrixXd exact = oracles::expm_taylor(pair.base().entries(), t) -
                                oracles::expm_taylor(pair.perturbed().entries(), t);
  return (interp - exact).norm();
}

}  // namespace

TEST_CASE("interpolation identity reproduces the exact kernel difference") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    PerturbationPair pair = small_pair(seed);
    for (double t : {0.1, 1.0, 5.0}) {
      const double scale =
          1.0 + oracles::expm_taylor(pair.base().entries(), t).norm();
      CHECK(residual_against_exact(pair, t, 64) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("node doubling drives the residual down fast") {
  PerturbationPair pair = small_pair(6);
  const double t = 1.0;
  double prev = residual_against_exact(pair, t, 4);
  for (int nodes = 8; nodes <= 64; nodes *= 2) {
    const double cur = residual_against_exact(pair, t, nodes);
    if (prev > 1e-13) CHECK(cur <= prev / 10.0);
    prev = cur;
  }
  CHECK(prev <= 1e-13);
}

TEST_CASE("midpoint rule converges too, just slower") {
  PerturbationPair pair = small_pair(9);
  const QuadratureRule coarse = QuadratureRule::make(QuadratureKind::midpoint, 64, 0.5);
  const QuadratureRule fine = QuadratureRule::make(QuadratureKind::midpoint, 256, 0.5);
  const Eigen::MatrixXd exact = oracles::expm_taylor(pair.base().entries(), 0.5) -
                                oracles::expm_taylor(pair.perturbed().entries(), 0.5);
  const double ec = (duhamel_difference(pair, 0.5, coarse) - exact).norm();
  const double ef = (duhamel_difference(pair, 0.5, fine) - exact).norm();
  CHECK(ef < ec);
  CHECK(ef <= ec / 8.0);  // second order in the node count
}

TEST_CASE("quadrature rules integrate polynomials exactly") {
  const QuadratureRule rule = QuadratureRule::make(QuadratureKind::gauss_legendre, 6, 2.0);
  double wsum = 0.0, cubic = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    wsum += rule.weights[i];
    cubic += rule.weights[i] * std::pow(rule.nodes[i], 3);
  }
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-13));  // integral of s^3 over (0,2)
  CHECK_THROWS_AS(QuadratureRule::make(QuadratureKind::gauss_legendre, 0, 1.0), validation_error);
  CHECK_THROWS_AS(QuadratureRule::make(QuadratureKind::gauss_legendre, 4, -1.0), validation_error);
}

TEST_CASE("trace norm matches the singular value sum") {
  PerturbationPair pair = small_pair(12);
  const Eigen::MatrixXd m = duhamel_difference(
      pair, 0.7, QuadratureRule::make(QuadratureKind::gauss_legendre, 32, 0.7));
  CHECK(trace_norm(m) == doctest::Approx(oracles::trace_norm_ref(m)).epsilon(1e-10));
}

TEST_CASE("bound scan of a monotone pair peaks at the left endpoint") {
  // A' = A + rank-one psd bump: the kernel difference shrinks monotonically in t
  Eigen::MatrixXd a = Eigen::VectorXd::LinSpaced(6, 12.0, 14.0).asDiagonal();
  Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(6, 0.2, 1.0);
  Eigen::MatrixXd ap = a + 0.4 * u * u.transpose();
  PerturbationPair pair{OperatorHandle(a, "a", true), OperatorHandle(ap, "ap", true)};
  BoundScan scan = uniform_bound_scan(pair, 0.1, 10.0, 25);
  REQUIRE(scan.t.size() == 25);
  CHECK(scan.argmax_t == doctest::Approx(0.1));
  CHECK(scan.max_norm == doctest::Approx(scan.norms.front()));
  CHECK(std::isfinite(scan.max_norm));
  for (std::size_t i = 1; i < scan.norms.size(); ++i) CHECK(scan.norms[i] <= scan.norms[i - 1]);
}

TEST_CASE("metric variation difference matches the symmetrized operator") {
  Eigen::MatrixXd a(4, 4);
  a << 4.0, -1.0, 0.0, 0.0, -1.0, 4.0, -1.0, 0.0, 0.0, -1.0, 4.0, -1.0, 0.0, 0.0, -1.0, 4.0;
  Eigen::MatrixXd ap = a;
  ap(1, 1) += 0.3;
  Eigen::VectorXd density(4);
  density << 1.0, 1.2, 0.9, 1.0;
  PerturbationPair pair{OperatorHandle(a, "a", true), OperatorHandle(ap, "ap", true), density};
  const double t = 0.8;
  const QuadratureRule rule = QuadratureRule::make(QuadratureKind::gauss_legendre, 48, t);
  const Eigen::MatrixXd got = duhamel_difference_metric(pair, t, rule);
  const Eigen::MatrixXd exact = oracles::expm_taylor(a, t) -
                                oracles::expm_taylor(symmetrized_perturbed(pair), t);
  CHECK((got - exact).norm() <= 1e-10 * (1.0 + exact.norm()));
}

TEST_CASE("metric variation path requires a weight change") {
  PerturbationPair pair = small_pair(2);
  const QuadratureRule rule = QuadratureRule::make(QuadratureKind::gauss_legendre, 8, 1.0);
  CHECK_THROWS_AS(duhamel_difference_metric(pair, 1.0, rule), validation_error);
}

TEST_CASE("dirac level difference matches the odd heat oracle") {
  ModelSpec spec;
  spec.kind = ModelKind::graded_block;
  spec.n = 7;
  spec.seed = 31;
  spec.eta_scale = 0.2;
  auto [da, db] = build_graded_pair(spec);
  const double t = 0.6;
  const Eigen::MatrixXd expected =
      da.dirac() * oracles::expm_taylor(da.square().entries(), t) -
      db.dirac() * oracles::expm_taylor(db.square().entries(), t);
  const Eigen::MatrixXd got = dirac_level_difference(da, db, t);
  CHECK((got - expected).norm() <= 1e-11 * (1.0 + expected.norm()));
}

TEST_CASE("dirac level difference rejects mismatched gradings") {
  Eigen::MatrixXd dplus1(1, 2), dplus2(2, 1);
  dplus1 << 1.0, 2.0;
  dplus2 << 1.0, 2.0;
  GradedOperator a = graded_from_block(dplus1, "a");
  GradedOperator b = graded_from_block(dplus2, "b");
  CHECK_THROWS_AS(dirac_level_difference(a, b, 1.0), validation_error);
}
