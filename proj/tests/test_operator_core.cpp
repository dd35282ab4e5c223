#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "relspec/errors.hpp"
#include "relspec/graded.hpp"
#include "relspec/models.hpp"
#include "relspec/operator_handle.hpp"
#include "relspec/perturbation.hpp"

using namespace relspec;

namespace {

ModelSpec diag_model(std::vector<double> base, std::vector<double> pert) {
  ModelSpec spec;
  spec.kind = ModelKind::explicit_diag;
  spec.label = "diag";
  spec.diag_base = std::move(base);
  spec.diag_perturbed = std::move(pert);
  return spec;
}

}  // namespace

TEST_CASE("asymmetric entries are rejected") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(OperatorHandle(m, "asym"), validation_error);
}

TEST_CASE("nonnegative flag rejects indefinite operators") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(OperatorHandle(m, "indef", true), validation_error);
  CHECK_NOTHROW(OperatorHandle(m, "indef_unflagged", false));
}

TEST_CASE("spectrum is sorted nonincreasing and reproduces the operator") {
  ModelSpec spec;
  spec.kind = ModelKind::random_spd;
  spec.label = "spd";
  spec.n = 9;
  spec.seed = 2;
  PerturbationPair pair = build_model(spec);
  const auto& sc = pair.base().spectrum();
  for (int k = 1; k < sc.eigenvalues.size(); ++k)
    CHECK(sc.eigenvalues(k) <= sc.eigenvalues(k - 1));
  const Eigen::MatrixXd rebuilt =
      sc.eigenvectors * sc.eigenvalues.asDiagonal() * sc.eigenvectors.transpose();
  CHECK((rebuilt - pair.base().entries()).norm() <= 1e-12 * pair.base().entries().norm());
}

TEST_CASE("kernel dimensions of structured models") {
  ModelSpec path;
  path.kind = ModelKind::path_graph;
  path.n = 7;
  CHECK(build_model(path).base().kernel_dimension() == 1);

  ModelSpec cycle;
  cycle.kind = ModelKind::cycle_graph;
  cycle.n = 6;
  CHECK(build_model(cycle).base().kernel_dimension() == 1);

  PerturbationPair diag = build_model(diag_model({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}));
  CHECK(diag.base().kernel_dimension() == 2);
  CHECK(diag.kernel_dim_diff() == 2);
}

TEST_CASE("dense heat application matches a Taylor exponential") {
  ModelSpec spec;
  spec.kind = ModelKind::random_spd;
  spec.label = "spd";
  spec.n = 6;
  spec.seed = 5;
  PerturbationPair pair = build_model(spec);
  const Eigen::MatrixXd expm = oracles::expm_taylor(pair.base().entries(), 0.8);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(6, 6);
  const Eigen::MatrixXd got = heat_apply_dense(pair.base(), 0.8, v);
  CHECK((got - expm).norm() <= 1e-13 * expm.norm());
}

TEST_CASE("graded operators validate the anticommutation relation") {
  Eigen::MatrixXd dirac(2, 2);
  dirac << 0.0, 1.5, 1.5, 0.0;
  Eigen::VectorXd tau(2);
  tau << 1.0, -1.0;
  CHECK_NOTHROW(GradedOperator(dirac, tau));

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 1.5, 1.5, 0.0;  // diagonal entry commutes with tau
  CHECK_THROWS_AS(GradedOperator(bad, tau), validation_error);

  Eigen::VectorXd not_sign(2);
  not_sign << 1.0, -0.5;
  CHECK_THROWS_AS(GradedOperator(dirac, not_sign), validation_error);
}

TEST_CASE("graded_from_block squares to the two laplacians") {
  Eigen::MatrixXd dplus(2, 3);
  dplus << 1.0, 0.5, 0.0, -0.25, 2.0, 1.0;
  GradedOperator d = graded_from_block(dplus, "block");
  CHECK(d.dim() == 5);
  OperatorHandle sq = d.square();
  CHECK(sq.laplacian_like());
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 5);
  expected.topLeftCorner(3, 3) = dplus.transpose() * dplus;
  expected.bottomRightCorner(2, 2) = dplus * dplus.transpose();
  CHECK((sq.entries() - expected).norm() <= 1e-14 * std::max(1.0, expected.norm()));
}

TEST_CASE("pair construction rejects mismatched dimensions") {
  OperatorHandle a(Eigen::MatrixXd::Identity(2, 2), "a");
  OperatorHandle b(Eigen::MatrixXd::Identity(3, 3), "b");
  CHECK_THROWS_AS(PerturbationPair(a, b), validation_error);
}

TEST_CASE("relative trace is stable far below resolvable time scales") {
  PerturbationPair pair = build_model(diag_model({1.0, 2.0, 5.0}, {1.2, 1.5, 5.5}));
  const double tr_eta = (1.2 - 1.0) + (1.5 - 2.0) + (5.5 - 5.0);
  for (double t : {1e-18, 1e-15, 1e-12}) {
    // exp(-t a) - exp(-t b) = t (b - a) + O(t^2); naive evaluation returns 0 here
    const double expected = t * tr_eta;
    CHECK(pair.relative_trace(t) == doctest::Approx(expected).epsilon(1e-8));
  }
  // moderate times against the plain difference of exponentials
  for (double t : {0.01, 0.5, 3.0}) {
    double direct = 0.0;
    for (int k = 0; k < 3; ++k)
      direct += std::exp(-t * pair.base().spectrum().eigenvalues(k)) -
                std::exp(-t * pair.perturbed().spectrum().eigenvalues(k));
    CHECK(pair.relative_trace(t) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("decay profile flags perturbations touching the boundary regions") {
  const int n = 40;
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd interior = a;
  interior(20, 20) += 0.5;
  CHECK_FALSE(PerturbationPair(OperatorHandle(a, "a"), OperatorHandle(interior, "mid"))
                  .decay_profile()
                  .flagged);
  Eigen::MatrixXd edge = a;
  edge(n - 1, n - 1) += 0.5;
  CHECK(PerturbationPair(OperatorHandle(a, "a"), OperatorHandle(edge, "edge"))
            .decay_profile()
            .flagged);
}

TEST_CASE("schrodinger builder lays down the Dirichlet stencil plus potential") {
  ModelSpec spec;
  spec.kind = ModelKind::schrodinger_1d;
  spec.n = 5;
  spec.dx = 0.25;
  spec.support_lo = 2;
  spec.support_hi = 2;
  spec.potential_base.assign(5, 0.0);
  spec.potential_perturbed.assign(5, 0.0);
  spec.potential_perturbed[2] = 3.0;
  PerturbationPair pair = build_model(spec);
  const double inv_h2 = 16.0;
  CHECK(pair.base().entries()(0, 0) == doctest::Approx(2.0 * inv_h2));
  CHECK(pair.base().entries()(1, 0) == doctest::Approx(-inv_h2));
  CHECK(pair.base().entries()(0, 2) == doctest::Approx(0.0));
  CHECK(pair.eta()(2, 2) == doctest::Approx(3.0));
  CHECK(pair.eta().norm() == doctest::Approx(3.0));
}

TEST_CASE("declared support window is enforced") {
  ModelSpec spec;
  spec.kind = ModelKind::schrodinger_1d;
  spec.n = 5;
  spec.dx = 0.25;
  spec.support_lo = 1;
  spec.support_hi = 2;
  spec.potential_perturbed.assign(5, 0.0);
  spec.potential_perturbed[4] = 1.0;  // outside the window
  CHECK_THROWS_AS(build_model(spec), validation_error);
}

TEST_CASE("model builders are deterministic in the seed") {
  ModelSpec spec;
  spec.kind = ModelKind::random_spd;
  spec.n = 12;
  spec.seed = 77;
  PerturbationPair one = build_model(spec);
  PerturbationPair two = build_model(spec);
  CHECK((one.base().entries() - two.base().entries()).norm() == 0.0);
  CHECK((one.perturbed().entries() - two.perturbed().entries()).norm() == 0.0);
  spec.seed = 78;
  CHECK((build_model(spec).base().entries() - one.base().entries()).norm() > 0.0);
}

TEST_CASE("boundary matrices of the full triangle") {
  HodgeComplexSpec complex;
  complex.simplices = {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}};
  const Eigen::MatrixXd d1 = boundary_matrix(complex, 1);
  Eigen::MatrixXd expected1(3, 3);
  expected1 << -1, -1, 0, 1, 0, -1, 0, 1, 1;
  CHECK((d1 - expected1).norm() == 0.0);
  const Eigen::MatrixXd d2 = boundary_matrix(complex, 2);
  Eigen::MatrixXd expected2(3, 1);
  expected2 << 1, -1, 1;
  CHECK((d2 - expected2).norm() == 0.0);
  CHECK((d1 * d2).norm() == 0.0);
}

TEST_CASE("missing faces are rejected") {
  HodgeComplexSpec complex;
  complex.simplices = {{{0}, {1}}, {{0, 1}, {1, 2}}};  // vertex 2 absent
  CHECK_THROWS_AS(build_hodge_tower(complex), validation_error);
}

TEST_CASE("weighted tower keeps Betti numbers and the chain condition") {
  HodgeComplexSpec complex;
  complex.simplices = {{{0}, {1}, {2}, {3}},
                       {{0, 1}, {0, 2}, {1, 2}, {2, 3}},
                       {{0, 1, 2}}};
  complex.weights_base = {{1, 1, 1, 1}, {1, 1, 1, 1}, {1}};
  complex.weights_perturbed = {{2.0, 0.5, 1.0, 1.5}, {0.7, 1.1, 1.3, 0.9}, {0.4}};
  auto tower = build_hodge_tower(complex);
  REQUIRE(tower.size() == 3);
  // one component, no loops after filling the triangle, no 2-cycles
  CHECK(tower[0].base().kernel_dimension() == 1);
  CHECK(tower[1].base().kernel_dimension() == 0);
  CHECK(tower[2].base().kernel_dimension() == 0);
  CHECK(tower[0].perturbed().kernel_dimension() == 1);
  CHECK(tower[1].perturbed().kernel_dimension() == 0);
  CHECK(tower[2].perturbed().kernel_dimension() == 0);
  CHECK(complex.euler_characteristic() == 4 - 4 + 1);
  // Betti alternating sum equals the simplex-count alternating sum
  const int betti_sum = 1 - 0 + 0;
  CHECK(betti_sum == complex.euler_characteristic());
}

TEST_CASE("graph length scaling matches the continuum normalization") {
  ModelSpec spec;
  spec.kind = ModelKind::path_graph;
  spec.n = 4;
  spec.length = 2.0;
  PerturbationPair pair = build_model(spec);
  const double scale = (4.0 / 2.0) * (4.0 / 2.0);
  CHECK(pair.base().entries()(0, 0) == doctest::Approx(scale));
  CHECK(pair.base().entries()(1, 1) == doctest::Approx(2.0 * scale));
}
