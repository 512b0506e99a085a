#include <gtest/gtest.h>

#include <numbers>

#include <Eigen/Eigenvalues>

#include "hurwitz/operators.hpp"

using namespace hurwitz;

namespace {

CoverSurface hexagon(int refinement) {
  MeshOptions m;
  m.refinement = refinement;
  return build_cover(roots_of_unity_configuration(make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2}))), m);
}

}  // namespace

TEST(Operators, StiffnessIsSymmetricWithZeroRowSums) {
  const auto s = hexagon(1);
  for (auto bg : {Background::smooth, Background::piecewise_flat}) {
    OperatorOptions o;
    o.background = bg;
    const auto ops = assemble_operators(s, {}, o);
    const Eigen::SparseMatrix<double> asym = ops.L - Eigen::SparseMatrix<double>(ops.L.transpose());
    EXPECT_LT(asym.norm(), 1e-12 * ops.L.norm());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.L.rows());
    EXPECT_LT((ops.L * ones).lpNorm<Eigen::Infinity>(), 1e-10);
    EXPECT_TRUE((ops.area.array() > 0.0).all());
  }
}

TEST(Operators, StiffnessIsPositiveSemidefinite) {
  const auto s = hexagon(0 + 1);
  const auto ops = assemble_operators(s);
  const Eigen::MatrixXd L = Eigen::MatrixXd(ops.L);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-9);
  // connected surface: exactly one zero mode
  EXPECT_GT(es.eigenvalues()(1), 1e-8);
}

TEST(Operators, GaussBonnetIsExact) {
  for (int r : {1, 2}) {
    const auto s = hexagon(r);
    for (auto bg : {Background::smooth, Background::piecewise_flat}) {
      OperatorOptions o;
      o.background = bg;
      const auto ops = assemble_operators(s, {}, o);
      EXPECT_NEAR(ops.curvature.sum(), 2 * std::numbers::pi * euler_characteristic(s), 1e-9);
      EXPECT_NEAR(ops.euler_term, 2 * std::numbers::pi * euler_characteristic(s), 1e-12);
    }
  }
}

TEST(Operators, PiecewiseFlatAreaApproachesCoveredSpheres) {
  OperatorOptions o;
  o.background = Background::piecewise_flat;
  double prev = 1e9;
  for (int r : {1, 2, 3}) {
    const auto ops = assemble_operators(hexagon(r), {}, o);
    const double err = std::abs(ops.area.sum() - 2 * 4 * std::numbers::pi);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 0.01 * 8 * std::numbers::pi);
}

TEST(Operators, ConeAnglesOfThePiecewiseFlatBackground) {
  const auto s = hexagon(1);
  const auto defects = angle_defects(s);
  for (const auto& rv : s.ramification) EXPECT_LT(defects[rv.vertex], -std::numbers::pi);  // 2 pi - ~4 pi
}
