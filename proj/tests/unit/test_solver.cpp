#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hurwitz/hyperbolic_solver.hpp"

using namespace hurwitz;

namespace {

struct Fixture {
  CoverSurface s;
  DiscreteOperators ops;
};

const Fixture& hexagon() {
  static const Fixture f = [] {
    MeshOptions m;
    m.refinement = 1;
    Fixture x;
    x.s = build_cover(roots_of_unity_configuration(make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2}))), m);
    x.ops = assemble_operators(x.s);
    return x;
  }();
  return f;
}

}  // namespace

TEST(Liouville, AreaIsMinusTwoPiChi) {
  const auto& f = hexagon();
  const auto m = solve_liouville(f.s, f.ops);
  EXPECT_NEAR(m.area, 4 * std::numbers::pi, 1e-8);
  EXPECT_LT(m.residual, 1e-10);
  EXPECT_NEAR(hyperbolic_mass(f.ops, m).sum(), m.area, 1e-12);
  EXPECT_LT(liouville_residual(f.ops, m.u), 1e-10);
}

TEST(Liouville, TerminalConvergenceIsQuadratic) {
  const auto& f = hexagon();
  const auto m = solve_liouville(f.s, f.ops);
  const auto& r = m.residual_history;
  ASSERT_GE(r.size(), 4u);
  int quadratic_steps = 0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k)
    if (r[k] < 1e-2 && r[k + 1] > 1e-12) {
      EXPECT_LT(r[k + 1], 5.0 * r[k] * r[k]) << "step " << k;
      ++quadratic_steps;
    }
  EXPECT_GE(quadratic_steps, 1);
}

TEST(Liouville, SolutionDoesNotDependOnTheStart) {
  const auto& f = hexagon();
  const auto a = solve_liouville(f.s, f.ops);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Eigen::VectorXd u0(f.s.vertex_count());
  for (int i = 0; i < u0.size(); ++i) u0[i] = uni(rng);
  const auto b = solve_liouville(f.s, f.ops, {}, u0);
  EXPECT_LT((a.u - b.u).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Liouville, IterationCapRaisesSolverFailure) {
  const auto& f = hexagon();
  SolverOptions o;
  o.max_iterations = 1;
  try {
    solve_liouville(f.s, f.ops, o);
    FAIL() << "expected SolverFailure";
  } catch (const SolverFailure& e) {
    EXPECT_FALSE(e.history().empty());
  }
}

TEST(ScreenedPoisson, ConstantsAreFixed) {
  const auto& f = hexagon();
  const auto m = solve_liouville(f.s, f.ops);
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(f.s.vertex_count(), 2.5);
  const auto p = screened_poisson(f.ops, m, rhs);
  EXPECT_LT((p.phi.array() - 2.5).abs().maxCoeff(), 1e-9);
  EXPECT_LT(p.residual, 1e-10);
}

TEST(ScreenedPoisson, IntegralIsConserved) {
  const auto& f = hexagon();
  const auto m = solve_liouville(f.s, f.ops);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd rhs(f.s.vertex_count());
  for (int i = 0; i < rhs.size(); ++i) rhs[i] = uni(rng);
  const auto p = screened_poisson(f.ops, m, rhs);
  const Eigen::VectorXd M = hyperbolic_mass(f.ops, m);
  EXPECT_NEAR(M.dot(p.phi), M.dot(rhs), 1e-9 * M.dot(rhs));
  EXPECT_LT(screened_residual(f.ops, m, p.phi, rhs).lpNorm<Eigen::Infinity>(), 1e-8);
  // maximum principle for (box + 1)
  EXPECT_GT(p.phi.minCoeff(), 0.0);
  EXPECT_LT(p.phi.maxCoeff(), 1.0);
}
