#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hurwitz/wp_geometry.hpp"

using namespace hurwitz;

namespace {

CoverSurface hexagon(int refinement) {
  MeshOptions m;
  m.refinement = refinement;
  return build_cover(roots_of_unity_configuration(make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2}))), m);
}

}  // namespace

TEST(WPIdentity, PointwiseSplitOnRandomTensors) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double g = std::exp(3.0 * uni(rng));
    const double gss = 4.0 * uni(rng);
    const cplx gsz(2.0 * uni(rng), 2.0 * uni(rng)), zeta(uni(rng), uni(rng)), xi(uni(rng), uni(rng));
    const double scale = std::abs(gss) * std::norm(zeta) + 2.0 * std::abs(gsz) * std::abs(zeta) * std::abs(xi) +
                         g * std::norm(xi) + std::norm(gsz) * std::norm(zeta) / g;
    worst = std::max(worst, std::abs(fiber_integrand(gss, gsz, g, zeta, xi) - split_integrand(gss, gsz, g, zeta, xi)) /
                                scale);
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(WPIdentity, CurvatureScalings) {
  const auto [det, deligne] = curvature_scalings(1.5);
  EXPECT_EQ(det, deligne);
  EXPECT_EQ(det, 1.5 / (4 * std::numbers::pi * std::numbers::pi));
}

TEST(Stencil, PointsAndPhase) {
  const auto p = stencil_points(0.1);
  EXPECT_EQ(p[0], cplx(0.0));
  EXPECT_EQ(p[1], cplx(0.1));
  EXPECT_EQ(p[2], cplx(-0.1));
  EXPECT_EQ(p[3], cplx(0.0, 0.1));
  EXPECT_EQ(p[4], cplx(0.0, -0.1));
  const auto v = normalize_phase({cplx(0.0), cplx(0.0, 2.0), cplx(1.0, 1.0)});
  EXPECT_NEAR(std::abs(v[1] - cplx(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(v[2]), std::sqrt(2.0), 1e-15);
}

TEST(HarmonicBeltrami, TrivialFamilyHasNoBeltramiDifferential) {
  // Moving every branch point by w -> (1 + s) w is a Moebius family: mu = 0.
  const auto s = hexagon(1);
  const auto ops = assemble_operators(s);
  const auto m = solve_liouville(s, ops);
  const auto hb = harmonic_beltrami(s, s.canonical_points, m);
  EXPECT_LT(hb.norm2, 1e-18);
  const auto single = harmonic_beltrami(s, single_point_velocity(s, 0), m);
  EXPECT_GT(single.norm2, 1e-3);
}

TEST(ComputeWP, ExactRouteAndPositivity) {
  const auto s = hexagon(2);
  WPTensors t;
  const auto r = compute_wp(s, single_point_velocity(s, 0), {}, &t);
  EXPECT_LE(std::abs(r.fiber_integral - (r.g0_direct + r.g1)) / r.fiber_integral, 1e-10);
  EXPECT_LE(r.identity_residual, 1e-12);
  EXPECT_GT(r.wp_total, 0.0);
  EXPECT_GT(r.g0_direct, 0.0);
  EXPECT_GT(r.g1, 0.0);
  EXPECT_GT(r.phi_min, 0.0);
  EXPECT_GT(t.phi.minCoeff(), 0.0);
  EXPECT_NEAR(r.hyperbolic_area, 4 * std::numbers::pi, 1e-8);
  EXPECT_EQ(r.det_curvature, r.deligne_curvature);
  EXPECT_LT(std::abs(r.fiber_integral - (r.g0_pde + r.g1)) / r.fiber_integral, 0.02);
  EXPECT_LT(r.ell_residual, 0.1);
}

TEST(ComputeWP, ScalesQuadraticallyInTheVelocity) {
  const auto s = hexagon(1);
  auto v = single_point_velocity(s, 2);
  const auto a = compute_wp(s, v);
  for (auto& x : v) x *= cplx(0.0, 2.0);
  const auto b = compute_wp(s, v);
  EXPECT_NEAR(b.wp_total, 4.0 * a.wp_total, 1e-6 * b.wp_total);
}
