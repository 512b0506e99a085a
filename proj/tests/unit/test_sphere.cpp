#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hurwitz/sphere.hpp"
#include "hyperdual.hpp"

using namespace hurwitz;

using hurwitz::testing::ddbar_log_round_density;

TEST(TargetMetric, TotalArea) {
  EXPECT_NEAR(target_area_by_quadrature(64), 4.0 * std::numbers::pi, 1e-6);
}

TEST(TargetMetric, CurvatureIsPlusOnePointwise) {
  std::mt19937 rng(11);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx w(nd(rng), nd(rng));
    const double h = target_density(w);
    // K = -(1/h) d d-bar log h, independently of the closed form
    EXPECT_NEAR(-ddbar_log_round_density(w) / h, 1.0, 1e-10) << w;
    EXPECT_NEAR(target_log_laplacian(w), ddbar_log_round_density(w), 1e-10 * h);
  }
}

TEST(TargetMetric, SameFormulaInTheOtherChart) {
  for (cplx w : {cplx(0.3, 0.1), cplx(-2.0, 1.5), cplx(0.0, 7.0)}) {
    const cplx v = 1.0 / w;
    // h(w) |dw|^2 = h(v) |dv|^2 with dv = -dw / w^2
    EXPECT_NEAR(target_density(w), target_density(v) / std::norm(w * w), 1e-14);
  }
}

TEST(SphereRotation, IsometryOfTheRoundMetric) {
  std::mt19937 rng(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    const auto R = SphereRotation::about_axis(Vec3(nd(rng), nd(rng), nd(rng)).normalized(), 3.0 * nd(rng));
    const cplx w(nd(rng), nd(rng));
    EXPECT_NEAR(target_density(R.apply(w)) * std::norm(R.derivative(w)), target_density(w), 1e-12);
    EXPECT_NEAR((R.apply(to_sphere(w)) - to_sphere(R.apply(w))).norm(), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(R.inverse().apply(R.apply(w)) - w), 0.0, 1e-10 * (1.0 + std::abs(w)));
  }
}

TEST(SphereRotation, ToNorthAndPolar) {
  const Vec3 x = to_sphere(cplx(0.4, -0.7));
  const auto R = SphereRotation::to_north(x);
  EXPECT_NEAR((R.apply(x) - Vec3(0, 0, 1)).norm(), 0.0, 1e-12);
  const auto P = SphereRotation::polar(std::numbers::pi / 3);
  EXPECT_NEAR(std::abs(P.apply(cplx(1.0)) - std::polar(1.0, std::numbers::pi / 3)), 0.0, 1e-14);
}

TEST(Stereographic, RoundTrip) {
  for (cplx w : {cplx(0.0), cplx(1.0, 2.0), cplx(-30.0, 0.5)}) {
    const auto p = from_sphere(to_sphere(w));
    EXPECT_NEAR(std::abs(p.z1 / p.z2 - w), 0.0, 1e-12 * (1.0 + std::norm(w)));
  }
  EXPECT_NEAR((to_sphere(Projective::infinity()) - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(chordal_distance(cplx(0.0), cplx(1.0)), std::sqrt(2.0), 1e-14);
}
