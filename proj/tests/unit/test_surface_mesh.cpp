#include <gtest/gtest.h>

#include <map>
#include <numbers>

#include "hurwitz/icosphere.hpp"
#include "hurwitz/surface_mesh.hpp"

using namespace hurwitz;

namespace {

MonodromyDatum hexagon_datum() { return make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2})); }

CoverSurface hexagon(int refinement) {
  MeshOptions m;
  m.refinement = refinement;
  return build_cover(roots_of_unity_configuration(hexagon_datum()), m);
}

}  // namespace

TEST(Icosphere, CountsAndEuler) {
  for (int level = 0; level <= 3; ++level) {
    const auto s = icosphere(level);
    EXPECT_EQ(static_cast<int>(s.vertices.size()) - static_cast<int>(s.faces.size()) / 2, 2);
    for (const auto& v : s.vertices) EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  }
}

TEST(Icosphere, PolarDiskIsSymmetric) {
  const auto d = polar_disk(16, 0.5);
  EXPECT_EQ(d.outer.size(), 16u);
  double area = 0.0;
  for (const auto& f : d.faces) {
    const cplx a = d.points[f[0]], b = d.points[f[1]], c = d.points[f[2]];
    const double ar = 0.5 * std::imag(std::conj(b - a) * (c - a));
    EXPECT_GT(ar, 0.0);
    area += ar;
  }
  // inscribed polygon of 16 sides
  EXPECT_NEAR(area, 0.5 * 16 * 0.25 * std::sin(2 * std::numbers::pi / 16), 1e-12);
}

TEST(BuildCover, TopologyOfTheGenusTwoCover) {
  for (int r : {1, 2}) {
    const auto s = hexagon(r);
    EXPECT_EQ(s.genus, 2);
    EXPECT_EQ(euler_characteristic(s), -2);
    EXPECT_EQ(s.ramification.size(), 6u);
    for (const auto& rv : s.ramification) EXPECT_NEAR(rv.cone_angle, 4 * std::numbers::pi, 1e-3);  // chordal angle sum, not exact
    // every edge is shared by exactly two faces, with opposite orientations
    std::map<std::pair<int, int>, int> seen;
    for (const auto& f : s.faces)
      for (int c = 0; c < 3; ++c) ++seen[{f[c], f[(c + 1) % 3]}];
    for (const auto& [e, count] : seen) {
      EXPECT_EQ(count, 1);
      EXPECT_EQ(seen.count({e.second, e.first}), 1u);
    }
    EXPECT_EQ(seen.size(), 2 * s.edges.size());
  }
}

TEST(BuildCover, SheetGluingRealizesTheMonodromy) {
  const auto s = hexagon(1);
  for (int j = 0; j < s.b; ++j) EXPECT_EQ(monodromy_around(s, j), Permutation::transposition(2, 1, 2));

  const auto d = enumerate_classes(3, 4).back();
  MeshOptions m;
  m.refinement = 1;
  const auto t = build_cover(roots_of_unity_configuration(d), m);
  EXPECT_EQ(t.genus, 0);
  EXPECT_EQ(euler_characteristic(t), 2);
  for (int j = 0; j < t.b; ++j) EXPECT_EQ(monodromy_around(t, j), d.transpositions[static_cast<std::size_t>(j)]);
}

TEST(BuildCover, FacesAreCounterclockwiseInTheirCharts) {
  const auto s = hexagon(1);
  // face_coordinates lives in operators; here only the chart of each vertex is
  // checked against its own coordinate.
  for (int v = 0; v < s.vertex_count(); ++v) {
    const auto& cv = s.vertices[static_cast<std::size_t>(v)];
    const cplx x = coordinate_in(s, v, cv.chart, {}, cv.coord);
    EXPECT_NEAR(std::abs(x - cv.coord), 0.0, 1e-12);
  }
}

TEST(BuildCover, CanonicalFrameIsRotationEquivariant) {
  auto cfg = roots_of_unity_configuration(hexagon_datum());
  const auto R = SphereRotation::about_axis(Vec3(0.2, 0.7, -0.3).normalized(), 1.1);
  auto rotated = cfg;
  for (auto& p : rotated.points) p = R.apply(p);
  const auto a = canonical_frame(cfg.points);
  const auto b = canonical_frame(rotated.points);
  for (const auto& p : cfg.points) EXPECT_NEAR(std::abs(a.apply(p) - b.apply(R.apply(p))), 0.0, 1e-10);

  MeshOptions m;
  m.refinement = 1;
  const auto s1 = build_cover(cfg, m);
  const auto s2 = build_cover(rotated, m);
  ASSERT_EQ(s1.vertex_count(), s2.vertex_count());
  ASSERT_EQ(s1.faces, s2.faces);
  for (int v = 0; v < s1.vertex_count(); ++v)
    EXPECT_NEAR(std::abs(s1.vertices[v].coord - s2.vertices[v].coord), 0.0, 1e-9);
}

TEST(BuildCover, RefinementGrowsTheMesh) {
  const auto a = hexagon(1), b = hexagon(2);
  EXPECT_GT(b.vertex_count(), 2 * a.vertex_count());
  EXPECT_LT(b.base.edge_length, a.base.edge_length);
}

TEST(BuildCover, CloseBranchPointsAreRejected) {
  auto cfg = roots_of_unity_configuration(hexagon_datum());
  cfg.points[1] = cfg.points[0] + cplx(0.01, 0.0);
  EXPECT_THROW(build_cover(cfg), DegenerateGeometry);
}

// The bisector and antipode candidates all fail here; the grid fallback must
// find a base point instead of tripping over one that lands on a branch point.
TEST(BuildCover, IrregularPointsFindAFrame) {
  BranchConfiguration cfg{{{1, 0}, {0, 1.2}, {-1, 0.1}, {0, -0.9}, {3, 2.5}, {0.1, 0.05}}, hexagon_datum()};
  MeshOptions m;
  m.refinement = 1;
  const auto s = build_cover(cfg, m);
  EXPECT_EQ(euler_characteristic(s), -2);
  for (int j = 0; j < 6; ++j) EXPECT_EQ(monodromy_around(s, j), cfg.monodromy.transpositions[static_cast<std::size_t>(j)]);
}

TEST(Family, ChartImagesFollowTheBranchPoint) {
  const auto s = hexagon(1);
  const auto vel = single_point_velocity(s, 0);
  Deformation def;
  def.velocity = vel;
  def.s = cplx(0.01, 0.02);
  const auto& disk = s.disks[0];
  // the ramification vertex sits over the moved branch point
  const auto img = vertex_image(s, disk.ram_vertex, def);
  const cplx w = img.z1 / img.z2;
  EXPECT_NEAR(std::abs(w - (s.canonical_points[0] + vel[0] * def.s)), 0.0, 1e-12);
  // velocities of the other points vanish
  for (std::size_t j = 1; j < vel.size(); ++j) EXPECT_EQ(vel[j], cplx(0.0));
}
