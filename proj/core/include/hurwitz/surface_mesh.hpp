#ifndef HURWITZ_SURFACE_MESH_HPP
#define HURWITZ_SURFACE_MESH_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hurwitz/combinatorics.hpp"
#include "hurwitz/icosphere.hpp"
#include "hurwitz/permutation.hpp"
#include "hurwitz/sphere.hpp"

namespace hurwitz {

// A simple branched cover of P1 is triangulated in a canonical frame of the
// sphere (a rotation chosen from the branch points alone, so that rotating the
// input rotates nothing in the mesh). In that frame the base point of the
// cut system is infinity and every cut is the radial ray from a branch point
// to infinity. Three kinds of holomorphic charts cover the surface:
//   W   : the canonical coordinate w (|w| <= 1 on the base),
//   V   : v = 1/w (|w| > 1),
//   Z_j : z with w = z^2 + p_j + c_j s around the j-th ramification point.
// Chart coordinates are fixed once and for all; a family parameter s only moves
// the images of the Z charts.

enum class ChartKind : std::uint8_t { W = 0, V = 1, Z = 2 };

struct ChartId {
  ChartKind kind = ChartKind::W;
  int disk = -1;  // branch index for Z charts
  friend auto operator<=>(const ChartId&, const ChartId&) = default;
};

std::string to_string(const ChartId& c);

class DegenerateGeometry : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct BranchConfiguration {
  std::vector<cplx> points;  // finite coordinates, one per transposition
  MonodromyDatum monodromy;  // base genus 0
};

/// b-th roots of unity with the given monodromy.
BranchConfiguration roots_of_unity_configuration(const MonodromyDatum& d);

struct MeshOptions {
  int refinement = 3;
  /// Chordal radius of the ramification disks.
  double disk_radius = 0.2;
  /// Icosphere level used for refinement 0.
  int level_offset = 2;
  /// Minimum number of points on a disk rim (rounded up to a multiple of 4).
  int min_rim = 16;
};

struct CoverVertex {
  int sheet = 0;  // -1 for vertices of a ramification disk
  ChartId chart;
  cplx coord;
  int base_vertex = -1;  // vertex of the base triangulation below, -1 inside z-disks
};

struct RamificationVertex {
  int vertex = -1;
  int branch = -1;
  double cone_angle = 0.0;  // background angle sum, 4 pi for simple ramification
};

struct BranchDisk {
  int branch = -1;
  cplx center;             // canonical coordinate of the branch point
  double radius_w = 0.0;   // rim radius in w
  double radius_z = 0.0;   // rim radius in z
  int rim_count = 0;       // points on the w-rim (the z-rim has twice as many)
  int ram_vertex = -1;
  std::array<int, 2> sheets{};  // sheets exchanged by the transposition
};

/// Triangulated sphere below the cover, in the canonical frame.
struct BaseMesh {
  std::vector<Projective> points;
  std::vector<Triangle> faces;
  std::vector<int> face_disk;  // branch index of the w-disk containing the face, or -1
  std::vector<int> disk_center;
  std::vector<std::vector<int>> disk_rim;   // rim vertices in angular order
  std::vector<std::vector<int>> annulus;    // faces around each disk, in angular order
  double edge_length = 0.0;  // mean chordal edge length of the icosphere part
};

struct CoverSurface {
  int n = 0;
  int genus = 0;
  int b = 0;
  BranchConfiguration config;
  SphereRotation frame;                 // canonical = frame(user)
  std::vector<cplx> canonical_points;
  std::vector<double> cut_angles;       // argument of each radial cut

  std::vector<CoverVertex> vertices;
  std::vector<Triangle> faces;          // counterclockwise in every holomorphic chart
  std::vector<std::array<int, 2>> edges;
  std::vector<int> face_base;           // base face below, -1 for z-disk faces
  std::vector<int> face_sheet;          // lifted sheet, -1 for z-disk faces
  std::vector<int> lift;                // cover face over (base face, sheet), or -1
  std::vector<RamificationVertex> ramification;
  std::vector<BranchDisk> disks;
  BaseMesh base;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
};

/// Canonical frame of a point set: rotation of the sphere depending only on the
/// points (and their order), equivariant under rotations of the input.
SphereRotation canonical_frame(const std::vector<cplx>& points);

CoverSurface build_cover(const BranchConfiguration& config, const MeshOptions& options = {});

int euler_characteristic(const CoverSurface& surface);

/// Sheet permutation obtained by walking the cover once around branch point j
/// (through the faces surrounding its disk).
Permutation monodromy_around(const CoverSurface& surface, int j);

// ---------------------------------------------------------------------------
// One-parameter families. `velocity[j]` is the canonical-frame velocity of
// branch point j; the Z_j chart image is w = z^2 + p_j + velocity[j] s.

//
// Mesh vertices of a moving disk do not stay at fixed z. A vertex at rest
// coordinate z0 sits over w = z0^2 + p_j + velocity[j] s (1 - q(|z0|^2)), where
// q is 0 on the inner part of the disk and 1 near the rim. The rim and
// everything outside it therefore stay put in w, and the deformation of the
// triangulation is spread smoothly over the outer part of the disk instead of
// one ring of faces. The vertex path z(s) is holomorphic in s.
struct Deformation {
  std::vector<cplx> velocity;  // empty means the undeformed surface
  cplx s{0.0};
  /// Blend between moving with the branch point and staying fixed in w, as
  /// fractions of the z-rim radius.
  double blend_inner = 0.45;
  double blend_outer = 0.9;
  /// Optional explicit vertex velocities in the home charts, replacing the
  /// blend: vertex v sits at coord + s * vertex_velocity[v].
  std::vector<cplx> vertex_velocity;

  cplx shift(int j) const { return velocity.empty() ? cplx(0.0) : velocity[static_cast<std::size_t>(j)] * s; }
  cplx speed(int j) const { return velocity.empty() ? cplx(0.0) : velocity[static_cast<std::size_t>(j)]; }
};

/// Canonical velocities for moving user branch point k with user velocity v.
std::vector<cplx> single_point_velocity(const CoverSurface& surface, int k, cplx v = 1.0);

/// Home-chart coordinate of vertex v in the deformed mesh.
cplx vertex_coordinate(const CoverSurface& s, int v, const Deformation& def);
/// d/ds of vertex_coordinate at s = 0 (zero outside moving disks).
cplx vertex_velocity(const CoverSurface& s, int v, const Deformation& def);

/// Point of P1 below a chart coordinate.
Projective chart_image(const CoverSurface& s, const ChartId& c, cplx x, const Deformation& def);
Projective vertex_image(const CoverSurface& s, int v, const Deformation& def);
/// Coordinate of a point of P1 in chart c; for Z charts the square root nearest
/// `reference` is taken.
cplx chart_coordinate(const CoverSurface& s, const ChartId& c, const Projective& p, const Deformation& def,
                      cplx reference);
/// Coordinate of vertex v in chart c (exact when c is its home chart).
cplx coordinate_in(const CoverSurface& s, int v, const ChartId& c, const Deformation& def, cplx reference);

/// F_c(x) = image in w; its x-derivative, second derivative and s-derivative.
cplx chart_derivative(const CoverSurface& s, const ChartId& c, cplx x);
cplx chart_second_derivative(const CoverSurface& s, const ChartId& c, cplx x);
cplx chart_s_derivative(const CoverSurface& s, const ChartId& c, const Deformation& def);

/// Chart used for geometric computations on face f.
ChartId face_chart(const CoverSurface& s, int f);

std::vector<Vec3> sphere_positions(const CoverSurface& s, const Deformation& def);

}  // namespace hurwitz

#endif
