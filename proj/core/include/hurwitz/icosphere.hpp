#ifndef HURWITZ_ICOSPHERE_HPP
#define HURWITZ_ICOSPHERE_HPP

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Core>

namespace hurwitz {

using Triangle = std::array<int, 3>;

struct SphereMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Triangle> faces;  // counterclockwise seen from outside
};

/// Loop-free midpoint subdivision of the icosahedron (0, +-1, +-phi) and its
/// cyclic permutations. The point set is invariant under sign flips of each
/// coordinate, and for level >= 1 both poles are vertices.
SphereMesh icosphere(int level);

/// Mean edge length of a sphere mesh (chordal).
double mean_edge_length(const SphereMesh& mesh);

/// Structured triangulation of the disk |x| <= radius: a center vertex and
/// concentric rings whose counts are multiples of 4 (so the mesh is invariant
/// under x -> i x and x -> conj(x)). The last ring has exactly `outer_count`
/// points at angles 2 pi l / outer_count. Faces are counterclockwise.
struct PolarDisk {
  std::vector<std::complex<double>> points;  // index 0 is the center
  std::vector<Triangle> faces;
  std::vector<int> outer;  // indices of the outer ring in angular order
};
PolarDisk polar_disk(int outer_count, double radius);

/// Triangulates the annulus between an inner loop and an outer loop, both in
/// counterclockwise angular order. `inner_before_outer(i, j)` decides whether
/// the (i+1)-th inner point comes before the (j+1)-th outer point in angle
/// (indices unrolled past one turn). Emits counterclockwise triangles.
template <class Less>
std::vector<Triangle> zip_loops(const std::vector<int>& inner, const std::vector<int>& outer,
                                Less inner_before_outer) {
  std::vector<Triangle> tris;
  const int na = static_cast<int>(inner.size());
  const int nb = static_cast<int>(outer.size());
  tris.reserve(static_cast<std::size_t>(na + nb));
  int i = 0, j = 0;
  while (i < na || j < nb) {
    const bool take_inner = j >= nb || (i < na && inner_before_outer(i + 1, j + 1));
    const int a0 = inner[static_cast<std::size_t>(i % na)];
    const int b0 = outer[static_cast<std::size_t>(j % nb)];
    if (take_inner) {
      tris.push_back({a0, b0, inner[static_cast<std::size_t>((i + 1) % na)]});
      ++i;
    } else {
      tris.push_back({a0, b0, outer[static_cast<std::size_t>((j + 1) % nb)]});
      ++j;
    }
  }
  return tris;
}

}  // namespace hurwitz

#endif
