#ifndef HURWITZ_RECOVERY_HPP
#define HURWITZ_RECOVERY_HPP

#include <vector>

#include <Eigen/Core>

#include "hurwitz/surface_mesh.hpp"

namespace hurwitz {

// Vertex-wise recovery of d/dz and d/dzbar in the home chart of each vertex.
// A field is sampled on a patch around vertex i, every sample expressed in the
// home chart of i (the caller converts chart-dependent quantities), and the
// derivatives are linear combinations of the samples.

enum class RecoveryKind {
  quadratic,     // least-squares quadratic over the 2-ring
  face_average,  // area-weighted mean of the linear face gradients over the 1-ring
};

struct RecoveryStencil {
  RecoveryKind kind = RecoveryKind::quadratic;
  std::vector<int> offset;       // patch of vertex i is [offset[i], offset[i+1])
  std::vector<int> patch;        // patch vertices (vertex i itself included)
  std::vector<cplx> coord;       // patch vertex coordinates in the home chart of i
  std::vector<cplx> dz;          // weights for d/dz
  std::vector<cplx> dzbar;       // weights for d/dzbar

  int vertex_count() const { return static_cast<int>(offset.size()) - 1; }
};

RecoveryStencil build_recovery(const CoverSurface& s, const Deformation& def = {},
                               RecoveryKind kind = RecoveryKind::quadratic);

/// d/dzbar of a chart-independent complex field (a function on X).
Eigen::VectorXcd dbar_scalar(const RecoveryStencil& r, const Eigen::VectorXcd& values);
Eigen::VectorXcd d_scalar(const RecoveryStencil& r, const Eigen::VectorXcd& values);

/// Vertex adjacency lists.
std::vector<std::vector<int>> vertex_neighbours(const CoverSurface& s);

}  // namespace hurwitz

#endif
