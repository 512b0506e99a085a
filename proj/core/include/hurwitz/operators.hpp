#ifndef HURWITZ_OPERATORS_HPP
#define HURWITZ_OPERATORS_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hurwitz/surface_mesh.hpp"

namespace hurwitz {

// Two conformal backgrounds are available.
//  piecewise_flat: vertex positions on the round sphere with chordal edges. The
//    cone points carry angle 4 pi, curvature is the angle defect, and discrete
//    Gauss-Bonnet is exact. The conformal factor to the hyperbolic metric has a
//    log singularity at every ramification vertex.
//  smooth: the pulled-back round metric with the cone factor divided out near
//    each ramification point by a C^2 cutoff in the z-disk. It is a smooth
//    metric on X, so the conformal factor is smooth and chart derivatives of it
//    converge. Cotan weights come from chart coordinates (conformal invariance).
//    Curvature is the weak form of -d dbar log g0 plus chart-transition fluxes,
//    which keeps discrete Gauss-Bonnet exact here as well.

enum class Background { smooth, piecewise_flat };

struct OperatorOptions {
  Background background = Background::smooth;
  /// The cutoff equals 1 for |z| <= inner * r_z and 0 for |z| >= outer * r_z.
  double cutoff_inner = 0.3;
  double cutoff_outer = 0.85;
  /// Faces whose chart area is below this fraction of the mean are rejected.
  double degenerate_ratio = 1e-10;
};

struct DiscreteOperators {
  Background background = Background::smooth;
  /// Cotan stiffness, symmetric positive semidefinite, rows sum to zero.
  Eigen::SparseMatrix<double> L;
  /// Background area of each vertex cell.
  Eigen::VectorXd area;
  /// Integrated background curvature of each vertex cell.
  Eigen::VectorXd curvature;
  /// Integral of i dz ^ dzbar over the vertex cell, in the vertex's home chart.
  Eigen::VectorXd measure;
  /// log of the background density g0 (omega_0 = g0 i dz ^ dzbar) in the home chart.
  Eigen::VectorXd log_density;
  /// 2 pi chi(X).
  double euler_term = 0.0;
};

DiscreteOperators assemble_operators(const CoverSurface& surface, const Deformation& def = {},
                                     const OperatorOptions& options = {});

/// Background density of the smooth background at chart coordinate x (log).
double smooth_log_density(const CoverSurface& s, const ChartId& c, cplx x, const Deformation& def,
                          const OperatorOptions& options);
/// -d d-bar log g0 at x for the smooth background (equals K0 * g0).
double smooth_curvature_density(const CoverSurface& s, const ChartId& c, cplx x, const Deformation& def,
                                const OperatorOptions& options);

/// Angle defects of the piecewise-flat background (2 pi minus angle sum).
Eigen::VectorXd angle_defects(const CoverSurface& s, const Deformation& def = {});

/// Coordinates of the corners of face f in chart c.
std::array<cplx, 3> face_coordinates(const CoverSurface& s, int f, const ChartId& c, const Deformation& def);

}  // namespace hurwitz

#endif
