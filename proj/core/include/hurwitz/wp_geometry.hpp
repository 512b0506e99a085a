#ifndef HURWITZ_WP_GEOMETRY_HPP
#define HURWITZ_WP_GEOMETRY_HPP

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hurwitz/hyperbolic_solver.hpp"
#include "hurwitz/operators.hpp"
#include "hurwitz/recovery.hpp"
#include "hurwitz/surface_mesh.hpp"

namespace hurwitz {

// Weil-Petersson type norms of a one-parameter family X_s -> P1 obtained by
// moving branch points inside their disks (identity outside). With
// omega_X = g i dz ^ dzbar on the fibers, beta the covering map, zeta = d beta/dz,
// xi = d beta/ds at fixed z and h the round density on P1:
//   g_ssbar = d_s d_sbar log g,  g_szbar = d_s d_zbar log g,
//   a = -g_szbar / g,  mu = d_zbar a,  phi = g_ssbar - |g_szbar|^2 / g,
//   G0 = int phi |zeta|^2 h(beta) i dz ^ dzbar,
//   G1 = int |a zeta + xi|^2 h(beta) g i dz ^ dzbar,
//   fiber = int (g_ssbar |zeta|^2 - 2 Re(g_szbar zeta conj(xi)) + g |xi|^2) h(beta) i dz ^ dzbar,
// and fiber = G0 + G1 pointwise. phi also solves (box + 1) phi = |mu|^2, which
// gives the independent route G0_pde.

/// Round density of curvature +1 on P1, omega_Y = h(w) i dw ^ dwbar.
inline double target_metric(cplx w) { return target_density(w); }

/// The five parameter values 0, +eps, -eps, +i eps, -i eps.
std::array<cplx, 5> stencil_points(double epsilon);

struct FamilyOptions {
  OperatorOptions operators;
  SolverOptions solver;
  RecoveryKind recovery = RecoveryKind::quadratic;
  /// Blend zone of the moving disk (see Deformation).
  double blend_inner = 0.45;
  double blend_outer = 0.9;
  /// Explicit vertex velocities (home charts); empty uses the blend.
  std::vector<cplx> vertex_velocity;
  /// Move the vertices along the harmonic lift (ignored when vertex_velocity
  /// is given); off falls back to the blend.
  bool follow_lift = true;
  /// Step of the s-stencil; 0 picks half the largest admissible step.
  double epsilon = 0.0;
  /// Halve epsilon until two consecutive steps agree on every integral to this
  /// relative tolerance (0 disables the check and uses epsilon as given).
  double richardson_tolerance = 1e-4;
  int max_halvings = 4;
  /// Worker threads for the stencil solves (0 = hardware concurrency).
  int threads = 0;
};

struct FamilyStencil {
  std::vector<cplx> velocity;  // canonical-frame velocity of every branch point
  double epsilon = 0.0;
  double blend_inner = 0.45, blend_outer = 0.9;
  std::vector<cplx> vertex_velocity;
  Deformation at(cplx s) const { return Deformation{velocity, s, blend_inner, blend_outer, vertex_velocity}; }
  std::array<DiscreteOperators, 5> operators;
  std::array<MetricField, 5> metric;
};

struct WPTensors {
  Eigen::VectorXd log_g, g;
  Eigen::VectorXcd g_szbar;
  Eigen::VectorXd g_ssbar;
  Eigen::VectorXcd a, mu;
  Eigen::VectorXd mu2;  // |mu|^2 averaged over the faces at each vertex (empty: use |mu|^2)
  Eigen::VectorXd phi;
  Eigen::VectorXcd zeta, xi;
  Eigen::VectorXd h;       // h(beta) in the target chart matching the home chart
  Eigen::VectorXd weight;  // quadrature weight of i dz ^ dzbar in the home chart
};

struct WPResult {
  double g0_direct = 0.0;
  double g0_pde = 0.0;
  double g1 = 0.0;
  double wp_total = 0.0;  // g0_direct + g1
  double fiber_integral = 0.0;
  double det_curvature = 0.0;
  double deligne_curvature = 0.0;
  double identity_residual = 0.0;  // max pointwise |fiber - split| / scale
  double ell_residual = 0.0;         // ||(box + 1)^{-1} residual|| / ||phi_pde||, hyperbolic L2
  double ell_strong_residual = 0.0;  // nodal residual ||(box + 1) phi - |mu|^2|| / || |mu|^2 ||
  double mu_norm2 = 0.0;             // int |mu|^2 dA_hyp
  double phi_min = 0.0;
  double mu_max = 0.0;
  double epsilon = 0.0;
  double richardson_change = 0.0;  // relative change of wp_total from 2 eps to eps
  double poisson_residual = 0.0;
  double max_solver_residual = 0.0;
  double hyperbolic_area = 0.0;
};

/// Largest stencil step keeping every moving point well inside its disk and
/// the annulus faces uninverted.
double admissible_epsilon(const CoverSurface& surface, const std::vector<cplx>& velocity);

/// Largest step for which every vertex moves by at most a fifth of its
/// shortest edge when following `vertex_velocity` (home charts).
double motion_epsilon(const CoverSurface& surface, const std::vector<cplx>& vertex_velocity);

/// Rotates the velocity vector so that its first nonzero entry is real and
/// positive. The norms only depend on |d/ds|, so this is exact.
std::vector<cplx> normalize_phase(std::vector<cplx> velocity);

FamilyStencil build_stencil(const CoverSurface& surface, const std::vector<cplx>& velocity, double epsilon,
                            const FamilyOptions& options = {});

WPTensors assemble_tensors(const CoverSurface& surface, const FamilyStencil& stencil,
                           RecoveryKind recovery = RecoveryKind::quadratic);

double wp_g0_direct(const WPTensors& t);
double wp_g1(const WPTensors& t);
double fiber_integral(const WPTensors& t);

/// Harmonic Beltrami differential of the family, computed as the minimizer of
/// sum_f |d_zbar a|^2 dA_hyp over piecewise linear vertical fields a whose
/// chart transitions carry the branch point velocities. Independent of the
/// s-differences; mu2 is the face average of |mu|^2 at every vertex.
struct HarmonicBeltrami {
  Eigen::VectorXcd a;
  Eigen::VectorXcd mu;
  Eigen::VectorXd mu2;
  double norm2 = 0.0;  // int |mu|^2 dA_hyp
};
HarmonicBeltrami harmonic_beltrami(const CoverSurface& surface, const std::vector<cplx>& velocity,
                                   const MetricField& metric);

struct PdeG0 {
  double value = 0.0;
  Eigen::VectorXd phi;
  double residual = 0.0;
};
PdeG0 wp_g0_pde(const WPTensors& t, const DiscreteOperators& ops, const MetricField& metric);

/// Residual of (box + 1) phi = |mu|^2 for the finite-difference phi, in the
/// hyperbolic L2 norm. `relative` measures it after applying (box + 1)^{-1},
/// i.e. ||phi - phi_pde|| / ||phi_pde||; `strong` is the nodal residual, which
/// the cotan Laplacian only resolves weakly on unstructured meshes.
struct EllResidual {
  double relative = 0.0;
  double strong = 0.0;
};
EllResidual ell_residual(const WPTensors& t, const DiscreteOperators& ops, const MetricField& metric);

/// First Chern form of the determinant line and the Deligne pairing curvature,
/// both wp / (4 pi^2).
std::pair<double, double> curvature_scalings(double wp);

/// Pointwise fiber integrand and the split phi |zeta|^2 + |a zeta + xi|^2 g
/// (without the common h factor).
double fiber_integrand(double g_ssbar, cplx g_szbar, double g, cplx zeta, cplx xi);
double split_integrand(double g_ssbar, cplx g_szbar, double g, cplx zeta, cplx xi);

/// Full pipeline: stencil with Richardson step selection, tensors, integrals.
WPResult compute_wp(const CoverSurface& surface, const std::vector<cplx>& velocity, const FamilyOptions& options = {},
                    WPTensors* tensors_out = nullptr);

}  // namespace hurwitz

#endif
