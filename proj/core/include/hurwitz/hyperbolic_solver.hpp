#ifndef HURWITZ_HYPERBOLIC_SOLVER_HPP
#define HURWITZ_HYPERBOLIC_SOLVER_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "hurwitz/operators.hpp"
#include "hurwitz/surface_mesh.hpp"

namespace hurwitz {

// Discrete Liouville equation for the curvature -1 metric g = e^{2u} g0:
//   R_i(u) = (L u)_i + kappa_i + A_i e^{2 u_i} = 0,
// the gradient of the strictly convex energy
//   E(u) = 1/2 u.L u + kappa.u + 1/2 sum A_i e^{2u_i}.
// In a chart, omega = g i dz ^ dzbar with d dbar log g = g.

struct SolverOptions {
  /// Acceptance: max_i |R_i| / mean(A) below this.
  double tolerance = 1e-10;
  int max_iterations = 60;
};

struct MetricField {
  Eigen::VectorXd u;
  /// log g in each vertex's home chart.
  Eigen::VectorXd log_g;
  std::vector<double> residual_history;
  int iterations = 0;
  /// sum A_i e^{2 u_i}
  double area = 0.0;
  double residual = 0.0;
};

class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

private:
  std::vector<double> history_;
};

MetricField solve_liouville(const CoverSurface& surface, const DiscreteOperators& ops,
                            const SolverOptions& options = {},
                            const std::optional<Eigen::VectorXd>& initial = std::nullopt);

/// Scaled residual max_i |R_i(u)| / mean(A).
double liouville_residual(const DiscreteOperators& ops, const Eigen::VectorXd& u);

/// Hyperbolic vertex masses A_i e^{2 u_i}.
Eigen::VectorXd hyperbolic_mass(const DiscreteOperators& ops, const MetricField& metric);

struct PoissonResult {
  Eigen::VectorXd phi;
  double residual = 0.0;  // ||(L/2 + M) phi - M rhs|| / ||M rhs||
};

/// Solves (box + 1) phi = rhs with box = -g^{-1} d dbar, i.e. (L/2 + M) phi = M rhs.
PoissonResult screened_poisson(const DiscreteOperators& ops, const MetricField& metric, const Eigen::VectorXd& rhs);

/// (L/2 + M) phi / M - rhs at every vertex: the strong residual of the screened equation.
Eigen::VectorXd screened_residual(const DiscreteOperators& ops, const MetricField& metric, const Eigen::VectorXd& phi,
                                  const Eigen::VectorXd& rhs);

}  // namespace hurwitz

#endif
