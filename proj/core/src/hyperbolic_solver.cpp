#include "hurwitz/hyperbolic_solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SparseCholesky>

namespace hurwitz {

namespace {

Eigen::VectorXd residual_vector(const DiscreteOperators& ops, const Eigen::VectorXd& u) {
  return ops.L * u + ops.curvature + (ops.area.array() * (2.0 * u.array()).exp()).matrix();
}

double energy(const DiscreteOperators& ops, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(ops.L * u) + ops.curvature.dot(u) + 0.5 * (ops.area.array() * (2.0 * u.array()).exp()).sum();
}

}  // namespace

double liouville_residual(const DiscreteOperators& ops, const Eigen::VectorXd& u) {
  return residual_vector(ops, u).cwiseAbs().maxCoeff() / ops.area.mean();
}

Eigen::VectorXd hyperbolic_mass(const DiscreteOperators& ops, const MetricField& metric) {
  return (ops.area.array() * (2.0 * metric.u.array()).exp()).matrix();
}

MetricField solve_liouville(const CoverSurface& s, const DiscreteOperators& ops, const SolverOptions& opt,
                            const std::optional<Eigen::VectorXd>& initial) {
  const int chi = 2 - 2 * s.genus;
  if (chi >= 0) throw std::invalid_argument("solve_liouville: needs chi(X) < 0, got " + std::to_string(chi));
  const Eigen::Index n = ops.area.size();
  Eigen::VectorXd u;
  if (initial) {
    if (initial->size() != n) throw std::invalid_argument("solve_liouville: initial guess has wrong size");
    u = *initial;
  } else {
    const double total = ops.area.sum();
    u = Eigen::VectorXd::Constant(n, 0.5 * std::log(-2.0 * std::numbers::pi * chi / total));
  }

  MetricField out;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  Eigen::SparseMatrix<double> J = ops.L;
  // Make sure the diagonal is stored so the pattern is fixed across iterations.
  for (Eigen::Index i = 0; i < n; ++i) J.coeffRef(i, i) += 0.0;
  J.makeCompressed();
  solver.analyzePattern(J);

  const double scale = ops.area.mean();
  Eigen::VectorXd R = residual_vector(ops, u);
  double res = R.cwiseAbs().maxCoeff() / scale;
  out.residual_history.push_back(res);
  double E = energy(ops, u);
  int it = 0;
  for (; it < opt.max_iterations && res > opt.tolerance; ++it) {
    const Eigen::VectorXd m2 = 2.0 * (ops.area.array() * (2.0 * u.array()).exp()).matrix();
    J = ops.L;
    for (Eigen::Index i = 0; i < n; ++i) J.coeffRef(i, i) += m2[i];
    solver.factorize(J);
    if (solver.info() != Eigen::Success)
      throw SolverFailure("solve_liouville: Jacobian factorization failed (not SPD)", out.residual_history);
    const Eigen::VectorXd du = solver.solve(-R);
    // Backtracking on the convex energy; a full step is taken near the solution.
    double t = 1.0;
    const double slope = R.dot(du);
    Eigen::VectorXd trial;
    double Et = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      trial = u + t * du;
      Et = energy(ops, trial);
      if (Et <= E + 1e-4 * t * slope || std::abs(Et - E) <= 1e-14 * std::abs(E)) break;
      t *= 0.5;
    }
    u = trial;
    E = Et;
    R = residual_vector(ops, u);
    res = R.cwiseAbs().maxCoeff() / scale;
    out.residual_history.push_back(res);
  }
  if (res > opt.tolerance)
    throw SolverFailure("solve_liouville: no convergence after " + std::to_string(it) +
                            " iterations, residual " + std::to_string(res),
                        out.residual_history);
  out.u = u;
  out.iterations = it;
  out.residual = res;
  out.log_g = 2.0 * u + ops.log_density;
  out.area = (ops.area.array() * (2.0 * u.array()).exp()).sum();
  return out;
}

PoissonResult screened_poisson(const DiscreteOperators& ops, const MetricField& metric, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = ops.area.size();
  if (rhs.size() != n) throw std::invalid_argument("screened_poisson: rhs has wrong size");
  const Eigen::VectorXd M = hyperbolic_mass(ops, metric);
  Eigen::SparseMatrix<double> K = 0.5 * ops.L;
  for (Eigen::Index i = 0; i < n; ++i) K.coeffRef(i, i) += M[i];
  K.makeCompressed();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(K);
  if (solver.info() != Eigen::Success) throw SolverFailure("screened_poisson: factorization failed", {});
  const Eigen::VectorXd b = M.cwiseProduct(rhs);
  PoissonResult r;
  r.phi = solver.solve(b);
  // One step of iterative refinement keeps the relative residual near roundoff.
  const Eigen::VectorXd e = b - K * r.phi;
  r.phi += solver.solve(e);
  const double nb = b.norm();
  r.residual = nb > 0.0 ? (K * r.phi - b).norm() / nb : (K * r.phi).norm();
  return r;
}

Eigen::VectorXd screened_residual(const DiscreteOperators& ops, const MetricField& metric, const Eigen::VectorXd& phi,
                                  const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd M = hyperbolic_mass(ops, metric);
  return ((0.5 * (ops.L * phi)).array() / M.array() + phi.array() - rhs.array()).matrix();
}

}  // namespace hurwitz
