#include "hurwitz/wp_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCholesky>

namespace hurwitz {

namespace {

double log_abs2(cplx z) { return std::log(std::norm(z)); }

cplx home_zeta(const CoverVertex& v) { return v.chart.kind == ChartKind::Z ? 2.0 * v.coord : cplx(1.0); }

double home_h(const CoverSurface& s, const CoverVertex& v) {
  if (v.chart.kind != ChartKind::Z) return target_metric(v.coord);
  return target_metric(v.coord * v.coord + s.canonical_points[static_cast<std::size_t>(v.chart.disk)]);
}

// d_zbar log g in every home chart; neighbours are converted with
// log g^(c) = log g^(h) + log|F_c'|^2 - log|F_h'|^2.
Eigen::VectorXcd dbar_log_g(const CoverSurface& s, const RecoveryStencil& r, const Deformation& def,
                            const Eigen::VectorXd& log_g) {
  const int nv = s.vertex_count();
  Eigen::VectorXcd out(nv);
  for (int i = 0; i < nv; ++i) {
    const ChartId& ci = s.vertices[static_cast<std::size_t>(i)].chart;
    cplx acc = 0.0;
    for (int k = r.offset[static_cast<std::size_t>(i)]; k < r.offset[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = r.patch[static_cast<std::size_t>(k)];
      const auto& vj = s.vertices[static_cast<std::size_t>(j)];
      double l = log_g[j];
      if (vj.chart != ci)
        l += log_abs2(chart_derivative(s, ci, r.coord[static_cast<std::size_t>(k)])) -
             log_abs2(chart_derivative(s, vj.chart, vertex_coordinate(s, j, def)));
      if (!std::isfinite(l)) throw std::runtime_error("dbar_log_g: chart conversion through a ramification vertex");
      acc += r.dzbar[static_cast<std::size_t>(k)] * l;
    }
    out[i] = acc;
  }
  return out;
}

// d_zbar of the vertical vector field component a, converted between charts as
// a^(c) = (d_s F_h - d_s F_c) / F_c' + a^(h) F_h' / F_c'.
Eigen::VectorXcd dbar_vector(const CoverSurface& s, const RecoveryStencil& r, const Deformation& def,
                             const Eigen::VectorXcd& a) {
  const int nv = s.vertex_count();
  Eigen::VectorXcd out(nv);
  for (int i = 0; i < nv; ++i) {
    const ChartId& ci = s.vertices[static_cast<std::size_t>(i)].chart;
    const cplx dsc = chart_s_derivative(s, ci, def);
    cplx acc = 0.0;
    for (int k = r.offset[static_cast<std::size_t>(i)]; k < r.offset[static_cast<std::size_t>(i) + 1]; ++k) {
      const int j = r.patch[static_cast<std::size_t>(k)];
      const auto& vj = s.vertices[static_cast<std::size_t>(j)];
      cplx v = a[j];
      if (vj.chart != ci) {
        const cplx fc = chart_derivative(s, ci, r.coord[static_cast<std::size_t>(k)]);
        v = (chart_s_derivative(s, vj.chart, def) - dsc) / fc + a[j] * chart_derivative(s, vj.chart, vj.coord) / fc;
      }
      acc += r.dzbar[static_cast<std::size_t>(k)] * v;
    }
    out[i] = acc;
  }
  return out;
}

int worker_count(const FamilyOptions& o) {
  if (o.threads > 0) return o.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Member {
  DiscreteOperators ops;
  MetricField metric;
};

Member solve_member(const CoverSurface& s, const std::vector<cplx>& velocity, cplx sp, const FamilyOptions& o,
                    const std::optional<Eigen::VectorXd>& initial) {
  Member m;
  m.ops = assemble_operators(s, Deformation{velocity, sp, o.blend_inner, o.blend_outer, o.vertex_velocity}, o.operators);
  m.metric = solve_liouville(s, m.ops, o.solver, initial);
  return m;
}

FamilyStencil stencil_from(const CoverSurface& s, const std::vector<cplx>& velocity, double eps, const FamilyOptions& o,
                           const Member* center) {
  const auto pts = stencil_points(eps);
  FamilyStencil st;
  st.velocity = velocity;
  st.epsilon = eps;
  st.blend_inner = o.blend_inner;
  st.blend_outer = o.blend_outer;
  st.vertex_velocity = o.vertex_velocity;
  Member c0 = center ? *center : solve_member(s, velocity, 0.0, o, std::nullopt);
  const Eigen::VectorXd u0 = c0.metric.u;
  std::array<Member, 4> rest;
  const int workers = worker_count(o);
  if (workers > 1) {
    std::vector<std::future<Member>> jobs;
    for (int m = 1; m < 5; ++m)
      jobs.push_back(std::async(std::launch::async, solve_member, std::cref(s), std::cref(velocity),
                                pts[static_cast<std::size_t>(m)], std::cref(o), std::optional<Eigen::VectorXd>(u0)));
    for (int m = 0; m < 4; ++m) rest[static_cast<std::size_t>(m)] = jobs[static_cast<std::size_t>(m)].get();
  } else {
    for (int m = 1; m < 5; ++m)
      rest[static_cast<std::size_t>(m - 1)] = solve_member(s, velocity, pts[static_cast<std::size_t>(m)], o, u0);
  }
  st.operators[0] = std::move(c0.ops);
  st.metric[0] = std::move(c0.metric);
  for (int m = 1; m < 5; ++m) {
    st.operators[static_cast<std::size_t>(m)] = std::move(rest[static_cast<std::size_t>(m - 1)].ops);
    st.metric[static_cast<std::size_t>(m)] = std::move(rest[static_cast<std::size_t>(m - 1)].metric);
  }
  return st;
}

struct Integrals {
  double g0 = 0.0, g1 = 0.0, fiber = 0.0;
};

Integrals integrals(const WPTensors& t) { return {wp_g0_direct(t), wp_g1(t), fiber_integral(t)}; }

}  // namespace

std::array<cplx, 5> stencil_points(double e) { return {0.0, e, -e, cplx(0.0, e), cplx(0.0, -e)}; }

double admissible_epsilon(const CoverSurface& s, const std::vector<cplx>& velocity) {
  if (velocity.size() != static_cast<std::size_t>(s.b))
    throw std::invalid_argument("admissible_epsilon: velocity needs one entry per branch point");
  double e = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.b; ++j) {
    const double c = std::abs(velocity[static_cast<std::size_t>(j)]);
    if (c == 0.0) continue;
    const auto& d = s.disks[static_cast<std::size_t>(j)];
    // Chordal edge length converted to w near the branch point.
    const double hw = s.base.edge_length * (1.0 + std::norm(d.center)) / 2.0;
    e = std::min({e, d.radius_w / (8.0 * c), hw / (4.0 * c)});
  }
  if (!std::isfinite(e)) throw std::invalid_argument("admissible_epsilon: the family does not move any branch point");
  return e;
}

std::vector<cplx> normalize_phase(std::vector<cplx> v) {
  for (const cplx& c : v)
    if (c != 0.0) {
      const cplx p = std::conj(c) / std::abs(c);
      for (cplx& x : v) x *= p;
      break;
    }
  return v;
}

FamilyStencil build_stencil(const CoverSurface& s, const std::vector<cplx>& velocity, double eps,
                            const FamilyOptions& o) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_stencil: epsilon must be positive");
  if (eps > admissible_epsilon(s, velocity) * (1.0 + 1e-12))
    throw std::invalid_argument("build_stencil: epsilon exceeds 1/8 of the moving disk radius or a quarter edge");
  return stencil_from(s, velocity, eps, o, nullptr);
}

WPTensors assemble_tensors(const CoverSurface& s, const FamilyStencil& st, RecoveryKind kind) {
  const int nv = s.vertex_count();
  const auto pts = stencil_points(st.epsilon);
  const double e = st.epsilon;
  std::array<Eigen::VectorXcd, 5> G;
  for (int m = 1; m < 5; ++m) {
    const Deformation def = st.at(pts[static_cast<std::size_t>(m)]);
    const auto r = build_recovery(s, def, kind);
    G[static_cast<std::size_t>(m)] = dbar_log_g(s, r, def, st.metric[static_cast<std::size_t>(m)].log_g);
  }
  const Deformation def0 = st.at(0.0);
  const auto r0 = build_recovery(s, def0, kind);

  WPTensors t;
  const auto& l = st.metric;
  t.log_g = l[0].log_g;
  t.g = t.log_g.array().exp();
  // Differences follow the vertices, which move holomorphically in s with
  // velocity x'. For f = log g at fixed chart coordinate and F(s) = f(x(s), s):
  //   d_s (d_zbar f)(x(s), s) = g_szbar + g x',
  //   d_s d_sbar F = g_ssbar + 2 Re(g_szbar conj(x')) + g |x'|^2.
  Eigen::VectorXcd xv(nv);
  for (int i = 0; i < nv; ++i) xv[i] = vertex_velocity(s, i, st.at(0.0));
  const Eigen::VectorXd Fss = (l[1].log_g + l[2].log_g + l[3].log_g + l[4].log_g - 4.0 * l[0].log_g) / (4.0 * e * e);
  // d_s = (d_x - i d_y) / 2 in s = x + i y.
  const Eigen::VectorXcd Gs = 0.5 * ((G[1] - G[2]) / (2.0 * e) - cplx(0.0, 1.0) * (G[3] - G[4]) / (2.0 * e));
  t.g_szbar = Gs - xv.cwiseProduct(t.g.cast<cplx>());
  t.g_ssbar.resize(nv);
  for (int i = 0; i < nv; ++i)
    t.g_ssbar[i] = Fss[i] - 2.0 * std::real(t.g_szbar[i] * std::conj(xv[i])) - t.g[i] * std::norm(xv[i]);
  t.a = -t.g_szbar.cwiseQuotient(t.g.cast<cplx>());
  t.mu = dbar_vector(s, r0, def0, t.a);
  t.phi = t.g_ssbar - (t.g_szbar.cwiseAbs2().array() / t.g.array()).matrix();
  t.zeta.resize(nv);
  t.xi.resize(nv);
  t.h.resize(nv);
  for (int i = 0; i < nv; ++i) {
    const auto& v = s.vertices[static_cast<std::size_t>(i)];
    t.zeta[i] = home_zeta(v);
    t.xi[i] = chart_s_derivative(s, v.chart, def0);
    t.h[i] = home_h(s, v);
  }
  t.weight = st.operators[0].measure;
  return t;
}

double wp_g0_direct(const WPTensors& t) {
  return (t.phi.array() * t.zeta.cwiseAbs2().array() * t.h.array() * t.weight.array()).sum();
}

double wp_g1(const WPTensors& t) {
  const Eigen::ArrayXd u = (t.a.array() * t.zeta.array() + t.xi.array()).abs2();
  return (u * t.h.array() * t.g.array() * t.weight.array()).sum();
}

double fiber_integrand(double gss, cplx gsz, double g, cplx zeta, cplx xi) {
  return gss * std::norm(zeta) - 2.0 * std::real(gsz * zeta * std::conj(xi)) + g * std::norm(xi);
}

double split_integrand(double gss, cplx gsz, double g, cplx zeta, cplx xi) {
  const double phi = gss - std::norm(gsz) / g;
  const cplx a = -gsz / g;
  return phi * std::norm(zeta) + std::norm(a * zeta + xi) * g;
}

double fiber_integral(const WPTensors& t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < t.g.size(); ++i)
    acc += fiber_integrand(t.g_ssbar[i], t.g_szbar[i], t.g[i], t.zeta[i], t.xi[i]) * t.h[i] * t.weight[i];
  return acc;
}

HarmonicBeltrami harmonic_beltrami(const CoverSurface& s, const std::vector<cplx>& velocity, const MetricField& metric) {
  // P1 vector fields, one complex value per vertex in its home chart. On a face
  // in chart c the corner values become a^(c) = alpha + beta a^(h) with the
  // transition rule of dbar_vector, and d_zbar is the constant face gradient.
  // The minimizer of sum_f |d_zbar a|^2 dA_hyp is the harmonic representative.
  const int nv = s.vertex_count();
  const int nf = s.face_count();
  const Deformation def{velocity, 0.0};
  std::vector<std::array<cplx, 3>> row(static_cast<std::size_t>(nf));
  std::vector<cplx> rhs_face(static_cast<std::size_t>(nf));
  std::vector<double> mass(static_cast<std::size_t>(nf));
  std::vector<ChartId> chart(static_cast<std::size_t>(nf));
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(nf) * 9);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nv);
  for (int f = 0; f < nf; ++f) {
    const auto F = static_cast<std::size_t>(f);
    const auto& t = s.faces[F];
    chart[F] = face_chart(s, f);
    const ChartId& c = chart[F];
    const auto x = face_coordinates(s, f, c, def);
    const double area = 0.5 * std::imag(std::conj(x[1] - x[0]) * (x[2] - x[0]));
    const cplx dsc = chart_s_derivative(s, c, def);
    double gsum = 0.0;
    cplx bf = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto K = static_cast<std::size_t>(k);
      const int j = t[K];
      const auto& vj = s.vertices[static_cast<std::size_t>(j)];
      const cplx fc = chart_derivative(s, c, x[K]);
      const cplx fh = chart_derivative(s, vj.chart, vj.coord);
      const cplx alpha = vj.chart == c ? cplx(0.0) : (chart_s_derivative(s, vj.chart, def) - dsc) / fc;
      const cplx beta = vj.chart == c ? cplx(1.0) : fh / fc;
      const cplx grad = cplx(0.0, 1.0) * (x[(K + 2) % 3] - x[(K + 1) % 3]) / (2.0 * area);
      const cplx d = 0.5 * grad;
      row[F][K] = d * beta;
      bf += d * alpha;
      gsum += std::exp(vj.chart == c ? metric.log_g[j] : metric.log_g[j] + log_abs2(fc) - log_abs2(fh));
    }
    rhs_face[F] = bf;
    mass[F] = 2.0 * area * gsum / 3.0;  // i dz ^ dzbar = 2 dx dy
    for (int k = 0; k < 3; ++k) {
      const int i = t[static_cast<std::size_t>(k)];
      b[i] -= mass[F] * std::conj(row[F][static_cast<std::size_t>(k)]) * bf;
      for (int l = 0; l < 3; ++l)
        trip.emplace_back(i, t[static_cast<std::size_t>(l)],
                          mass[F] * std::conj(row[F][static_cast<std::size_t>(k)]) * row[F][static_cast<std::size_t>(l)]);
    }
  }
  Eigen::SparseMatrix<cplx> H(nv, nv);
  H.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<cplx>> solver(H);
  if (solver.info() != Eigen::Success) throw SolverFailure("harmonic_beltrami: factorization failed", {});
  HarmonicBeltrami out;
  out.a = solver.solve(b);
  out.a += solver.solve(b - H * out.a);

  out.mu = Eigen::VectorXcd::Zero(nv);
  out.mu2 = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd wsum = Eigen::VectorXd::Zero(nv);
  for (int f = 0; f < nf; ++f) {
    const auto F = static_cast<std::size_t>(f);
    const auto& t = s.faces[F];
    cplx mu = rhs_face[F];
    for (int k = 0; k < 3; ++k) mu += row[F][static_cast<std::size_t>(k)] * out.a[t[static_cast<std::size_t>(k)]];
    out.norm2 += mass[F] * std::norm(mu);
    const auto x = face_coordinates(s, f, chart[F], def);
    for (int k = 0; k < 3; ++k) {
      const int i = t[static_cast<std::size_t>(k)];
      const auto& vi = s.vertices[static_cast<std::size_t>(i)];
      // mu^(h) = mu^(c) (F_c'/F_h') conj(F_h'/F_c') keeps |mu| and rotates the phase.
      const cplx q = chart_derivative(s, vi.chart, vi.coord) / chart_derivative(s, chart[F], x[static_cast<std::size_t>(k)]);
      const cplx mh = vi.chart == chart[F] ? mu : mu * std::conj(q) / q;
      out.mu[i] += mass[F] * mh;
      out.mu2[i] += mass[F] * std::norm(mu);
      wsum[i] += mass[F];
    }
  }
  out.mu = out.mu.cwiseQuotient(wsum.cast<cplx>());
  out.mu2 = out.mu2.cwiseQuotient(wsum);
  return out;
}

namespace {
Eigen::VectorXd mu_norm2(const WPTensors& t) { return t.mu2.size() == t.mu.size() ? t.mu2 : Eigen::VectorXd(t.mu.cwiseAbs2()); }
}  // namespace

PdeG0 wp_g0_pde(const WPTensors& t, const DiscreteOperators& ops, const MetricField& metric) {
  const Eigen::VectorXd rhs = mu_norm2(t);
  const auto sol = screened_poisson(ops, metric, rhs);
  PdeG0 r;
  r.phi = sol.phi;
  r.residual = sol.residual;
  r.value = (sol.phi.array() * t.zeta.cwiseAbs2().array() * t.h.array() * t.weight.array()).sum();
  return r;
}

EllResidual ell_residual(const WPTensors& t, const DiscreteOperators& ops, const MetricField& metric) {
  const Eigen::VectorXd rhs = mu_norm2(t);
  const Eigen::VectorXd M = hyperbolic_mass(ops, metric);
  auto norm = [&](const Eigen::VectorXd& x) { return std::sqrt((M.array() * x.array().square()).sum()); };
  EllResidual out;
  const Eigen::VectorXd r = screened_residual(ops, metric, t.phi, rhs);
  const double nr = norm(rhs);
  out.strong = nr > 0.0 ? norm(r) / nr : norm(r);
  // (box + 1)^{-1} applied to the residual is phi - phi_pde.
  const auto sol = screened_poisson(ops, metric, rhs);
  const double np = norm(sol.phi);
  out.relative = np > 0.0 ? norm(t.phi - sol.phi) / np : norm(t.phi - sol.phi);
  return out;
}

std::pair<double, double> curvature_scalings(double wp) {
  if (wp < 0.0) throw std::invalid_argument("curvature_scalings: wp must be nonnegative");
  const double c = wp / (4.0 * std::numbers::pi * std::numbers::pi);
  return {c, c};
}

double motion_epsilon(const CoverSurface& s, const std::vector<cplx>& V) {
  if (V.size() != static_cast<std::size_t>(s.vertex_count()))
    throw std::invalid_argument("motion_epsilon: one velocity per vertex expected");
  std::vector<double> shortest(V.size(), std::numeric_limits<double>::infinity());
  const Deformation def0;
  for (const auto& e : s.edges)
    for (int k = 0; k < 2; ++k) {
      const int i = e[static_cast<std::size_t>(k)], j = e[static_cast<std::size_t>(1 - k)];
      const auto& vi = s.vertices[static_cast<std::size_t>(i)];
      const double d = std::abs(coordinate_in(s, j, vi.chart, def0, vi.coord) - vi.coord);
      shortest[static_cast<std::size_t>(i)] = std::min(shortest[static_cast<std::size_t>(i)], d);
    }
  double eps = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < V.size(); ++i)
    if (std::abs(V[i]) > 0.0) eps = std::min(eps, 0.2 * shortest[i] / std::abs(V[i]));
  return eps;
}

namespace {

struct Pass {
  FamilyStencil stencil;
  WPTensors tensors;
  Integrals integrals;
  double change = 0.0;
};

// One family computation with fixed vertex paths, halving epsilon until the
// integrals settle.
Pass run_pass(const CoverSurface& s, const std::vector<cplx>& velocity, const FamilyOptions& o, double eps,
              const Member& center) {
  Pass p;
  p.stencil = stencil_from(s, velocity, eps, o, &center);
  p.tensors = assemble_tensors(s, p.stencil, o.recovery);
  p.integrals = integrals(p.tensors);
  if (o.richardson_tolerance <= 0.0) return p;
  for (int k = 0;; ++k) {
    FamilyStencil st2 = stencil_from(s, velocity, 0.5 * p.stencil.epsilon, o, &center);
    WPTensors t2 = assemble_tensors(s, st2, o.recovery);
    const Integrals I2 = integrals(t2);
    const Integrals& I = p.integrals;
    const double scale = std::max(std::abs(I2.g0) + std::abs(I2.g1), 1e-300);
    p.change = std::max({std::abs(I2.g0 - I.g0), std::abs(I2.g1 - I.g1), std::abs(I2.fiber - I.fiber)}) / scale;
    p.stencil = std::move(st2);
    p.tensors = std::move(t2);
    p.integrals = I2;
    if (p.change <= o.richardson_tolerance || k + 1 >= o.max_halvings) break;
  }
  return p;
}

}  // namespace

WPResult compute_wp(const CoverSurface& s, const std::vector<cplx>& velocity_in, const FamilyOptions& o_in,
                    WPTensors* tensors_out) {
  const auto velocity = normalize_phase(velocity_in);
  const double emax = admissible_epsilon(s, velocity);
  if (o_in.epsilon > emax * (1.0 + 1e-12))
    throw std::invalid_argument("compute_wp: epsilon exceeds 1/8 of the moving disk radius or a quarter edge");

  FamilyOptions o = o_in;
  const Member center = solve_member(s, velocity, 0.0, o, std::nullopt);
  const HarmonicBeltrami hb = harmonic_beltrami(s, velocity, center.metric);
  // Vertices follow the harmonic lift, so the s-stencil only sees the
  // distortion mu itself and the discretization error barely moves.
  if (o.vertex_velocity.empty() && o.follow_lift) o.vertex_velocity.assign(hb.a.data(), hb.a.data() + hb.a.size());
  auto step = [&](const FamilyOptions& opt) {
    double e = opt.epsilon > 0.0 ? opt.epsilon : 0.5 * emax;
    if (!opt.vertex_velocity.empty()) e = std::min(e, motion_epsilon(s, opt.vertex_velocity));
    return e;
  };
  Pass p = run_pass(s, velocity, o, step(o), center);
  const FamilyStencil& st = p.stencil;
  WPTensors& t = p.tensors;
  t.mu = hb.mu;
  t.mu2 = hb.mu2;
  const Integrals& I = p.integrals;
  const double change = p.change;

  WPResult r;
  r.epsilon = st.epsilon;
  r.richardson_change = change;
  r.g0_direct = I.g0;
  r.g1 = I.g1;
  r.fiber_integral = I.fiber;
  r.wp_total = I.g0 + I.g1;
  const auto pde = wp_g0_pde(t, st.operators[0], st.metric[0]);
  r.g0_pde = pde.value;
  r.poisson_residual = pde.residual;
  const auto ell = ell_residual(t, st.operators[0], st.metric[0]);
  r.ell_residual = ell.relative;
  r.ell_strong_residual = ell.strong;
  r.mu_norm2 = hb.norm2;
  std::tie(r.det_curvature, r.deligne_curvature) = curvature_scalings(std::max(0.0, r.wp_total));
  r.phi_min = t.phi.minCoeff();
  r.mu_max = t.mu.cwiseAbs().maxCoeff();
  double dmax = 0.0, fmax = 0.0;
  for (Eigen::Index i = 0; i < t.g.size(); ++i) {
    const double f = fiber_integrand(t.g_ssbar[i], t.g_szbar[i], t.g[i], t.zeta[i], t.xi[i]);
    const double p = split_integrand(t.g_ssbar[i], t.g_szbar[i], t.g[i], t.zeta[i], t.xi[i]);
    dmax = std::max(dmax, std::abs(f - p));
    fmax = std::max(fmax, std::abs(f));
  }
  r.identity_residual = fmax > 0.0 ? dmax / fmax : dmax;
  for (const auto& m : st.metric) r.max_solver_residual = std::max(r.max_solver_residual, m.residual);
  r.hyperbolic_area = st.metric[0].area;
  if (tensors_out) *tensors_out = std::move(t);
  return r;
}

}  // namespace hurwitz
