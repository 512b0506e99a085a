#include "hurwitz/operators.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace hurwitz {

namespace {

struct Cutoff {
  double chi = 0.0, d1 = 0.0, d2 = 0.0;  // value and t-derivatives, t = |z|^2
};

// 1 - smootherstep in t between (inner r)^2 and (outer r)^2.
Cutoff cutoff(double t, double rz, const OperatorOptions& o) {
  const double a2 = o.cutoff_inner * o.cutoff_inner, b2 = o.cutoff_outer * o.cutoff_outer;
  const double D = rz * rz * (b2 - a2);
  const double s = (t / (rz * rz) - a2) / (b2 - a2);
  if (s <= 0.0) return {1.0, 0.0, 0.0};
  if (s >= 1.0) return {0.0, 0.0, 0.0};
  const double S = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  const double S1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  const double S2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  return {1.0 - S, -S1 / D, -S2 / (D * D)};
}

double chart_factor(const CoverSurface& s, const ChartId& c, cplx x) { return std::norm(chart_derivative(s, c, x)); }

}  // namespace

double smooth_log_density(const CoverSurface& s, const ChartId& c, cplx x, const Deformation& def,
                          const OperatorOptions& o) {
  if (c.kind != ChartKind::Z) return std::log(target_density(x));
  const auto& disk = s.disks[static_cast<std::size_t>(c.disk)];
  const cplx p = disk.center + def.shift(c.disk);
  const cplx w = x * x + p;
  const double t = std::norm(x);
  const Cutoff k = cutoff(t, disk.radius_z, o);
  double v = std::log(target_density(w)) + std::log(4.0);
  if (k.chi < 1.0) v += (1.0 - k.chi) * std::log(t);
  v += 0.5 * k.chi * (std::log1p(std::norm(w)) + std::log1p(std::norm(p)));
  return v;
}

double smooth_curvature_density(const CoverSurface& s, const ChartId& c, cplx x, const Deformation& def,
                                const OperatorOptions& o) {
  if (c.kind != ChartKind::Z) return target_density(x);
  const auto& disk = s.disks[static_cast<std::size_t>(c.disk)];
  const cplx p = disk.center + def.shift(c.disk);
  const cplx w = x * x + p;
  const double t = std::norm(x);
  const double h = target_density(w);
  const Cutoff k = cutoff(t, disk.radius_z, o);
  const double ell = std::log1p(std::norm(w)) + std::log1p(std::norm(p));
  // psi = (1 - chi) log t, eta = chi/2 (log(1+|w|^2) + log(1+|p|^2)).
  double ddbar_psi = 0.0;
  double ddbar_eta = k.chi * t * h;
  if (k.d1 != 0.0 || k.d2 != 0.0) {
    const double lt = std::log(t);
    ddbar_psi = -k.d1 * lt - t * k.d2 * lt - 2.0 * k.d1;
    const cplx cross = 2.0 * k.d1 * std::conj(x) * std::conj(x) * w / (1.0 + std::norm(w));
    ddbar_eta += 0.5 * ell * (k.d1 + t * k.d2) + cross.real();
  }
  return 4.0 * t * h - ddbar_psi - ddbar_eta;
}

std::array<cplx, 3> face_coordinates(const CoverSurface& s, int f, const ChartId& c, const Deformation& def) {
  const auto& t = s.faces[static_cast<std::size_t>(f)];
  std::array<cplx, 3> x{};
  cplx ref = 0.0;
  for (int k = 0; k < 3; ++k)
    if (s.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])].chart == c)
      ref = vertex_coordinate(s, t[static_cast<std::size_t>(k)], def);
  for (int k = 0; k < 3; ++k) x[static_cast<std::size_t>(k)] = coordinate_in(s, t[static_cast<std::size_t>(k)], c, def, ref);
  return x;
}

Eigen::VectorXd angle_defects(const CoverSurface& s, const Deformation& def) {
  const auto X = sphere_positions(s, def);
  Eigen::VectorXd k = Eigen::VectorXd::Constant(s.vertex_count(), 2.0 * std::numbers::pi);
  for (const auto& t : s.faces)
    for (int c = 0; c < 3; ++c) {
      const Vec3& P = X[static_cast<std::size_t>(t[static_cast<std::size_t>(c)])];
      const Vec3 e1 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 1) % 3)])] - P;
      const Vec3 e2 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 2) % 3)])] - P;
      k[t[static_cast<std::size_t>(c)]] -= std::atan2(e1.cross(e2).norm(), e1.dot(e2));
    }
  return k;
}

DiscreteOperators assemble_operators(const CoverSurface& s, const Deformation& def, const OperatorOptions& o) {
  const int nv = s.vertex_count();
  const int nf = s.face_count();
  DiscreteOperators ops;
  ops.background = o.background;
  ops.euler_term = 2.0 * std::numbers::pi * (2 - 2 * s.genus);
  ops.measure = Eigen::VectorXd::Zero(nv);
  ops.area = Eigen::VectorXd::Zero(nv);
  ops.curvature = Eigen::VectorXd::Zero(nv);
  ops.log_density = Eigen::VectorXd::Zero(nv);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nf) * 9);
  auto add_cot = [&](int i, int j, double w) {
    trip.emplace_back(i, j, -w);
    trip.emplace_back(j, i, -w);
    trip.emplace_back(i, i, w);
    trip.emplace_back(j, j, w);
  };

  // Chart areas and, for the smooth background, chart cotans.
  std::vector<double> chart_area(static_cast<std::size_t>(nf));
  std::vector<std::array<cplx, 3>> coords(static_cast<std::size_t>(nf));
  std::vector<ChartId> fchart(static_cast<std::size_t>(nf));
  double mean = 0.0;
  for (int f = 0; f < nf; ++f) {
    fchart[static_cast<std::size_t>(f)] = face_chart(s, f);
    const auto x = face_coordinates(s, f, fchart[static_cast<std::size_t>(f)], def);
    coords[static_cast<std::size_t>(f)] = x;
    const double a = 0.5 * std::imag(std::conj(x[1] - x[0]) * (x[2] - x[0]));
    chart_area[static_cast<std::size_t>(f)] = a;
    mean += std::abs(a);
  }
  mean /= std::max(1, nf);
  for (int f = 0; f < nf; ++f)
    if (!(chart_area[static_cast<std::size_t>(f)] > o.degenerate_ratio * mean))
      throw DegenerateGeometry("assemble_operators: face " + std::to_string(f) +
                               " is degenerate or inverted in chart " + to_string(fchart[static_cast<std::size_t>(f)]));

  for (int f = 0; f < nf; ++f) {
    const auto& t = s.faces[static_cast<std::size_t>(f)];
    const auto& x = coords[static_cast<std::size_t>(f)];
    const ChartId& cf = fchart[static_cast<std::size_t>(f)];
    for (int c = 0; c < 3; ++c) {
      const int v = t[static_cast<std::size_t>(c)];
      const auto& cv = s.vertices[static_cast<std::size_t>(v)];
      const double ratio = cf == cv.chart ? 1.0
                                          : chart_factor(s, cf, x[static_cast<std::size_t>(c)]) /
                                                chart_factor(s, cv.chart, vertex_coordinate(s, v, def));
      ops.measure[v] += (2.0 / 3.0) * chart_area[static_cast<std::size_t>(f)] * ratio;
    }
  }

  if (o.background == Background::smooth) {
    for (int f = 0; f < nf; ++f) {
      const auto& t = s.faces[static_cast<std::size_t>(f)];
      const auto& x = coords[static_cast<std::size_t>(f)];
      const double twice_area = 2.0 * chart_area[static_cast<std::size_t>(f)];
      for (int c = 0; c < 3; ++c) {
        const cplx e1 = x[static_cast<std::size_t>((c + 1) % 3)] - x[static_cast<std::size_t>(c)];
        const cplx e2 = x[static_cast<std::size_t>((c + 2) % 3)] - x[static_cast<std::size_t>(c)];
        const double cot = std::real(std::conj(e1) * e2) / twice_area;
        add_cot(t[static_cast<std::size_t>((c + 1) % 3)], t[static_cast<std::size_t>((c + 2) % 3)], 0.5 * cot);
      }
    }
    for (int v = 0; v < nv; ++v) {
      const auto& cv = s.vertices[static_cast<std::size_t>(v)];
      ops.log_density[v] = smooth_log_density(s, cv.chart, vertex_coordinate(s, v, def), def, o);
      ops.area[v] = std::exp(ops.log_density[v]) * ops.measure[v];
    }
    // Curvature in weak form: kappa_v = 1/2 sum_f (L_f log g0^{(f)})_v with each face in
    // its own chart, plus the jump of the harmonic transition log|F2'/F1'|^2 across
    // edges where the face chart changes. The jump flux is 2 d arg(F2'/F1'), so the
    // total telescopes to 2 pi chi exactly. Nodal quadrature of the closed form
    // cannot resolve the cutoff band, which carries large curvature of both signs.
    auto log_density_in = [&](int v, const ChartId& c, cplx x) {
      const auto& cv = s.vertices[static_cast<std::size_t>(v)];
      if (c == cv.chart) return ops.log_density[v];
      return ops.log_density[v] + std::log(chart_factor(s, c, x)) - std::log(chart_factor(s, cv.chart, vertex_coordinate(s, v, def)));
    };
    for (int f = 0; f < nf; ++f) {
      const auto& t = s.faces[static_cast<std::size_t>(f)];
      const auto& x = coords[static_cast<std::size_t>(f)];
      const ChartId& cf = fchart[static_cast<std::size_t>(f)];
      std::array<double, 3> l{};
      for (int c = 0; c < 3; ++c)
        l[static_cast<std::size_t>(c)] = log_density_in(t[static_cast<std::size_t>(c)], cf, x[static_cast<std::size_t>(c)]);
      const double twice_area = 2.0 * chart_area[static_cast<std::size_t>(f)];
      for (int c = 0; c < 3; ++c) {
        const int i = (c + 1) % 3, j = (c + 2) % 3;
        const cplx e1 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(c)];
        const cplx e2 = x[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(c)];
        const double w = 0.25 * std::real(std::conj(e1) * e2) / twice_area;
        const double d = l[static_cast<std::size_t>(i)] - l[static_cast<std::size_t>(j)];
        ops.curvature[t[static_cast<std::size_t>(i)]] += w * d;
        ops.curvature[t[static_cast<std::size_t>(j)]] -= w * d;
      }
    }
    std::map<std::pair<int, int>, std::pair<int, int>> edge_face;  // directed edge -> (face, corner)
    for (int f = 0; f < nf; ++f) {
      const auto& t = s.faces[static_cast<std::size_t>(f)];
      for (int c = 0; c < 3; ++c) edge_face[{t[static_cast<std::size_t>(c)], t[static_cast<std::size_t>((c + 1) % 3)]}] = {f, c};
    }
    for (const auto& [e, fc] : edge_face) {
      const auto it = edge_face.find({e.second, e.first});
      if (it == edge_face.end()) continue;
      const int f1 = fc.first, f2 = it->second.first;
      if (f1 > f2) continue;
      const ChartId& c1 = fchart[static_cast<std::size_t>(f1)];
      const ChartId& c2 = fchart[static_cast<std::size_t>(f2)];
      if (c1 == c2) continue;
      // Edge a -> b runs counterclockwise around f1 and clockwise around f2.
      const int k1 = fc.second, k2 = it->second.second;
      const auto& x1 = coords[static_cast<std::size_t>(f1)];
      const auto& x2 = coords[static_cast<std::size_t>(f2)];
      const cplx a1 = x1[static_cast<std::size_t>(k1)], b1 = x1[static_cast<std::size_t>((k1 + 1) % 3)];
      const cplx b2 = x2[static_cast<std::size_t>(k2)], a2 = x2[static_cast<std::size_t>((k2 + 1) % 3)];
      const cplx ra = chart_derivative(s, c2, a2) / chart_derivative(s, c1, a1);
      const cplx rb = chart_derivative(s, c2, b2) / chart_derivative(s, c1, b1);
      const double flux = 2.0 * std::arg(rb / ra);
      ops.curvature[e.first] += 0.25 * flux;
      ops.curvature[e.second] += 0.25 * flux;
    }
  } else {
    const auto X = sphere_positions(s, def);
    for (int f = 0; f < nf; ++f) {
      const auto& t = s.faces[static_cast<std::size_t>(f)];
      const Vec3& A = X[static_cast<std::size_t>(t[0])];
      const Vec3& B = X[static_cast<std::size_t>(t[1])];
      const Vec3& C = X[static_cast<std::size_t>(t[2])];
      const double area = 0.5 * (B - A).cross(C - A).norm();
      if (!(area > 0.0)) throw DegenerateGeometry("assemble_operators: zero-area face on the sphere");
      for (int c = 0; c < 3; ++c) {
        const Vec3& P = X[static_cast<std::size_t>(t[static_cast<std::size_t>(c)])];
        const Vec3 e1 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 1) % 3)])] - P;
        const Vec3 e2 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 2) % 3)])] - P;
        const double cot = e1.dot(e2) / e1.cross(e2).norm();
        add_cot(t[static_cast<std::size_t>((c + 1) % 3)], t[static_cast<std::size_t>((c + 2) % 3)], 0.5 * cot);
        ops.area[t[static_cast<std::size_t>(c)]] += area / 3.0;
      }
    }
    ops.curvature = angle_defects(s, def);
    for (int v = 0; v < nv; ++v) ops.log_density[v] = std::log(ops.area[v] / ops.measure[v]);
  }

  ops.L.resize(nv, nv);
  ops.L.setFromTriplets(trip.begin(), trip.end());
  ops.L.makeCompressed();
  return ops;
}

}  // namespace hurwitz
