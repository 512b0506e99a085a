#include "hurwitz/recovery.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

namespace hurwitz {

std::vector<std::vector<int>> vertex_neighbours(const CoverSurface& s) {
  std::vector<std::vector<int>> nb(static_cast<std::size_t>(s.vertex_count()));
  for (const auto& e : s.edges) {
    nb[static_cast<std::size_t>(e[0])].push_back(e[1]);
    nb[static_cast<std::size_t>(e[1])].push_back(e[0]);
  }
  for (auto& l : nb) std::sort(l.begin(), l.end());
  return nb;
}

namespace {

std::vector<std::vector<int>> vertex_faces(const CoverSurface& s) {
  std::vector<std::vector<int>> vf(static_cast<std::size_t>(s.vertex_count()));
  for (int f = 0; f < s.face_count(); ++f)
    for (int v : s.faces[static_cast<std::size_t>(f)]) vf[static_cast<std::size_t>(v)].push_back(f);
  return vf;
}

}  // namespace

RecoveryStencil build_recovery(const CoverSurface& s, const Deformation& def, RecoveryKind kind) {
  const int nv = s.vertex_count();
  const auto nb = vertex_neighbours(s);
  const auto vf = vertex_faces(s);
  RecoveryStencil r;
  r.kind = kind;
  r.offset.reserve(static_cast<std::size_t>(nv) + 1);
  r.offset.push_back(0);

  std::vector<int> mark(static_cast<std::size_t>(nv), -1);
  for (int i = 0; i < nv; ++i) {
    const auto& cv = s.vertices[static_cast<std::size_t>(i)];
    std::vector<int> patch{i};
    mark[static_cast<std::size_t>(i)] = i;
    for (int j : nb[static_cast<std::size_t>(i)])
      if (mark[static_cast<std::size_t>(j)] != i) {
        mark[static_cast<std::size_t>(j)] = i;
        patch.push_back(j);
      }
    if (kind == RecoveryKind::quadratic) {
      const std::size_t ring1 = patch.size();
      for (std::size_t a = 1; a < ring1; ++a)
        for (int j : nb[static_cast<std::size_t>(patch[a])])
          if (mark[static_cast<std::size_t>(j)] != i) {
            mark[static_cast<std::size_t>(j)] = i;
            patch.push_back(j);
          }
    }
    // Coordinates in the home chart; Z-chart square roots follow the 1-ring.
    std::vector<cplx> x(patch.size());
    x[0] = vertex_coordinate(s, i, def);
    std::vector<int> pos(patch.size());
    for (std::size_t a = 1; a < patch.size(); ++a) {
      const int j = patch[a];
      cplx ref = x[0];
      if (cv.chart.kind == ChartKind::Z) {
        // Use an already placed neighbour of j as reference when possible.
        for (std::size_t b2 = 0; b2 < a; ++b2)
          if (std::binary_search(nb[static_cast<std::size_t>(j)].begin(), nb[static_cast<std::size_t>(j)].end(),
                                 patch[b2])) {
            ref = x[b2];
            break;
          }
      }
      x[a] = coordinate_in(s, j, cv.chart, def, ref);
    }

    const std::size_t m = patch.size();
    std::vector<cplx> wdz(m, 0.0), wdzbar(m, 0.0);
    if (kind == RecoveryKind::quadratic) {
      double scale = 0.0;
      for (std::size_t a = 1; a < m; ++a) scale = std::max(scale, std::abs(x[a] - x[0]));
      if (m < 6 || !(scale > 0.0)) throw std::runtime_error("build_recovery: patch too small");
      Eigen::MatrixXd A(static_cast<Eigen::Index>(m), 6);
      for (std::size_t a = 0; a < m; ++a) {
        const cplx d = (x[a] - x[0]) / scale;
        const double dx = d.real(), dy = d.imag();
        A.row(static_cast<Eigen::Index>(a)) << 1.0, dx, dy, dx * dx, dx * dy, dy * dy;
      }
      const Eigen::MatrixXd P = (A.transpose() * A).ldlt().solve(A.transpose());
      for (std::size_t a = 0; a < m; ++a) {
        const double gx = P(1, static_cast<Eigen::Index>(a)) / scale;
        const double gy = P(2, static_cast<Eigen::Index>(a)) / scale;
        wdz[a] = 0.5 * cplx(gx, -gy);
        wdzbar[a] = 0.5 * cplx(gx, gy);
      }
    } else {
      double total = 0.0;
      for (int f : vf[static_cast<std::size_t>(i)]) {
        const auto& t = s.faces[static_cast<std::size_t>(f)];
        std::array<std::size_t, 3> idx{};
        std::array<cplx, 3> y{};
        for (int c = 0; c < 3; ++c) {
          const auto it = std::find(patch.begin(), patch.end(), t[static_cast<std::size_t>(c)]);
          idx[static_cast<std::size_t>(c)] = static_cast<std::size_t>(it - patch.begin());
          y[static_cast<std::size_t>(c)] = x[idx[static_cast<std::size_t>(c)]];
        }
        const double area = 0.5 * std::imag(std::conj(y[1] - y[0]) * (y[2] - y[0]));
        if (!(area > 0.0)) throw std::runtime_error("build_recovery: inverted face in home chart");
        for (int c = 0; c < 3; ++c) {
          // Gradient of the barycentric function of corner c, as gx + i gy.
          const cplx g = cplx(0.0, 1.0) * (y[static_cast<std::size_t>((c + 2) % 3)] - y[static_cast<std::size_t>((c + 1) % 3)]) /
                         (2.0 * area);
          wdzbar[idx[static_cast<std::size_t>(c)]] += area * 0.5 * g;
          wdz[idx[static_cast<std::size_t>(c)]] += area * 0.5 * std::conj(g);
        }
        total += area;
      }
      for (std::size_t a = 0; a < m; ++a) {
        wdz[a] /= total;
        wdzbar[a] /= total;
      }
    }
    for (std::size_t a = 0; a < m; ++a) {
      r.patch.push_back(patch[a]);
      r.coord.push_back(x[a]);
      r.dz.push_back(wdz[a]);
      r.dzbar.push_back(wdzbar[a]);
    }
    r.offset.push_back(static_cast<int>(r.patch.size()));
  }
  return r;
}

Eigen::VectorXcd dbar_scalar(const RecoveryStencil& r, const Eigen::VectorXcd& values) {
  const int nv = r.vertex_count();
  Eigen::VectorXcd out(nv);
  for (int i = 0; i < nv; ++i) {
    cplx acc = 0.0;
    for (int a = r.offset[static_cast<std::size_t>(i)]; a < r.offset[static_cast<std::size_t>(i) + 1]; ++a)
      acc += r.dzbar[static_cast<std::size_t>(a)] * values[r.patch[static_cast<std::size_t>(a)]];
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXcd d_scalar(const RecoveryStencil& r, const Eigen::VectorXcd& values) {
  const int nv = r.vertex_count();
  Eigen::VectorXcd out(nv);
  for (int i = 0; i < nv; ++i) {
    cplx acc = 0.0;
    for (int a = r.offset[static_cast<std::size_t>(i)]; a < r.offset[static_cast<std::size_t>(i) + 1]; ++a)
      acc += r.dz[static_cast<std::size_t>(a)] * values[r.patch[static_cast<std::size_t>(a)]];
    out[i] = acc;
  }
  return out;
}

}  // namespace hurwitz
