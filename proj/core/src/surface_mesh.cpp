#include "hurwitz/surface_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <numeric>
#include <set>
#include <unordered_map>

namespace hurwitz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = b;  // smaller id is the root
  }
};

double angle_0_2pi(cplx d) {
  double a = std::atan2(d.imag(), d.real());
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

// Chordal distance from x to the meridian arc {r e^{i theta} : r >= |q|} (q the
// branch point, theta its cut angle), on the unit sphere.
double distance_to_cut(const Vec3& x, cplx q, double theta) {
  const Vec3 u(std::cos(theta), std::sin(theta), 0.0);
  const double phi_start = std::acos(std::clamp(-to_sphere(q).z(), -1.0, 1.0));  // polar angle from south
  // Arc points A(phi) = u sin(phi) - e_z cos(phi), phi in [phi_start, pi].
  const double xu = x.dot(u);
  const double xz = x.z();
  auto dot_at = [&](double phi) { return xu * std::sin(phi) - xz * std::cos(phi); };
  double best = std::max(dot_at(phi_start), dot_at(std::numbers::pi));
  const double phi_star = std::atan2(xu, -xz);
  if (phi_star >= phi_start && phi_star <= std::numbers::pi) best = std::max(best, dot_at(phi_star));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * best));
}

std::vector<double> cut_angles_of(const std::vector<cplx>& q) {
  std::vector<double> theta(q.size(), 0.0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (std::abs(q[j]) > 1e-9) {
      theta[j] = angle_0_2pi(q[j]);
      continue;
    }
    // Branch point at the antipode of the base point: bisect the widest gap.
    std::vector<double> others;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (i != j && std::abs(q[i]) > 1e-9) others.push_back(angle_0_2pi(q[i]));
    if (others.empty()) continue;
    std::sort(others.begin(), others.end());
    double best_gap = -1.0, best_mid = 0.0;
    for (std::size_t i = 0; i < others.size(); ++i) {
      const double a = others[i];
      const double b = i + 1 < others.size() ? others[i + 1] : others.front() + kTwoPi;
      if (b - a > best_gap + 1e-12) {
        best_gap = b - a;
        best_mid = std::fmod(0.5 * (a + b), kTwoPi);
      }
    }
    theta[j] = best_mid;
  }
  return theta;
}

double min_pairwise_chordal(const std::vector<cplx>& p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) d = std::min(d, chordal_distance(p[i], p[j]));
  return d;
}

SphereRotation frame_for_base(const std::vector<cplx>& points, const Vec3& base) {
  SphereRotation r = SphereRotation::to_north(base);
  for (const auto& p : points) {
    const cplx q = r.apply(p);
    if (std::isfinite(std::abs(q)) && std::abs(q) > 1e-9) return SphereRotation::polar(-std::arg(q)) * r;
  }
  return r;
}

// Every cut keeps half the minimum pairwise distance from the other points.
bool cuts_clear(const std::vector<cplx>& q, double dmin) {
  const auto theta = cut_angles_of(q);
  for (std::size_t j = 0; j < q.size(); ++j)
    for (std::size_t i = 0; i < q.size(); ++i)
      if (i != j && distance_to_cut(to_sphere(q[i]), q[j], theta[j]) < 0.5 * dmin) return false;
  return true;
}

}  // namespace

std::string to_string(const ChartId& c) {
  switch (c.kind) {
    case ChartKind::W: return "W";
    case ChartKind::V: return "V";
    case ChartKind::Z: return "Z" + std::to_string(c.disk);
  }
  return "?";
}

BranchConfiguration roots_of_unity_configuration(const MonodromyDatum& d) {
  BranchConfiguration c;
  c.monodromy = d;
  const int b = d.branch_count();
  for (int j = 0; j < b; ++j) {
    // Exact values on the axes keep symmetric configurations exactly symmetric.
    const int q = 4 * j;
    if (q % b == 0) {
      static const cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      c.points.push_back(quarter[(q / b) % 4]);
    } else {
      c.points.push_back(std::polar(1.0, kTwoPi * j / b));
    }
  }
  return c;
}

SphereRotation canonical_frame(const std::vector<cplx>& points) {
  if (points.empty()) return SphereRotation::identity();
  std::vector<Vec3> hat;
  for (const auto& p : points) hat.push_back(to_sphere(p));
  std::vector<Vec3> cand;
  for (std::size_t i = 0; i < hat.size(); ++i)
    for (std::size_t j = i + 1; j < hat.size(); ++j) {
      const Vec3 c = hat[i].cross(hat[j]);
      if (c.norm() > 1e-6) {
        cand.push_back(c.normalized());
        cand.push_back(-c.normalized());
      }
    }
  for (std::size_t i = 0; i < hat.size(); ++i)
    for (std::size_t j = i + 1; j < hat.size(); ++j) {
      const Vec3 s = hat[i] + hat[j];
      if (s.norm() > 1e-6) cand.push_back(-s.normalized());
    }
  for (const auto& h : hat) cand.push_back(-h);

  const double dmin = min_pairwise_chordal(points);
  // Best-separated candidates first; ties keep list order.
  auto first_clear = [&](const std::vector<Vec3>& cand) -> std::optional<SphereRotation> {
    std::vector<double> score;
    for (const auto& c : cand) {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& h : hat) m = std::min(m, (c - h).norm());
      score.push_back(m);
    }
    std::vector<bool> used(cand.size(), false);
    for (std::size_t round = 0; round < cand.size(); ++round) {
      double best = -1.0;
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (!used[i]) best = std::max(best, score[i]);
      std::size_t pick = cand.size();
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (!used[i] && score[i] >= best - 1e-9) {
          pick = i;
          break;
        }
      if (pick == cand.size()) break;
      used[pick] = true;
      if (score[pick] < 0.5 * dmin) break;  // the rest sit on top of a branch point
      const SphereRotation r = frame_for_base(points, cand[pick]);
      std::vector<cplx> q;
      for (const auto& p : points) q.push_back(r.apply(p));
      if (cuts_clear(q, dmin)) return r;
    }
    return std::nullopt;
  };
  if (auto r = first_clear(cand)) return *r;

  // Fallback for awkward configurations: a Fibonacci grid of base points.
  std::vector<Vec3> grid;
  const int m = 400;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < m; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / m, r = std::sqrt(1.0 - z * z);
    grid.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  if (auto r = first_clear(grid)) return *r;
  throw DegenerateGeometry("canonical_frame: no base point keeps the cuts clear of the branch points");
}

// ---------------------------------------------------------------------------

namespace {

struct BaseBuild {
  BaseMesh mesh;
  std::vector<double> rho;
  std::vector<int> rim_count;
};

BaseBuild build_base(const std::vector<cplx>& q, const MeshOptions& opt) {
  const int level = opt.refinement + opt.level_offset;
  const SphereMesh ico = icosphere(level);
  const double edge = mean_edge_length(ico);
  const std::size_t nv = ico.vertices.size();
  const int b = static_cast<int>(q.size());

  std::vector<Projective> proj(nv);
  for (std::size_t v = 0; v < nv; ++v) proj[v] = from_sphere(ico.vertices[v]);
  // Counterclockwise in w means clockwise seen from outside.
  std::vector<Triangle> faces;
  faces.reserve(ico.faces.size());
  for (const auto& f : ico.faces) faces.push_back({f[0], f[2], f[1]});

  BaseBuild out;
  std::vector<double> scale(static_cast<std::size_t>(b)), hw(static_cast<std::size_t>(b)),
      excl(static_cast<std::size_t>(b));
  for (int j = 0; j < b; ++j) {
    const auto J = static_cast<std::size_t>(j);
    scale[J] = 0.5 * (1.0 + std::norm(q[J]));
    out.rho.push_back(opt.disk_radius * scale[J]);
    hw[J] = edge * scale[J];
    const double target = std::max<double>(opt.min_rim, kTwoPi * out.rho[J] / hw[J]);
    out.rim_count.push_back(4 * static_cast<int>(std::ceil(target / 4.0 - 1e-9)));
    excl[J] = out.rho[J] + 0.6 * hw[J];
  }

  auto inside = [&](std::size_t v, int j) {
    const auto J = static_cast<std::size_t>(j);
    const auto& p = proj[v];
    return std::norm(p.z1 - q[J] * p.z2) < excl[J] * excl[J] * std::norm(p.z2);
  };

  for (int attempt = 0; attempt < 12; ++attempt) {
    std::vector<char> excluded(nv, 0);
    for (std::size_t v = 0; v < nv; ++v)
      for (int j = 0; j < b; ++j)
        if (inside(v, j)) excluded[v] = 1;
    std::vector<char> keep(faces.size(), 1);
    for (std::size_t f = 0; f < faces.size(); ++f)
      for (int c : faces[f])
        if (excluded[static_cast<std::size_t>(c)]) keep[f] = 0;

    // Clean the holes until every boundary vertex has exactly two boundary edges
    // and no kept face has more than one boundary edge.
    std::map<std::pair<int, int>, int> boundary;  // directed edge -> face
    for (int pass = 0; pass < 1000; ++pass) {
      std::map<std::pair<int, int>, int> use;
      for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!keep[f]) continue;
        for (int k = 0; k < 3; ++k) {
          const int a = faces[f][static_cast<std::size_t>(k)], c = faces[f][static_cast<std::size_t>((k + 1) % 3)];
          ++use[std::minmax(a, c)];
        }
      }
      std::vector<int> bdeg(nv, 0);
      std::vector<int> face_bd(faces.size(), 0);
      boundary.clear();
      for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!keep[f]) continue;
        for (int k = 0; k < 3; ++k) {
          const int a = faces[f][static_cast<std::size_t>(k)], c = faces[f][static_cast<std::size_t>((k + 1) % 3)];
          if (use[std::minmax(a, c)] == 1) {
            ++face_bd[f];
            ++bdeg[static_cast<std::size_t>(a)];
            ++bdeg[static_cast<std::size_t>(c)];
            boundary[{a, c}] = static_cast<int>(f);
          }
        }
      }
      bool changed = false;
      for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!keep[f]) continue;
        bool bad = face_bd[f] >= 2;
        if (face_bd[f] >= 1)
          for (int c : faces[f])
            if (bdeg[static_cast<std::size_t>(c)] > 2) bad = true;
        // A face touching the boundary only at its opposite vertex pinches the hole.
        if (face_bd[f] == 0) {
          int on = 0;
          for (int c : faces[f])
            if (bdeg[static_cast<std::size_t>(c)] > 0) ++on;
          if (on == 3) bad = true;
        }
        if (bad) {
          keep[f] = 0;
          changed = true;
        }
      }
      if (!changed) break;
    }

    // Extract boundary loops (hole on the right of each directed edge).
    std::unordered_map<int, int> next;
    for (const auto& [e, f] : boundary) next[e.first] = e.second;
    std::vector<std::vector<int>> loops;
    std::set<int> seen;
    for (const auto& [e, f] : boundary) {
      if (seen.count(e.first)) continue;
      std::vector<int> loop;
      int v = e.first;
      while (!seen.count(v)) {
        seen.insert(v);
        loop.push_back(v);
        v = next.at(v);
      }
      std::reverse(loop.begin(), loop.end());  // counterclockwise around the hole
      loops.push_back(std::move(loop));
    }

    // Assign loops to disks and check they are star-shaped around the center.
    std::vector<int> loop_of(static_cast<std::size_t>(b), -1);
    bool ok = static_cast<int>(loops.size()) == b;
    std::vector<int> grow;
    for (std::size_t l = 0; ok && l < loops.size(); ++l) {
      const auto& p0 = proj[static_cast<std::size_t>(loops[l][0])];
      int best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (int j = 0; j < b; ++j) {
        const double d = std::abs(p0.z1 - q[static_cast<std::size_t>(j)] * p0.z2) / std::abs(p0.z2);
        if (d < bd) {
          bd = d;
          best = j;
        }
      }
      if (loop_of[static_cast<std::size_t>(best)] != -1) {
        ok = false;
        break;
      }
      loop_of[static_cast<std::size_t>(best)] = static_cast<int>(l);
      double turn = 0.0;
      bool monotone = true;
      const auto& loop = loops[l];
      for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& a = proj[static_cast<std::size_t>(loop[i])];
        const auto& c = proj[static_cast<std::size_t>(loop[(i + 1) % loop.size()])];
        const cplx da = a.z1 / a.z2 - q[static_cast<std::size_t>(best)];
        const cplx dc = c.z1 / c.z2 - q[static_cast<std::size_t>(best)];
        const double step = std::arg(dc / da);
        if (!(step > 0.0)) monotone = false;
        turn += step;
      }
      if (!monotone || std::abs(turn - kTwoPi) > 1e-6) grow.push_back(best);
    }
    if (!ok) throw DegenerateGeometry("build_cover: disk holes merged or split; disks too close for this mesh");
    if (!grow.empty()) {
      for (int j : grow) excl[static_cast<std::size_t>(j)] += 0.25 * hw[static_cast<std::size_t>(j)];
      continue;
    }

    // Assemble the base mesh.
    BaseMesh& m = out.mesh;
    m.edge_length = edge;
    std::vector<int> remap(nv, -1);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (keep[f])
        for (int c : faces[f])
          if (remap[static_cast<std::size_t>(c)] < 0) {
            remap[static_cast<std::size_t>(c)] = static_cast<int>(m.points.size());
            m.points.push_back(proj[static_cast<std::size_t>(c)]);
          }
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (keep[f]) {
        m.faces.push_back({remap[static_cast<std::size_t>(faces[f][0])], remap[static_cast<std::size_t>(faces[f][1])],
                           remap[static_cast<std::size_t>(faces[f][2])]});
        m.face_disk.push_back(-1);
      }
    m.disk_center.assign(static_cast<std::size_t>(b), -1);
    m.disk_rim.assign(static_cast<std::size_t>(b), {});
    m.annulus.assign(static_cast<std::size_t>(b), {});
    for (int j = 0; j < b; ++j) {
      const auto J = static_cast<std::size_t>(j);
      const PolarDisk disk = polar_disk(out.rim_count[J], out.rho[J]);
      const int offset = static_cast<int>(m.points.size());
      for (const auto& x : disk.points) m.points.push_back(Projective::finite(q[J] + x));
      m.disk_center[J] = offset;
      for (const auto& f : disk.faces) {
        m.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
        m.face_disk.push_back(j);
      }
      std::vector<int> rim;
      for (int r : disk.outer) rim.push_back(r + offset);
      m.disk_rim[J] = rim;

      // Hole loop, started at the last point with angle <= 0.
      std::vector<int> loop;
      for (int v : loops[static_cast<std::size_t>(loop_of[J])]) loop.push_back(remap[static_cast<std::size_t>(v)]);
      std::vector<double> ang;
      for (int v : loop) {
        const auto& p = m.points[static_cast<std::size_t>(v)];
        double a = angle_0_2pi(p.z1 / p.z2 - q[J]);
        // Snap roundoff around the ray so rotated inputs start the loop alike.
        if (a < 1e-9 || a > kTwoPi - 1e-9) a = 0.0;
        ang.push_back(a);
      }
      std::size_t start = 0;
      double key = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < ang.size(); ++i) {
        const double k = ang[i] == 0.0 ? 0.0 : kTwoPi - ang[i];
        if (k < key) {
          key = k;
          start = i;
        }
      }
      std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(start), loop.end());
      std::rotate(ang.begin(), ang.begin() + static_cast<std::ptrdiff_t>(start), ang.end());
      std::vector<double> beta(ang.size() + 1);
      beta[0] = ang[0] == 0.0 ? 0.0 : ang[0] - kTwoPi;
      for (std::size_t i = 1; i < ang.size(); ++i) {
        double a = ang[i];
        while (a <= beta[i - 1]) a += kTwoPi;
        beta[i] = a;
      }
      beta[ang.size()] = beta[0] + kTwoPi;
      const int mrim = out.rim_count[J];
      const int nl = static_cast<int>(loop.size());
      auto at = [&](const std::vector<int>& l, int i) {
        const auto& p = m.points[static_cast<std::size_t>(l[static_cast<std::size_t>(i % static_cast<int>(l.size()))])];
        return p.z1 / p.z2;
      };
      auto tris = zip_loops(rim, loop, [&](int i, int k) {
        // Shorter diagonal, unless that would run ahead of the angular order.
        const double alpha = (2.0 * i / mrim) * std::numbers::pi;
        const double slack = kTwoPi / std::min(mrim, nl);
        if (alpha > beta[static_cast<std::size_t>(k)] + slack) return false;
        if (alpha + slack < beta[static_cast<std::size_t>(k - 1)]) return true;
        const double d1 = std::abs(at(rim, i) - at(loop, k - 1));
        const double d2 = std::abs(at(rim, i - 1) - at(loop, k));
        // Near-ties (symmetric inputs) go by angle so roundoff cannot flip them.
        if (std::abs(d1 - d2) <= 1e-9 * (d1 + d2)) return alpha <= beta[static_cast<std::size_t>(k)] + 1e-9;
        return d1 < d2;
      });
      for (const auto& t : tris) {
        m.annulus[J].push_back(static_cast<int>(m.faces.size()));
        m.faces.push_back(t);
        m.face_disk.push_back(-1);
      }
    }
    return out;
  }
  throw DegenerateGeometry("build_cover: could not carve star-shaped holes around the branch points");
}

}  // namespace

CoverSurface build_cover(const BranchConfiguration& config, const MeshOptions& opt) {
  const MonodromyDatum& d = config.monodromy;
  if (d.n < 2) throw std::invalid_argument("build_cover: degree must be >= 2");
  if (d.h != 0) throw std::invalid_argument("build_cover: only covers of P1 (base genus 0) are triangulated");
  if (auto v = validate(d); !v) throw std::invalid_argument("build_cover: invalid monodromy: " + v.detail);
  const int b = d.branch_count();
  if (static_cast<int>(config.points.size()) != b)
    throw std::invalid_argument("build_cover: need one branch point per transposition");
  if (opt.refinement < 0) throw std::invalid_argument("build_cover: refinement must be >= 0");
  if (!(opt.disk_radius > 0.0)) throw std::invalid_argument("build_cover: disk radius must be positive");
  for (const auto& p : config.points)
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw std::invalid_argument("build_cover: branch points must be finite (rotate the configuration)");
  const double dmin = min_pairwise_chordal(config.points);
  if (!(dmin > 0.0)) throw DegenerateGeometry("build_cover: branch points are not pairwise distinct");
  if (4.0 * opt.disk_radius >= dmin)
    throw DegenerateGeometry("build_cover: minimum branch distance " + std::to_string(dmin) +
                             " does not exceed 4x the disk radius " + std::to_string(opt.disk_radius));

  CoverSurface S;
  S.n = d.n;
  S.b = b;
  S.genus = genus_from_relation(d.n, 0, b);
  S.config = config;
  S.frame = canonical_frame(config.points);
  for (const auto& p : config.points) S.canonical_points.push_back(S.frame.apply(p));
  S.cut_angles = cut_angles_of(S.canonical_points);
  const auto& q = S.canonical_points;

  // Crossing every cut once around infinity must give the identity.
  {
    std::vector<int> order(static_cast<std::size_t>(b));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return S.cut_angles[static_cast<std::size_t>(x)] < S.cut_angles[static_cast<std::size_t>(y)];
    });
    Permutation prod = Permutation::identity(d.n);
    for (int j : order) prod = d.transpositions[static_cast<std::size_t>(j)] * prod;
    if (!prod.is_identity())
      throw std::invalid_argument(
          "build_cover: the transpositions taken in angular order around the base point do not multiply to the "
          "identity; reorder the branch points or apply braid moves");
  }

  BaseBuild bb = build_base(q, opt);
  S.base = std::move(bb.mesh);
  const BaseMesh& B = S.base;
  const int nf = static_cast<int>(B.faces.size());
  const int n = d.n;

  // Dual-edge sheet permutations from cut crossings.
  std::vector<Vec3> pos;
  for (const auto& p : B.points) pos.push_back(to_sphere(p));
  std::vector<Vec3> centroid;
  for (const auto& f : B.faces)
    centroid.push_back((pos[static_cast<std::size_t>(f[0])] + pos[static_cast<std::size_t>(f[1])] +
                        pos[static_cast<std::size_t>(f[2])])
                           .normalized());
  std::vector<Vec3> normal, dir;
  std::vector<double> zmin;
  for (int j = 0; j < b; ++j) {
    const double t = S.cut_angles[static_cast<std::size_t>(j)];
    normal.emplace_back(-std::sin(t), std::cos(t), 0.0);
    dir.emplace_back(std::cos(t), std::sin(t), 0.0);
    zmin.push_back(to_sphere(q[static_cast<std::size_t>(j)]).z());
  }
  auto crossing_perm = [&](int f, int g) {
    const Vec3& A = centroid[static_cast<std::size_t>(f)];
    const Vec3& C = centroid[static_cast<std::size_t>(g)];
    std::vector<std::pair<double, int>> hits;
    for (int j = 0; j < b; ++j) {
      const auto J = static_cast<std::size_t>(j);
      const double sa = normal[J].dot(A), sc = normal[J].dot(C);
      if ((sa >= 0.0) == (sc >= 0.0)) continue;
      const double t = sa / (sa - sc);
      const Vec3 X = (A + t * (C - A)).normalized();
      if (X.dot(dir[J]) > 0.0 && X.z() >= zmin[J]) hits.emplace_back(t, j);
    }
    std::sort(hits.begin(), hits.end());
    Permutation s = Permutation::identity(n);
    for (const auto& h : hits) s = d.transpositions[static_cast<std::size_t>(h.second)] * s;
    return s;
  };

  // Lift: corner (f, k, c) of sheet k; glue across every interior edge.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edge_faces;  // edge -> (face, local corner)
  for (int f = 0; f < nf; ++f)
    for (int c = 0; c < 3; ++c) {
      const int a = B.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
      const int e = B.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>((c + 1) % 3)];
      edge_faces[std::minmax(a, e)].emplace_back(f, c);
    }
  auto corner = [&](int f, int k, int c) { return (f * n + k) * 3 + c; };
  auto local = [&](int f, int v) {
    for (int c = 0; c < 3; ++c)
      if (B.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] == v) return c;
    return -1;
  };
  UnionFind uf(static_cast<std::size_t>(nf) * static_cast<std::size_t>(n) * 3);
  for (const auto& [e, fs] : edge_faces) {
    if (fs.size() != 2) throw std::logic_error("build_cover: base mesh is not a closed manifold");
    const int f = fs[0].first, g = fs[1].first;
    const Permutation sigma = crossing_perm(f, g);
    for (int v : {e.first, e.second}) {
      const int cf = local(f, v), cg = local(g, v);
      for (int k = 0; k < n; ++k) uf.unite(corner(f, k, cf), corner(g, sigma(k), cg));
    }
  }

  // Cover faces (all lifts except the ramified sheets of each w-disk).
  std::vector<std::array<int, 2>> ram_sheets(static_cast<std::size_t>(b));
  for (int j = 0; j < b; ++j) {
    const auto pr = d.transpositions[static_cast<std::size_t>(j)].swapped_pair();
    ram_sheets[static_cast<std::size_t>(j)] = {pr.first, pr.second};
  }
  auto removed = [&](int f, int k) {
    const int j = B.face_disk[static_cast<std::size_t>(f)];
    if (j < 0) return false;
    const auto& s = ram_sheets[static_cast<std::size_t>(j)];
    return k == s[0] || k == s[1];
  };

  std::unordered_map<int, int> vid;  // union-find root -> cover vertex
  S.lift.assign(static_cast<std::size_t>(nf) * static_cast<std::size_t>(n), -1);
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < n; ++k) {
      if (removed(f, k)) continue;
      Triangle t{};
      for (int c = 0; c < 3; ++c) {
        const int root = uf.find(corner(f, k, c));
        auto it = vid.find(root);
        if (it == vid.end()) {
          CoverVertex cv;
          cv.sheet = k;
          cv.base_vertex = B.faces[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
          it = vid.emplace(root, static_cast<int>(S.vertices.size())).first;
          S.vertices.push_back(cv);
        }
        t[static_cast<std::size_t>(c)] = it->second;
      }
      S.lift[static_cast<std::size_t>(f * n + k)] = static_cast<int>(S.faces.size());
      S.faces.push_back(t);
      S.face_base.push_back(f);
      S.face_sheet.push_back(k);
    }
  for (auto& v : S.vertices) {
    const auto& p = B.points[static_cast<std::size_t>(v.base_vertex)];
    if (std::norm(p.z1) <= std::norm(p.z2)) {
      v.chart = {ChartKind::W, -1};
      v.coord = p.z1 / p.z2;
    } else {
      v.chart = {ChartKind::V, -1};
      v.coord = p.z2 / p.z1;
    }
  }

  // Replace the two ramified lifts of each w-disk by one z-disk.
  for (int j = 0; j < b; ++j) {
    const auto J = static_cast<std::size_t>(j);
    const auto& sh = ram_sheets[J];
    const auto& rim = B.disk_rim[J];
    const int m = static_cast<int>(rim.size());
    std::unordered_map<int, int> rim_pos;
    for (int l = 0; l < m; ++l) rim_pos[rim[static_cast<std::size_t>(l)]] = l;

    // The center is a single cover point on the two ramified sheets.
    {
      int f0 = -1;
      for (int f = 0; f < nf && f0 < 0; ++f)
        if (B.face_disk[static_cast<std::size_t>(f)] == j && local(f, B.disk_center[J]) >= 0) f0 = f;
      const int c0 = local(f0, B.disk_center[J]);
      if (uf.find(corner(f0, sh[0], c0)) != uf.find(corner(f0, sh[1], c0)))
        throw std::logic_error("build_cover: ramified sheets did not close up at a branch point");
    }

    // Rim links on the ramified sheets: rim_l -> rim_{l+1}.
    std::unordered_map<int, int> next_root;
    int start_root = -1;
    for (int f = 0; f < nf; ++f) {
      if (B.face_disk[static_cast<std::size_t>(f)] != j) continue;
      const auto& t = B.faces[static_cast<std::size_t>(f)];
      for (int c = 0; c < 3; ++c) {
        auto ia = rim_pos.find(t[static_cast<std::size_t>(c)]);
        auto ib = rim_pos.find(t[static_cast<std::size_t>((c + 1) % 3)]);
        auto ib2 = rim_pos.find(t[static_cast<std::size_t>((c + 2) % 3)]);
        if (ia == rim_pos.end()) continue;
        for (auto it : {ib, ib2}) {
          if (it == rim_pos.end() || it->second != (ia->second + 1) % m) continue;
          const int ca = c, cb = local(f, it->first);
          for (int k : sh) {
            const int ra = uf.find(corner(f, k, ca)), rb = uf.find(corner(f, k, cb));
            next_root[ra] = rb;
            if (ia->second == 0 && k == sh[0] && start_root < 0) start_root = ra;
          }
        }
      }
    }
    std::vector<int> cycle;
    int r = start_root;
    for (int t = 0; t < 2 * m; ++t) {
      cycle.push_back(vid.at(r));
      r = next_root.at(r);
    }
    if (r != start_root || std::set<int>(cycle.begin(), cycle.end()).size() != static_cast<std::size_t>(2 * m))
      throw std::logic_error("build_cover: rim above a branch point is not a single cycle of length 2m");

    const double rz = std::sqrt(bb.rho[J]);
    const PolarDisk zd = polar_disk(2 * m, rz);
    std::vector<int> zid(zd.points.size(), -1);
    for (std::size_t t = 0; t < zd.outer.size(); ++t) zid[static_cast<std::size_t>(zd.outer[t])] = cycle[t];
    for (std::size_t i = 0; i < zd.points.size(); ++i) {
      if (zid[i] >= 0) continue;
      zid[i] = static_cast<int>(S.vertices.size());
      S.vertices.push_back({-1, {ChartKind::Z, j}, zd.points[i], -1});
    }
    for (std::size_t i = 0; i < zd.points.size(); ++i) {
      auto& v = S.vertices[static_cast<std::size_t>(zid[i])];
      v.chart = {ChartKind::Z, j};
      v.coord = zd.points[i];
      v.sheet = -1;
    }
    for (const auto& f : zd.faces) {
      S.faces.push_back({zid[static_cast<std::size_t>(f[0])], zid[static_cast<std::size_t>(f[1])],
                         zid[static_cast<std::size_t>(f[2])]});
      S.face_base.push_back(-1);
      S.face_sheet.push_back(-1);
    }
    BranchDisk disk;
    disk.branch = j;
    disk.center = q[J];
    disk.radius_w = bb.rho[J];
    disk.radius_z = rz;
    disk.rim_count = m;
    disk.ram_vertex = zid[0];
    disk.sheets = sh;
    S.disks.push_back(disk);
  }

  // Drop vertices no face uses (interiors of the removed lifts).
  {
    std::vector<int> remap(S.vertices.size(), -1);
    std::vector<CoverVertex> verts;
    for (auto& t : S.faces)
      for (int& c : t) {
        if (remap[static_cast<std::size_t>(c)] < 0) {
          remap[static_cast<std::size_t>(c)] = static_cast<int>(verts.size());
          verts.push_back(S.vertices[static_cast<std::size_t>(c)]);
        }
        c = remap[static_cast<std::size_t>(c)];
      }
    S.vertices = std::move(verts);
    for (auto& dk : S.disks) dk.ram_vertex = remap[static_cast<std::size_t>(dk.ram_vertex)];
  }

  std::set<std::pair<int, int>> es;
  for (const auto& t : S.faces)
    for (int c = 0; c < 3; ++c)
      es.insert(std::minmax(t[static_cast<std::size_t>(c)], t[static_cast<std::size_t>((c + 1) % 3)]));
  for (const auto& e : es) S.edges.push_back({e.first, e.second});

  const int chi = euler_characteristic(S);
  if (chi != 2 - 2 * S.genus)
    throw std::logic_error("build_cover: Euler characteristic " + std::to_string(chi) + " does not match genus " +
                           std::to_string(S.genus));

  // Background angle sums at the ramification vertices.
  const auto X = sphere_positions(S, {});
  std::vector<double> angle(S.vertices.size(), 0.0);
  for (const auto& t : S.faces)
    for (int c = 0; c < 3; ++c) {
      const Vec3& P = X[static_cast<std::size_t>(t[static_cast<std::size_t>(c)])];
      const Vec3 e1 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 1) % 3)])] - P;
      const Vec3 e2 = X[static_cast<std::size_t>(t[static_cast<std::size_t>((c + 2) % 3)])] - P;
      angle[static_cast<std::size_t>(t[static_cast<std::size_t>(c)])] += std::atan2(e1.cross(e2).norm(), e1.dot(e2));
    }
  for (const auto& dk : S.disks)
    S.ramification.push_back({dk.ram_vertex, dk.branch, angle[static_cast<std::size_t>(dk.ram_vertex)]});
  return S;
}

int euler_characteristic(const CoverSurface& s) {
  return s.vertex_count() - static_cast<int>(s.edges.size()) + s.face_count();
}

Permutation monodromy_around(const CoverSurface& S, int j) {
  if (j < 0 || j >= S.b) throw std::out_of_range("monodromy_around: branch index out of range");
  const auto& ring = S.base.annulus[static_cast<std::size_t>(j)];
  const int n = S.n;
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  for (int k = 0; k < n; ++k) {
    int cur = S.lift[static_cast<std::size_t>(ring[0] * n + k)];
    for (std::size_t i = 1; i <= ring.size(); ++i) {
      const int g = ring[i % ring.size()];
      const auto& t = S.faces[static_cast<std::size_t>(cur)];
      int nxt = -1;
      for (int kk = 0; kk < n && nxt < 0; ++kk) {
        const int cand = S.lift[static_cast<std::size_t>(g * n + kk)];
        if (cand < 0) continue;
        const auto& u = S.faces[static_cast<std::size_t>(cand)];
        int shared = 0;
        for (int a : t)
          for (int c : u)
            if (a == c) ++shared;
        if (shared >= 2) nxt = cand;
      }
      if (nxt < 0) throw std::logic_error("monodromy_around: annulus walk left the cover");
      cur = nxt;
    }
    image[static_cast<std::size_t>(k)] = S.face_sheet[static_cast<std::size_t>(cur)];
  }
  return Permutation(image);
}

// ---------------------------------------------------------------------------

std::vector<cplx> single_point_velocity(const CoverSurface& S, int k, cplx v) {
  if (k < 0 || k >= S.b) throw std::out_of_range("single_point_velocity: branch index out of range");
  std::vector<cplx> c(static_cast<std::size_t>(S.b), 0.0);
  c[static_cast<std::size_t>(k)] = S.frame.derivative(S.config.points[static_cast<std::size_t>(k)]) * v;
  return c;
}

Projective chart_image(const CoverSurface& S, const ChartId& c, cplx x, const Deformation& def) {
  switch (c.kind) {
    case ChartKind::W: return {x, 1.0};
    case ChartKind::V: return {1.0, x};
    case ChartKind::Z: return {x * x + S.canonical_points[static_cast<std::size_t>(c.disk)] + def.shift(c.disk), 1.0};
  }
  return {};
}

namespace {

struct Blend {
  double q = 0.0, dq = 0.0;  // q(t) and dq/dt, t = |z0|^2
};

Blend blend(const CoverSurface& S, const CoverVertex& cv, const Deformation& def) {
  const double rz = S.disks[static_cast<std::size_t>(cv.chart.disk)].radius_z;
  const double a2 = def.blend_inner * def.blend_inner, b2 = def.blend_outer * def.blend_outer;
  const double D = rz * rz * (b2 - a2);
  const double x = (std::norm(cv.coord) / (rz * rz) - a2) / (b2 - a2);
  if (x <= 0.0) return {};
  if (x >= 1.0) return {1.0, 0.0};
  return {x * x * x * (10.0 + x * (-15.0 + 6.0 * x)), 30.0 * x * x * (1.0 - x) * (1.0 - x) / D};
}

bool moving(const CoverVertex& cv, const Deformation& def) {
  return cv.chart.kind == ChartKind::Z && def.speed(cv.chart.disk) != 0.0;
}

}  // namespace

cplx vertex_coordinate(const CoverSurface& S, int v, const Deformation& def) {
  const auto& cv = S.vertices[static_cast<std::size_t>(v)];
  if (!def.vertex_velocity.empty()) return cv.coord + def.s * def.vertex_velocity[static_cast<std::size_t>(v)];
  if (!moving(cv, def) || def.s == 0.0) return cv.coord;
  const Blend b = blend(S, cv, def);
  if (b.q == 0.0) return cv.coord;
  const cplx r = std::sqrt(cv.coord * cv.coord - def.shift(cv.chart.disk) * b.q);
  return std::abs(r - cv.coord) <= std::abs(r + cv.coord) ? r : -r;
}

cplx vertex_velocity(const CoverSurface& S, int v, const Deformation& def) {
  const auto& cv = S.vertices[static_cast<std::size_t>(v)];
  if (!def.vertex_velocity.empty()) return def.vertex_velocity[static_cast<std::size_t>(v)];
  if (!moving(cv, def)) return 0.0;
  const Blend b = blend(S, cv, def);
  if (b.q == 0.0) return 0.0;
  return -def.speed(cv.chart.disk) * b.q / (2.0 * cv.coord);
}

Projective vertex_image(const CoverSurface& S, int v, const Deformation& def) {
  const auto& cv = S.vertices[static_cast<std::size_t>(v)];
  return chart_image(S, cv.chart, vertex_coordinate(S, v, def), def);
}

cplx chart_coordinate(const CoverSurface& S, const ChartId& c, const Projective& p, const Deformation& def,
                      cplx reference) {
  switch (c.kind) {
    case ChartKind::W: return p.z1 / p.z2;
    case ChartKind::V: return p.z2 / p.z1;
    case ChartKind::Z: {
      const cplx w = p.z1 / p.z2;
      const cplx r = std::sqrt(w - S.canonical_points[static_cast<std::size_t>(c.disk)] - def.shift(c.disk));
      return std::abs(r - reference) <= std::abs(-r - reference) ? r : -r;
    }
  }
  return {};
}

cplx coordinate_in(const CoverSurface& S, int v, const ChartId& c, const Deformation& def, cplx reference) {
  const auto& cv = S.vertices[static_cast<std::size_t>(v)];
  if (cv.chart == c) return vertex_coordinate(S, v, def);
  return chart_coordinate(S, c, vertex_image(S, v, def), def, reference);
}

cplx chart_derivative(const CoverSurface&, const ChartId& c, cplx x) {
  switch (c.kind) {
    case ChartKind::W: return 1.0;
    case ChartKind::V: return -1.0 / (x * x);
    case ChartKind::Z: return 2.0 * x;
  }
  return {};
}

cplx chart_second_derivative(const CoverSurface&, const ChartId& c, cplx x) {
  switch (c.kind) {
    case ChartKind::W: return 0.0;
    case ChartKind::V: return 2.0 / (x * x * x);
    case ChartKind::Z: return 2.0;
  }
  return {};
}

cplx chart_s_derivative(const CoverSurface&, const ChartId& c, const Deformation& def) {
  return c.kind == ChartKind::Z ? def.speed(c.disk) : cplx(0.0);
}

ChartId face_chart(const CoverSurface& S, int f) {
  const auto& t = S.faces[static_cast<std::size_t>(f)];
  const ChartId c0 = S.vertices[static_cast<std::size_t>(t[0])].chart;
  const ChartId c1 = S.vertices[static_cast<std::size_t>(t[1])].chart;
  const ChartId c2 = S.vertices[static_cast<std::size_t>(t[2])].chart;
  if (c0 == c1 && c1 == c2) return c0;
  bool any_v = false;
  for (const auto& c : {c0, c1, c2})
    if (c.kind == ChartKind::V) any_v = true;
  return any_v ? ChartId{ChartKind::V, -1} : ChartId{ChartKind::W, -1};
}

std::vector<Vec3> sphere_positions(const CoverSurface& S, const Deformation& def) {
  std::vector<Vec3> x(S.vertices.size());
  for (std::size_t v = 0; v < S.vertices.size(); ++v) x[v] = to_sphere(vertex_image(S, static_cast<int>(v), def));
  return x;
}

}  // namespace hurwitz
