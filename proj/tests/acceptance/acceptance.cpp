// One line per acceptance criterion; exits nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "hurwitz/cohomology.hpp"
#include "hurwitz/combinatorics.hpp"
#include "hurwitz/hyperbolic_solver.hpp"
#include "hurwitz/sphere.hpp"
#include "hurwitz/wp_geometry.hpp"
#include "hyperdual.hpp"

using namespace hurwitz;
using clock_type = std::chrono::steady_clock;

namespace {

std::map<int, std::pair<bool, std::string>> results;

// Prints as it goes; the summary at the end lists the criteria in order.
void report(int id, bool ok, const std::string& detail) {
  std::printf("# criterion %d done\n", id);
  std::fflush(stdout);
  results[id] = {ok, detail};
}

double since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

MonodromyDatum hexagon_datum() { return make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2})); }

CoverSurface cover(const BranchConfiguration& c, int refinement) {
  MeshOptions m;
  m.refinement = refinement;
  return build_cover(c, m);
}

// --- 1 -------------------------------------------------------------------
void criterion1() {
  const auto t0 = clock_type::now();
  const auto classes = enumerate_classes(3, 4);
  std::vector<Permutation> trans{Permutation::transposition(3, 1, 2), Permutation::transposition(3, 1, 3),
                                 Permutation::transposition(3, 2, 3)};
  const auto sigmas = all_permutations(3);
  std::set<std::vector<Permutation>> oracle;
  int tuples = 0;
  for (int code = 0; code < 81; ++code, ++tuples) {
    std::vector<Permutation> ts;
    auto prod = Permutation::identity(3);
    for (int i = 0, c = code; i < 4; ++i, c /= 3) {
      ts.push_back(trans[static_cast<std::size_t>(c % 3)]);
      prod = prod * ts.back();
    }
    if (!prod.is_identity() || !is_transitive(ts, 3)) continue;
    std::vector<Permutation> best;
    for (const auto& s : sigmas) {
      std::vector<Permutation> conj;
      for (const auto& t : ts) conj.push_back(conjugate(t, s));
      std::vector<std::pair<int, int>> kc, kb;
      for (const auto& t : conj) kc.push_back(t.swapped_pair());
      for (const auto& t : best) kb.push_back(t.swapped_pair());
      if (best.empty() || kc < kb) best = conj;
    }
    oracle.insert(best);
  }
  std::set<std::vector<Permutation>> got;
  for (const auto& d : classes) got.insert(d.transpositions);
  bool parity = true;
  std::string counts;
  for (int b = 1; b <= 8; ++b) {
    const auto k = enumerate_classes(2, b).size();
    counts += std::to_string(k);
    parity = parity && k == (b % 2 == 0 ? 1u : 0u);
  }
  const double sec = since(t0);
  report(1, classes.size() == 4 && got == oracle && parity && sec < 1.0,
         "enumerate(3,4)=" + std::to_string(classes.size()) + " brute force over " + std::to_string(tuples) +
             " tuples=" + std::to_string(oracle.size()) + (got == oracle ? " (same classes)" : " (DIFFERENT)") +
             ", (2,b) b=1..8 -> " + counts + ", " + fmt("%.3f s", sec));
}

// --- 2 -------------------------------------------------------------------
void criterion2() {
  std::string detail;
  bool ok = true;
  double t46 = 0.0;
  for (auto [n, b] : {std::pair{2, 6}, {3, 4}, {4, 6}}) {
    const auto t0 = clock_type::now();
    const auto classes = enumerate_classes(n, b);
    const auto orbits = braid_orbits(classes);
    if (n == 4) t46 = since(t0);
    ok = ok && orbits.size() == 1;
    detail += "(" + std::to_string(n) + "," + std::to_string(b) + "): " + std::to_string(classes.size()) +
              " classes, " + std::to_string(orbits.size()) + " orbit; ";
  }
  report(2, ok && t46 < 30.0, detail + fmt("(4,6) in %.2f s", t46));
}

// --- 3 -------------------------------------------------------------------
void criterion3() {
  std::mt19937 rng(3);
  int checked = 0, determined = 0;
  bool ok = true;
  while (checked < 100) {
    const int n = 2 + static_cast<int>(rng() % 5);
    const int h = static_cast<int>(rng() % 4);
    const int p = 2 + static_cast<int>(rng() % 12);
    const int b = n * (2 - 2 * h) + 2 * p - 2;
    if (b < 1) continue;
    ++checked;
    const auto c = cohomology_profile(n, h, b);
    ok = ok && c.p == p && b == n * (2 - 2 * h) + 2 * c.p - 2;
    ok = ok && c.euler_pullback == *c.t1 - *c.h1_tx;  // the part of exactness degree alone fixes
    if (c.fully_determined()) {
      ++determined;
      ok = ok && *c.alternating_sum() == 0;
    }
  }
  const auto g2 = cohomology_profile(2, 0, 6);
  const bool ex = g2.fully_determined() && *g2.h0_pullback == 3 && *g2.t1 == 6 && *g2.h1_tx == 3 &&
                  *g2.h1_pullback == 0;
  report(3, ok && ex,
         std::to_string(checked) + " random types (" + std::to_string(determined) +
             " fully determined, alternating sum 0; the rest satisfy chi = t1 - h1(T_X)), (2,0,6) -> (" +
             std::to_string(*g2.h0_pullback) + "," + std::to_string(*g2.t1) + "," + std::to_string(*g2.h1_tx) + "," +
             std::to_string(*g2.h1_pullback) + ")");
}

// --- 4 -------------------------------------------------------------------
void criterion4() {
  const auto t0 = clock_type::now();
  const auto s = cover(roots_of_unity_configuration(hexagon_datum()), 3);
  const auto ops = assemble_operators(s);
  const auto m = solve_liouville(s, ops);
  const double area_err = std::abs(m.area - 4 * std::numbers::pi) / (4 * std::numbers::pi);
  // terminal quadratic convergence: r_{k+1} <= C r_k^2 once r_k < 1e-2
  double worst = 0.0;
  int steps = 0;
  const auto& r = m.residual_history;
  for (std::size_t k = 0; k + 1 < r.size(); ++k)
    if (r[k] < 1e-2 && r[k + 1] > 1e-12) {
      worst = std::max(worst, r[k + 1] / (r[k] * r[k]));
      ++steps;
    }
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  Eigen::VectorXd u0(s.vertex_count());
  for (int i = 0; i < u0.size(); ++i) u0[i] = uni(rng);
  const auto m2 = solve_liouville(s, ops, {}, u0);
  const double diff = (m.u - m2.u).lpNorm<Eigen::Infinity>();
  const double sec = since(t0);
  report(4, area_err <= 0.01 && steps >= 1 && worst < 10.0 && diff <= 1e-8 && sec < 60.0,
         "refinement 3 (" + std::to_string(s.vertex_count()) + " vertices): area error " + fmt("%.2e", area_err) +
             ", " + std::to_string(m.iterations) + " Newton steps, max r_{k+1}/r_k^2 " + fmt("%.2f", worst) +
             ", init difference " + fmt("%.1e", diff) + ", " + fmt("%.1f s", sec));
}

// --- 5, 6, 7, 10 share the refinement 3 and 4 runs ------------------------
struct Run {
  WPResult r;
  double seconds = 0.0;
};

Run hexagon_wp(int refinement) {
  const auto t0 = clock_type::now();
  const auto s = cover(roots_of_unity_configuration(hexagon_datum()), refinement);
  Run out;
  out.r = compute_wp(s, single_point_velocity(s, 0));  // Richardson check on (default tolerance 1e-4)
  out.seconds = since(t0);
  return out;
}

double pde_gap(const WPResult& r) { return std::abs(r.fiber_integral - (r.g0_pde + r.g1)) / r.fiber_integral; }

void criteria_5_6_7_10() {
  const auto r3 = hexagon_wp(3);
  std::printf("# refinement 3: wp %.8f, g0 %.6f, g0_pde %.6f, g1 %.6f, eps %.3e, richardson change %.1e, %.1f s\n",
              r3.r.wp_total, r3.r.g0_direct, r3.r.g0_pde, r3.r.g1, r3.r.epsilon, r3.r.richardson_change, r3.seconds);
  std::fflush(stdout);
  const auto r4 = hexagon_wp(4);
  std::printf("# refinement 4: wp %.8f, g0 %.6f, g0_pde %.6f, g1 %.6f, eps %.3e, richardson change %.1e, %.1f s\n",
              r4.r.wp_total, r4.r.g0_direct, r4.r.g0_pde, r4.r.g1, r4.r.epsilon, r4.r.richardson_change, r4.seconds);

  report(5, r3.r.ell_residual <= 0.05 && r4.r.ell_residual < r3.r.ell_residual && r3.r.richardson_change < 1e-4,
         "ell residual " + fmt("%.4f", r3.r.ell_residual) + " at refinement 3, " + fmt("%.4f", r4.r.ell_residual) +
             " at 4 (nodal strong residual " + fmt("%.2f", r3.r.ell_strong_residual) + ", " +
             fmt("%.2f", r4.r.ell_strong_residual) + ")");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double g = std::exp(3.0 * uni(rng));
    const double gss = 4.0 * uni(rng);
    const cplx gsz(2.0 * uni(rng), 2.0 * uni(rng)), zeta(uni(rng), uni(rng)), xi(uni(rng), uni(rng));
    const double scale = std::abs(gss) * std::norm(zeta) + 2.0 * std::abs(gsz) * std::abs(zeta) * std::abs(xi) +
                         g * std::norm(xi) + std::norm(gsz) * std::norm(zeta) / g;
    worst = std::max(worst, std::abs(fiber_integrand(gss, gsz, g, zeta, xi) - split_integrand(gss, gsz, g, zeta, xi)) /
                                scale);
  }
  const double gap3 = std::abs(r3.r.fiber_integral - (r3.r.g0_direct + r3.r.g1)) / r3.r.fiber_integral;
  report(6, gap3 <= 1e-10 && worst <= 1e-12,
         "|fiber - (g0 + g1)| / fiber " + fmt("%.1e", gap3) + ", pointwise identity over 1000 samples " +
             fmt("%.1e", worst));

  report(7, pde_gap(r3.r) <= 0.05 && pde_gap(r4.r) < pde_gap(r3.r),
         "|fiber - (g0_pde + g1)| / fiber " + fmt("%.4f", pde_gap(r3.r)) + " at refinement 3, " +
             fmt("%.4f", pde_gap(r4.r)) + " at 4");

  const double expect = r3.r.wp_total / (4 * std::numbers::pi * std::numbers::pi);
  const double area = target_area_by_quadrature(64);
  std::mt19937 krng(10);
  std::normal_distribution<double> nd(0.0, 2.0);
  double kworst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const cplx w(nd(krng), nd(krng));
    kworst = std::max(kworst, std::abs(-hurwitz::testing::ddbar_log_round_density(w) / target_metric(w) - 1.0));
  }
  report(10,
         r3.r.det_curvature == expect && r3.r.deligne_curvature == expect &&
             std::abs(area - 4 * std::numbers::pi) <= 1e-6 && kworst <= 1e-10,
         "det = deligne = wp/(4 pi^2) = " + fmt("%.10f", expect) + ", int omega_Y - 4 pi = " +
             fmt("%.1e", area - 4 * std::numbers::pi) + ", max |K - 1| " + fmt("%.1e", kworst));
}

// --- 8, 9 ----------------------------------------------------------------
std::vector<double> directional(const BranchConfiguration& c, int refinement, const std::vector<cplx>& speed,
                                double* phi_min, double* mu_min) {
  const auto s = cover(c, refinement);
  std::vector<double> out;
  for (int k = 0; k < s.b; ++k) {
    const auto r = compute_wp(s, single_point_velocity(s, k, speed[static_cast<std::size_t>(k)]));
    out.push_back(r.wp_total);
    if (phi_min) *phi_min = std::min(*phi_min, r.phi_min);
    if (mu_min) *mu_min = std::min(*mu_min, r.mu_norm2);
  }
  return out;
}

void criteria_8_9() {
  const int refinement = 2;
  const auto base = roots_of_unity_configuration(hexagon_datum());
  const std::vector<cplx> unit(6, cplx(1.0));
  double phi_min = 1e300, mu_min = 1e300;
  const auto a = directional(base, refinement, unit, &phi_min, &mu_min);
  const double amin = *std::min_element(a.begin(), a.end());
  const double amax = *std::max_element(a.begin(), a.end());
  report(8, amin > 0.0 && phi_min > 0.0 && mu_min > 0.0,
         "refinement 2: wp_total in [" + fmt("%.6f", amin) + ", " + fmt("%.6f", amax) + "] over 6 directions, min phi " +
             fmt("%.4f", phi_min) + " (min int |mu|^2 " + fmt("%.3f", mu_min) + ")");

  // 60 degrees: point j goes to where point j+1 was; velocities are pushed forward.
  const auto R60 = SphereRotation::polar(std::numbers::pi / 3);
  auto rotated = base;
  std::vector<cplx> v60;
  for (auto& p : rotated.points) {
    v60.push_back(R60.derivative(p));
    p = R60.apply(p);
  }
  const auto b = directional(rotated, refinement, v60, nullptr, nullptr);
  // the direction now sitting at p_{j+1} must carry the value of direction j
  double perm = 0.0;
  for (int j = 0; j < 6; ++j) {
    int at = -1;
    for (int i = 0; i < 6; ++i)
      if (std::abs(rotated.points[static_cast<std::size_t>(j)] - base.points[static_cast<std::size_t>(i)]) < 1e-12)
        at = i;
    const auto jj = static_cast<std::size_t>(j);
    perm = std::max(perm, at != (j + 1) % 6 ? 1.0 : std::abs(b[jj] - a[jj]) / a[jj]);
  }
  const auto R = SphereRotation::about_axis(Vec3(0.3, -0.5, 0.8).normalized(), 0.9);
  auto moved = base;
  std::vector<cplx> vr;
  for (auto& p : moved.points) {
    vr.push_back(R.derivative(p));
    p = R.apply(p);
  }
  const auto e = directional(moved, refinement, vr, nullptr, nullptr);
  double glob = 0.0;
  for (std::size_t k = 0; k < 6; ++k) glob = std::max(glob, std::abs(e[k] - a[k]) / a[k]);
  report(9, perm <= 1e-6 && glob <= 1e-6,
         "60 degree rotation permutes the values to " + fmt("%.1e", perm) + ", global rotation " + fmt("%.1e", glob) +
             " (spread of the 6 values on one mesh " + fmt("%.1e", (amax - amin) / amax) + ")");
}

}  // namespace

int main() {
  const auto t0 = clock_type::now();
  auto guarded = [](int id, auto&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  };
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criteria_5_6_7_10);
  guarded(8, criteria_8_9);
  int failures = 0;
  for (int id = 1; id <= 10; ++id) {
    const auto it = results.find(id);
    const bool ok = it != results.end() && it->second.first;
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL",
                it == results.end() ? "not run" : it->second.second.c_str());
    if (!ok) ++failures;
  }
  std::printf("%d of 10 criteria pass, %.1f s total\n", 10 - failures, since(t0));
  return failures == 0 ? 0 : 1;
}
