#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "hurwitz/cli.hpp"
#include "hurwitz/cohomology.hpp"
#include "hurwitz/combinatorics.hpp"
#include "hurwitz/hyperbolic_solver.hpp"
#include "hurwitz/operators.hpp"
#include "hurwitz/serialize.hpp"
#include "hurwitz/wp_geometry.hpp"

namespace hurwitz::cli {

using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void check_budget(const ExperimentConfig& c, clock_type::time_point t0, const char* stage) {
  if (c.budget_seconds > 0.0 && seconds_since(t0) > c.budget_seconds)
    throw BudgetExceeded(std::string("time budget of ") + std::to_string(c.budget_seconds) + " s exhausted after " +
                         stage);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

// "x y" or "x,y" -> two numbers
std::vector<double> numbers(const std::string& s, const char* what) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<double> v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw ConfigError(std::string("cannot parse ") + what + " \"" + s + "\"");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MeshOptions mesh_options(const ExperimentConfig& c) {
  MeshOptions m;
  m.refinement = c.refinement;
  m.disk_radius = c.disk_radius;
  return m;
}

SolverOptions solver_options(const ExperimentConfig& c) {
  SolverOptions o;
  o.tolerance = c.solver_tolerance;
  o.max_iterations = c.max_iterations;
  return o;
}

FamilyOptions family_options(const ExperimentConfig& c) {
  FamilyOptions o;
  o.solver = solver_options(c);
  o.epsilon = c.epsilon;
  o.richardson_tolerance = c.richardson_tolerance;
  o.max_halvings = c.max_halvings;
  o.threads = c.workers;
  return o;
}

double target_area(const CoverSurface& s) { return -2.0 * std::numbers::pi * euler_characteristic(s); }

std::string vertex_row_prefix(const CoverSurface& s, int v) {
  const auto& cv = s.vertices[static_cast<std::size_t>(v)];
  std::ostringstream o;
  o << std::setprecision(17) << v << ',' << cv.sheet << ',' << to_string(cv.chart) << ',' << cv.coord.real() << ','
    << cv.coord.imag();
  return o.str();
}

// Ratios log(r_{k+1}/r_k) / log(r_k/r_{k-1}); about 2 for Newton's terminal phase.
std::vector<double> convergence_orders(const std::vector<double>& r) {
  std::vector<double> q;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    if (!(r[k + 1] > 0.0) || !(r[k] > 0.0) || !(r[k - 1] > 0.0)) continue;
    const double den = std::log(r[k] / r[k - 1]);
    if (den == 0.0) continue;
    q.push_back(std::log(r[k + 1] / r[k]) / den);
  }
  return q;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  };
  if (n < 1) throw ConfigError("n must be at least 1");
  if (h < 0) throw ConfigError("h must be non-negative");
  if (b < 0) throw ConfigError("b must be non-negative");
  if (refinement < 0) throw ConfigError("refinement must be non-negative");
  positive(disk_radius, "disk_radius");
  positive(solver_tolerance, "solver_tolerance");
  positive(identity_tolerance, "identity_tolerance");
  if (richardson_tolerance < 0.0) throw ConfigError("richardson_tolerance must be non-negative");
  if (epsilon < 0.0) throw ConfigError("epsilon must be non-negative (0 picks it automatically)");
  if (max_iterations < 1) throw ConfigError("max_iterations must be positive");
  if (max_halvings < 0) throw ConfigError("max_halvings must be non-negative");
  if (samples < 1) throw ConfigError("samples must be positive");
  if (workers < 1) throw ConfigError("workers must be positive");
  if (budget_seconds < 0.0) throw ConfigError("budget_seconds must be non-negative");
  if (command == "convergence") {
    const auto l = level_list();
    if (l.size() < 3) throw ConfigError("convergence needs at least 3 refinement levels");
  }
}

std::vector<int> ExperimentConfig::level_list() const {
  std::vector<int> out;
  for (const auto& part : split(levels, ',')) {
    if (blank(part)) continue;
    const auto v = numbers(part, "levels");
    if (v.size() != 1 || v[0] != std::floor(v[0]) || v[0] < 0)
      throw ConfigError("levels must be non-negative integers, got \"" + levels + "\"");
    out.push_back(static_cast<int>(v[0]));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ConfigError("levels must be strictly increasing, got \"" + levels + "\"");
  return out;
}

BranchConfiguration branch_configuration(const ExperimentConfig& c) {
  MonodromyDatum d;
  std::vector<cplx> pts;
  bool have_points = false;
  if (!c.input.empty()) {
    json doc;
    try {
      doc = json::parse(read_file(c.input));
    } catch (const json::parse_error& e) {
      throw ConfigError("input " + c.input + ": " + e.what());
    }
    try {
      d = datum_from_json(doc.contains("datum") ? doc.at("datum") : doc);
      if (doc.contains("points")) {
        for (const auto& p : doc.at("points")) {
          const auto xy = p.get<std::vector<double>>();
          if (xy.size() != 2) throw ConfigError("input points must be [re, im] pairs");
          pts.emplace_back(xy[0], xy[1]);
        }
        have_points = true;
      }
    } catch (const json::exception& e) {
      throw ConfigError("input " + c.input + ": " + e.what());
    }
  } else if (!blank(c.transpositions)) {
    std::vector<std::pair<int, int>> ts;
    for (const auto& part : split(c.transpositions, ';')) {
      if (blank(part)) continue;
      const auto v = numbers(part, "transposition");
      if (v.size() != 2) throw ConfigError("transpositions are \"a b\" pairs separated by ';'");
      ts.emplace_back(static_cast<int>(v[0]), static_cast<int>(v[1]));
    }
    try {
      d = make_datum(c.n, ts);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("transpositions: ") + e.what());
    }
  } else if (c.n == 2) {
    d = make_datum(2, std::vector<std::pair<int, int>>(static_cast<std::size_t>(c.b), {1, 2}));
  } else {
    const auto classes = enumerate_classes(c.n, c.b, c.workers,
                                           EnumerationLimits{c.max_degree, c.max_branch_points});
    if (classes.empty())
      throw ConfigError("no covering of degree " + std::to_string(c.n) + " with " + std::to_string(c.b) +
                        " branch points");
    d = classes.front();
  }
  if (d.h != 0) throw ConfigError("geometry is implemented over P1 only (h = 0)");
  const auto v = validate(d);
  if (!v) throw ConfigError("invalid monodromy (" + to_string(v.defect) + "): " + v.detail);

  if (!have_points && c.points != "roots") {
    for (const auto& part : split(c.points, ';')) {
      if (blank(part)) continue;
      const auto xy = numbers(part, "point");
      if (xy.size() != 2) throw ConfigError("points are \"re im\" pairs separated by ';'");
      pts.emplace_back(xy[0], xy[1]);
    }
    have_points = true;
  }
  if (c.command == "solve-metric" || c.command == "wp-norm" || c.command == "convergence") {
    const int p = genus_from_relation(d.n, 0, d.branch_count());
    if (p < 2) throw ConfigError("cover genus " + std::to_string(p) + " < 2 carries no hyperbolic metric");
  }
  if (!have_points) return roots_of_unity_configuration(d);
  if (static_cast<int>(pts.size()) != d.branch_count())
    throw ConfigError("got " + std::to_string(pts.size()) + " branch points for " +
                      std::to_string(d.branch_count()) + " transpositions");
  return BranchConfiguration{pts, d};
}

json cmd_enumerate(const ExperimentConfig& c) {
  const auto t0 = clock_type::now();
  const auto classes = enumerate_classes(c.n, c.b, c.workers, EnumerationLimits{c.max_degree, c.max_branch_points});
  json cl = json::array();
  for (const auto& d : classes) cl.push_back(d);
  json r{{"n", c.n}, {"b", c.b}, {"count", classes.size()}, {"classes", cl}};
  check_budget(c, t0, "enumeration");
  return r;
}

json cmd_orbits(const ExperimentConfig& c) {
  const auto t0 = clock_type::now();
  const auto classes = enumerate_classes(c.n, c.b, c.workers, EnumerationLimits{c.max_degree, c.max_branch_points});
  check_budget(c, t0, "enumeration");
  const auto orbits = braid_orbits(classes);
  json cl = json::array();
  for (const auto& d : classes) cl.push_back(d);
  return json{{"n", c.n},
              {"b", c.b},
              {"class_count", classes.size()},
              {"orbit_count", orbits.size()},
              {"connected", orbits.size() == 1},
              {"orbits", orbits},
              {"classes", cl}};
}

json cmd_dims(const ExperimentConfig& c) {
  const auto num = cover_numerics(c.n, c.h, c.b);
  const auto prof = cohomology_profile(c.n, c.h, c.b);
  const bool euler = c.b == c.n * (2 - 2 * c.h) + 2 * num.p - 2;
  const auto alt = prof.alternating_sum();
  return json{{"numerics", num},
              {"profile", prof},
              {"determined",
               {{"h0_pullback", prof.h0_pullback.has_value()},
                {"t1", prof.t1.has_value()},
                {"h1_tx", prof.h1_tx.has_value()},
                {"h1_pullback", prof.h1_pullback.has_value()}}},
              {"tangent_dims", tangent_dims(c.b)},
              {"hypercohomology", hypercohomology_dims(c.n, c.h, c.b)},
              {"obstruction_vanishes", obstruction_vanishes(num.p, c.b)},
              {"euler_relation", euler},
              {"exact", alt ? json(*alt == 0) : json(nullptr)}};
}

json cmd_solve_metric(const ExperimentConfig& c, Sidecars* side) {
  const auto t0 = clock_type::now();
  const auto surface = build_cover(branch_configuration(c), mesh_options(c));
  check_budget(c, t0, "mesh construction");
  const auto ops = assemble_operators(surface);
  const auto metric = solve_liouville(surface, ops, solver_options(c));
  const double target = target_area(surface);
  json r{{"surface", surface_summary(surface)},
         {"metric", metric_summary(metric)},
         {"target_area", target},
         {"area_error", std::abs(metric.area - target) / target},
         {"newton_orders", convergence_orders(metric.residual_history)}};
  if (c.init_check) {
    check_budget(c, t0, "metric solve");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd u0(surface.vertex_count());
    for (int i = 0; i < u0.size(); ++i) u0[i] = uni(rng);
    const auto other = solve_liouville(surface, ops, solver_options(c), u0);
    r["init_independence"] = (metric.u - other.u).lpNorm<Eigen::Infinity>();
  }
  if (side) {
    if (!c.mesh_out.empty()) side->push_back({c.mesh_out, false, {}, mesh_document(surface)});
    if (!c.dump_fields.empty()) {
      const auto mass = hyperbolic_mass(ops, metric);
      std::ostringstream o;
      o << std::setprecision(17) << "vertex,sheet,chart,re,im,u,log_g,background_area,curvature,hyperbolic_mass\n";
      for (int v = 0; v < surface.vertex_count(); ++v)
        o << vertex_row_prefix(surface, v) << ',' << metric.u[v] << ',' << metric.log_g[v] << ',' << ops.area[v]
          << ',' << ops.curvature[v] << ',' << mass[v] << '\n';
      o << "# residual_history";
      for (double x : metric.residual_history) o << ',' << x;
      o << '\n';
      side->push_back({c.dump_fields, true, o.str(), {}});
    }
  }
  r["seconds"] = seconds_since(t0);
  return r;
}

json cmd_wp_norm(const ExperimentConfig& c, Sidecars* side) {
  const auto t0 = clock_type::now();
  const auto surface = build_cover(branch_configuration(c), mesh_options(c));
  if (c.k < 0 || c.k >= surface.b)
    throw ConfigError("moving index k must lie in 0.." + std::to_string(surface.b - 1));
  check_budget(c, t0, "mesh construction");
  WPTensors t;
  const auto res = compute_wp(surface, single_point_velocity(surface, c.k), family_options(c), &t);
  json r{{"k", c.k},
         {"surface", surface_summary(surface)},
         {"wp", res},
         {"fiber_gap", std::abs(res.fiber_integral - (res.g0_direct + res.g1)) / res.fiber_integral},
         {"pde_gap", std::abs(res.fiber_integral - (res.g0_pde + res.g1)) / res.fiber_integral},
         {"wp_positive", res.wp_total > 0.0},
         {"phi_positive", res.phi_min > 0.0},
         {"curvature_scaling", res.det_curvature == res.deligne_curvature &&
                                   res.det_curvature == res.wp_total / (4.0 * std::numbers::pi * std::numbers::pi)}};
  if (side) {
    if (!c.mesh_out.empty()) side->push_back({c.mesh_out, false, {}, mesh_document(surface)});
    if (!c.dump_fields.empty()) {
      std::ostringstream o;
      o << std::setprecision(17)
        << "vertex,sheet,chart,re,im,g,phi,mu_abs2,g_ssbar,g_szbar_re,g_szbar_im,a_re,a_im,weight\n";
      for (int v = 0; v < surface.vertex_count(); ++v) {
        const double mu2 = t.mu2.size() == t.g.size() ? t.mu2[v] : std::norm(t.mu[v]);
        o << vertex_row_prefix(surface, v) << ',' << t.g[v] << ',' << t.phi[v] << ',' << mu2 << ',' << t.g_ssbar[v]
          << ',' << t.g_szbar[v].real() << ',' << t.g_szbar[v].imag() << ',' << t.a[v].real() << ','
          << t.a[v].imag() << ',' << t.weight[v] << '\n';
      }
      side->push_back({c.dump_fields, true, o.str(), {}});
    }
  }
  r["seconds"] = seconds_since(t0);
  return r;
}

json cmd_identity_check(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> logg(-3.0, 3.0);
  double worst = 0.0;
  int worst_at = -1;
  for (int i = 0; i < c.samples; ++i) {
    const double g = std::exp(logg(rng));
    const double g_ssbar = 4.0 * uni(rng);
    const cplx g_szbar(2.0 * uni(rng), 2.0 * uni(rng));
    const cplx zeta(uni(rng), uni(rng)), xi(uni(rng), uni(rng));
    const double f = fiber_integrand(g_ssbar, g_szbar, g, zeta, xi);
    const double sp = split_integrand(g_ssbar, g_szbar, g, zeta, xi);
    const double scale = std::abs(g_ssbar) * std::norm(zeta) + 2.0 * std::abs(g_szbar) * std::abs(zeta) * std::abs(xi) +
                         g * std::norm(xi) + std::norm(g_szbar) * std::norm(zeta) / g;
    const double res = std::abs(f - sp) / std::max(scale, 1e-300);
    if (res > worst) {
      worst = res;
      worst_at = i;
    }
  }
  return json{{"samples", c.samples},
              {"seed", c.seed},
              {"max_residual", worst},
              {"worst_sample", worst_at},
              {"tolerance", c.identity_tolerance},
              {"pass", worst <= c.identity_tolerance}};
}

json convergence_study(const ExperimentConfig& c) {
  const auto levels = c.level_list();
  if (levels.size() < 3) throw ConfigError("convergence needs at least 3 refinement levels");
  const auto config = branch_configuration(c);
  if (c.k < 0 || c.k >= config.monodromy.branch_count())
    throw ConfigError("moving index k must lie in 0.." + std::to_string(config.monodromy.branch_count() - 1));

  const auto t0 = clock_type::now();
  json rows = json::array(), timing = json::array();
  json report{{"levels", levels}, {"k", c.k}, {"complete", false}, {"stopped_by", nullptr}};
  for (int level : levels) {
    if (c.budget_seconds > 0.0 && seconds_since(t0) > c.budget_seconds) {
      report["stopped_by"] = {{"kind", "budget_exceeded"},
                              {"message", "time budget exhausted before level " + std::to_string(level)}};
      break;
    }
    const auto tl = clock_type::now();
    try {
      auto m = mesh_options(c);
      m.refinement = level;
      const auto surface = build_cover(config, m);
      const auto res = compute_wp(surface, single_point_velocity(surface, c.k), family_options(c));
      const double target = target_area(surface);
      rows.push_back(json{{"level", level},
                          {"vertices", surface.vertex_count()},
                          {"faces", surface.face_count()},
                          {"area", res.hyperbolic_area},
                          {"area_error", std::abs(res.hyperbolic_area - target) / target},
                          {"ell_residual", res.ell_residual},
                          {"ell_strong_residual", res.ell_strong_residual},
                          {"g0_direct", res.g0_direct},
                          {"g0_pde", res.g0_pde},
                          {"g0_gap", std::abs(res.g0_pde - res.g0_direct)},
                          {"g1", res.g1},
                          {"wp_total", res.wp_total},
                          {"fiber_integral", res.fiber_integral},
                          {"pde_gap", std::abs(res.fiber_integral - (res.g0_pde + res.g1)) / res.fiber_integral},
                          {"phi_min", res.phi_min},
                          {"epsilon", res.epsilon},
                          {"richardson_change", res.richardson_change}});
      timing.push_back(json{{"level", level}, {"seconds", seconds_since(tl)}});
    } catch (const SolverFailure& e) {
      report["stopped_by"] = {{"kind", "solver_failure"}, {"level", level}, {"message", e.what()}};
      break;
    } catch (const DegenerateGeometry& e) {
      report["stopped_by"] = {{"kind", "degenerate_geometry"}, {"level", level}, {"message", e.what()}};
      break;
    } catch (const BudgetExceeded& e) {
      report["stopped_by"] = {{"kind", "budget_exceeded"}, {"level", level}, {"message", e.what()}};
      break;
    }
  }
  report["complete"] = rows.size() == levels.size();

  // Monotonicity: null when too few rows. The area column sits at roundoff,
  // so it only has to be non-increasing up to 1e-12.
  auto column = [&](const char* key) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.at(key).get<double>());
    return v;
  };
  auto decreasing = [](const std::vector<double>& v, double slack) -> json {
    if (v.size() < 2) return nullptr;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1] + slack)) return false;
    return true;
  };
  const auto wp = column("wp_total");
  std::vector<double> wp_diff;
  for (std::size_t i = 1; i < wp.size(); ++i) wp_diff.push_back(std::abs(wp[i] - wp[i - 1]));
  report["rows"] = rows;
  report["wp_differences"] = wp_diff;
  report["monotone"] = {{"area_error_nonincreasing", decreasing(column("area_error"), 1e-12)},
                        {"ell_residual_decreasing", decreasing(column("ell_residual"), 0.0)},
                        {"g0_gap_decreasing", decreasing(column("g0_gap"), 0.0)},
                        {"wp_differences_decreasing", decreasing(wp_diff, 0.0)}};
  report["timing"] = timing;
  return report;
}

std::string convergence_csv(const json& report) {
  static const char* cols[] = {"level",        "vertices",     "faces",       "area",
                               "area_error",   "ell_residual", "ell_strong_residual",
                               "g0_direct",    "g0_pde",       "g0_gap",      "g1",
                               "wp_total",     "fiber_integral", "pde_gap",   "phi_min",
                               "epsilon",      "richardson_change"};
  std::ostringstream o;
  o << std::setprecision(17);
  for (std::size_t i = 0; i < std::size(cols); ++i) o << (i ? "," : "") << cols[i];
  o << '\n';
  for (const auto& r : report.at("rows")) {
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) o << ',';
      const auto& v = r.at(cols[i]);
      if (v.is_number_integer())
        o << v.get<long long>();
      else
        o << v.get<double>();
    }
    o << '\n';
  }
  return o.str();
}

json mesh_document(const CoverSurface& s) {
  const auto pos = sphere_positions(s, {});
  json verts = json::array();
  for (int v = 0; v < s.vertex_count(); ++v) {
    const auto& cv = s.vertices[static_cast<std::size_t>(v)];
    const auto& p = pos[static_cast<std::size_t>(v)];
    verts.push_back(json{{"sheet", cv.sheet},
                         {"chart", to_string(cv.chart)},
                         {"coord", {cv.coord.real(), cv.coord.imag()}},
                         {"position", {p.x(), p.y(), p.z()}}});
  }
  json faces = json::array();
  for (const auto& f : s.faces) faces.push_back({f[0], f[1], f[2]});
  json cones = json::array();
  for (const auto& r : s.ramification)
    cones.push_back(json{{"vertex", r.vertex}, {"branch", r.branch}, {"cone_angle", r.cone_angle}});
  json branch = json::array();
  for (const auto& p : s.config.points) branch.push_back({p.real(), p.imag()});
  return json{{"format", "hurwitz-mesh/1"},
              {"n", s.n},
              {"b", s.b},
              {"genus", s.genus},
              {"datum", s.config.monodromy},
              {"branch_points", branch},
              {"vertices", verts},
              {"faces", faces},
              {"cones", cones}};
}

}  // namespace hurwitz::cli
