#include "hurwitz/serialize.hpp"

#include <cctype>
#include <stdexcept>

namespace hurwitz {

using nlohmann::json;

void to_json(json& j, const Permutation& p) { j = p.to_string(); }

void to_json(json& j, const MonodromyDatum& d) {
  json ts = json::array();
  for (const auto& t : d.transpositions) {
    if (t.is_transposition()) {
      const auto [a, b] = t.swapped_pair();
      ts.push_back(json::array({a + 1, b + 1}));
    } else {
      ts.push_back(t.to_string());  // invalid data stays readable
    }
  }
  json hs = json::array();
  for (const auto& [a, b] : d.handles) hs.push_back(json::array({a, b}));
  j = json{{"n", d.n}, {"h", d.h}, {"transpositions", ts}, {"handles", hs}};
}

MonodromyDatum datum_from_json(const json& j) {
  MonodromyDatum d;
  d.n = j.at("n").get<int>();
  d.h = j.value("h", 0);
  if (d.n < 1) throw std::invalid_argument("datum: n must be positive");
  for (const auto& t : j.at("transpositions")) {
    if (t.is_string()) {
      d.transpositions.push_back(parse_cycles(t.get<std::string>(), d.n));
    } else {
      const auto pr = t.get<std::vector<int>>();
      if (pr.size() != 2) throw std::invalid_argument("datum: transposition must be a pair [a, b]");
      for (int x : pr)
        if (x < 1 || x > d.n) throw std::invalid_argument("datum: point out of range in transposition");
      d.transpositions.push_back(Permutation::transposition(d.n, pr[0], pr[1]));
    }
  }
  if (j.contains("handles"))
    for (const auto& hp : j.at("handles")) {
      if (!hp.is_array() || hp.size() != 2) throw std::invalid_argument("datum: handle must be a pair of cycle strings");
      d.handles.emplace_back(parse_cycles(hp[0].get<std::string>(), d.n), parse_cycles(hp[1].get<std::string>(), d.n));
    }
  return d;
}

void to_json(json& j, const CoverNumerics& c) { j = json{{"n", c.n}, {"h", c.h}, {"b", c.b}, {"p", c.p}}; }

void to_json(json& j, const TangentDims& t) { j = json::array({t.t0, t.t1, t.t2}); }

namespace {
json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }
}  // namespace

void to_json(json& j, const CohomologyProfile& c) {
  j = json{{"n", c.n},
           {"h", c.h},
           {"b", c.b},
           {"p", c.p},
           {"degrees",
            {{"pullback", c.degrees.pullback},
             {"tangent_x", c.degrees.tangent_x},
             {"canonical_x", c.degrees.canonical_x},
             {"dual_twist", c.degrees.dual_twist}}},
           {"h0_pullback", optional_int(c.h0_pullback)},
           {"t1", optional_int(c.t1)},
           {"h1_tx", optional_int(c.h1_tx)},
           {"h1_pullback", optional_int(c.h1_pullback)},
           {"profile", json::array({optional_int(c.h0_pullback), optional_int(c.t1), optional_int(c.h1_tx),
                                    optional_int(c.h1_pullback)})},
           {"euler_pullback", c.euler_pullback},
           {"alternating_sum", optional_int(c.alternating_sum())},
           {"h0_source", c.h0_source},
           {"h1_source", c.h1_source},
           {"note", c.note}};
}

void to_json(json& j, const WPResult& r) {
  j = json{{"g0_direct", r.g0_direct},
           {"g0_pde", r.g0_pde},
           {"g1", r.g1},
           {"wp_total", r.wp_total},
           {"fiber_integral", r.fiber_integral},
           {"det_curvature", r.det_curvature},
           {"deligne_curvature", r.deligne_curvature},
           {"identity_residual", r.identity_residual},
           {"ell_residual", r.ell_residual},
           {"ell_strong_residual", r.ell_strong_residual},
           {"mu_norm2", r.mu_norm2},
           {"phi_min", r.phi_min},
           {"mu_max", r.mu_max},
           {"epsilon", r.epsilon},
           {"richardson_change", r.richardson_change},
           {"poisson_residual", r.poisson_residual},
           {"max_solver_residual", r.max_solver_residual},
           {"hyperbolic_area", r.hyperbolic_area}};
}

json metric_summary(const MetricField& m) {
  return json{{"iterations", m.iterations},
              {"residual", m.residual},
              {"area", m.area},
              {"residual_history", m.residual_history}};
}

json surface_summary(const CoverSurface& s) {
  int z = 0;
  for (const auto& v : s.vertices)
    if (v.chart.kind == ChartKind::Z) ++z;
  return json{{"n", s.n},
              {"b", s.b},
              {"genus", s.genus},
              {"vertices", s.vertex_count()},
              {"faces", s.face_count()},
              {"edges", s.edges.size()},
              {"disk_vertices", z},
              {"euler_characteristic", euler_characteristic(s)}};
}

Permutation parse_cycles(const std::string& text, int n) {
  std::vector<std::vector<int>> cycles;
  std::vector<int>* cur = nullptr;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(') {
      if (cur) throw std::invalid_argument("parse_cycles: nested '(' in \"" + text + "\"");
      cycles.emplace_back();
      cur = &cycles.back();
      ++i;
    } else if (c == ')') {
      if (!cur) throw std::invalid_argument("parse_cycles: unmatched ')' in \"" + text + "\"");
      cur = nullptr;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (!cur) throw std::invalid_argument("parse_cycles: point outside a cycle in \"" + text + "\"");
      std::size_t used = 0;
      cur->push_back(std::stoi(text.substr(i), &used));
      i += used;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
    } else {
      throw std::invalid_argument("parse_cycles: unexpected character in \"" + text + "\"");
    }
  }
  if (cur) throw std::invalid_argument("parse_cycles: unterminated cycle in \"" + text + "\"");
  return Permutation::from_cycles(n, cycles);
}

}  // namespace hurwitz
