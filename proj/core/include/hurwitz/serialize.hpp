#ifndef HURWITZ_SERIALIZE_HPP
#define HURWITZ_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "hurwitz/cohomology.hpp"
#include "hurwitz/combinatorics.hpp"
#include "hurwitz/hyperbolic_solver.hpp"
#include "hurwitz/permutation.hpp"
#include "hurwitz/surface_mesh.hpp"
#include "hurwitz/wp_geometry.hpp"

namespace hurwitz {

// JSON views of the result types. Permutations are written in cycle notation
// with 1-based points, complex numbers as [re, im].

void to_json(nlohmann::json& j, const Permutation& p);
void to_json(nlohmann::json& j, const MonodromyDatum& d);
void to_json(nlohmann::json& j, const CoverNumerics& c);
void to_json(nlohmann::json& j, const TangentDims& t);
void to_json(nlohmann::json& j, const CohomologyProfile& c);
void to_json(nlohmann::json& j, const WPResult& r);

/// Inverse of the datum writer. Transpositions may be [a, b] pairs or cycle
/// strings; handles are pairs of cycle strings. Throws std::invalid_argument.
MonodromyDatum datum_from_json(const nlohmann::json& j);

/// Summary of a solved metric (no per-vertex data).
nlohmann::json metric_summary(const MetricField& m);
/// Vertex, face and chart counts of a cover.
nlohmann::json surface_summary(const CoverSurface& s);

/// Parses "(1 2)(3 4)" style cycle notation (1-based) into a permutation of degree n.
Permutation parse_cycles(const std::string& text, int n);

}  // namespace hurwitz

#endif
