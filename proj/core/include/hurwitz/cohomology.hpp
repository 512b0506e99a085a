#ifndef HURWITZ_COHOMOLOGY_HPP
#define HURWITZ_COHOMOLOGY_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace hurwitz {

// Dimension bookkeeping for deformations of a simple branched covering
// beta: X -> Y of degree n, base genus h, b branch points and cover genus p.
// Everything here is exact integer arithmetic: Riemann-Roch
// chi(L) = deg L - p + 1, Serre duality h^1(L) = h^0(K_X - L), and vanishing of
// h^0 in negative degree. Nothing is guessed: entries no degree argument can
// pin down stay empty.

struct TangentDims {
  int t0 = 0;
  int t1 = 0;
  int t2 = 0;
  friend bool operator==(const TangentDims&, const TangentDims&) = default;
};

struct BundleDegrees {
  int pullback = 0;     // deg beta^* T_Y = n(2-2h)
  int tangent_x = 0;    // deg T_X = 2-2p
  int canonical_x = 0;  // deg K_X = 2p-2
  int dual_twist = 0;   // deg (beta^* T_Y)^* (x) K_X = 4p-4-b
};

/// Four terms of 0 -> H^0(beta^*T_Y) -> T^1(X/Y) -> H^1(T_X) -> H^1(beta^*T_Y) -> 0.
struct CohomologyProfile {
  int n = 0;
  int h = 0;
  int b = 0;
  int p = 0;
  BundleDegrees degrees;
  std::optional<int> h0_pullback;
  std::optional<int> t1;
  std::optional<int> h1_tx;
  std::optional<int> h1_pullback;
  /// chi(beta^* T_Y) = h0_pullback - h1_pullback, always known.
  int euler_pullback = 0;
  /// How each pullback entry was obtained ("degree", "serre", "exactness",
  /// "trivial_bundle") or why it is undetermined.
  std::string h0_source;
  std::string h1_source;
  std::string note;

  bool fully_determined() const { return h0_pullback && t1 && h1_tx && h1_pullback; }
  /// h0 - t1 + h1_tx - h1; only meaningful when fully determined.
  std::optional<int> alternating_sum() const;
};

class GenusTooSmall : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// (T^0, T^1, T^2) = (0, b, 0); deformations of X/Y are unobstructed.
TangentDims tangent_dims(int b);

/// H^1(X, beta^* T_Y) = 0 is forced by degree when b > 4p - 4. Requires p >= 2.
bool obstruction_vanishes(int p, int b);

BundleDegrees bundle_degrees(int n, int h, int b);

/// Requires p = genus_from_relation(n, h, b) >= 2; throws GenusTooSmall
/// otherwise (and ImpossibleType for types violating the genus relation).
CohomologyProfile cohomology_profile(int n, int h, int b);

/// Hypercohomology of the two-term complex T_X -> beta^* T_Y, identified with
/// the tangent cohomology: (0, b, 0).
TangentDims hypercohomology_dims(int n, int h, int b);

}  // namespace hurwitz

#endif
