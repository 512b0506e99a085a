#include "hurwitz/cohomology.hpp"

#include "hurwitz/combinatorics.hpp"

namespace hurwitz {

std::optional<int> CohomologyProfile::alternating_sum() const {
  if (!fully_determined()) return std::nullopt;
  return *h0_pullback - *t1 + *h1_tx - *h1_pullback;
}

TangentDims tangent_dims(int b) {
  if (b < 1) throw std::invalid_argument("tangent_dims: b must be >= 1");
  return {0, b, 0};
}

bool obstruction_vanishes(int p, int b) {
  if (p < 2) throw GenusTooSmall("obstruction_vanishes: requires p >= 2");
  return b > 4 * p - 4;
}

BundleDegrees bundle_degrees(int n, int h, int b) {
  const int p = genus_from_relation(n, h, b);
  BundleDegrees d;
  d.pullback = n * (2 - 2 * h);
  d.tangent_x = 2 - 2 * p;
  d.canonical_x = 2 * p - 2;
  d.dual_twist = d.canonical_x - d.pullback;
  return d;
}

CohomologyProfile cohomology_profile(int n, int h, int b) {
  if (n < 2) throw std::invalid_argument("cohomology_profile: degree must be >= 2");
  if (h < 0) throw std::invalid_argument("cohomology_profile: base genus must be >= 0");
  if (b < 1) throw std::invalid_argument("cohomology_profile: b must be >= 1");
  const int p = genus_from_relation(n, h, b);
  if (p < 2) throw GenusTooSmall("cohomology_profile: cover genus " + std::to_string(p) + " < 2");

  CohomologyProfile prof;
  prof.n = n;
  prof.h = h;
  prof.b = b;
  prof.p = p;
  prof.degrees = bundle_degrees(n, h, b);
  prof.t1 = b;
  // deg T_X < 0, so H^0(T_X) = 0 and h^1 = -chi = 3p - 3.
  prof.h1_tx = 3 * p - 3;

  const int deg = prof.degrees.pullback;
  prof.euler_pullback = deg - p + 1;

  if (h == 1) {
    // T_Y is trivial on an elliptic curve, hence so is its pullback.
    prof.h0_pullback = 1;
    prof.h1_pullback = p;
    prof.h0_source = "trivial_bundle";
    prof.h1_source = "trivial_bundle";
    prof.note =
        "elliptic base: beta^*T_Y is trivial, so h0 = 1; this disagrees with the claim that "
        "H^0(X, beta^*T_Y) vanishes unless Y = P1";
  } else if (deg < 0) {
    prof.h0_pullback = 0;
    prof.h1_pullback = -prof.euler_pullback;
    prof.h0_source = "degree";
    prof.h1_source = "riemann_roch";
  } else if (prof.degrees.dual_twist < 0) {
    prof.h1_pullback = 0;
    prof.h0_pullback = prof.euler_pullback;
    prof.h1_source = "serre";
    prof.h0_source = "riemann_roch";
  } else {
    prof.h0_source = "undetermined";
    prof.h1_source = "undetermined";
    prof.note = "dual twist has degree " + std::to_string(prof.degrees.dual_twist) +
                " >= 0; h0 and h1 of beta^*T_Y are not forced by degree (only their difference is)";
  }

  // Exactness fills a single missing entry; both pullback entries are either
  // known or unknown together above, so this only cross-checks.
  if (prof.h0_pullback && !prof.h1_pullback) {
    prof.h1_pullback = *prof.h0_pullback - *prof.t1 + *prof.h1_tx;
    prof.h1_source = "exactness";
  } else if (!prof.h0_pullback && prof.h1_pullback) {
    prof.h0_pullback = *prof.t1 - *prof.h1_tx + *prof.h1_pullback;
    prof.h0_source = "exactness";
  }
  return prof;
}

TangentDims hypercohomology_dims(int n, int h, int b) {
  const int p = genus_from_relation(n, h, b);
  if (p < 2) throw GenusTooSmall("hypercohomology_dims: cover genus " + std::to_string(p) + " < 2");
  return tangent_dims(b);
}

}  // namespace hurwitz
