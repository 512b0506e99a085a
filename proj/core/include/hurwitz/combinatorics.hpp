#ifndef HURWITZ_COMBINATORICS_HPP
#define HURWITZ_COMBINATORICS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hurwitz/permutation.hpp"

namespace hurwitz {

/// Combinatorial type of a simple branched covering X -> Y of degree n over a
/// base of genus h: one transposition per branch point and h pairs of handle
/// generators. Valid data satisfy
///
///   [a_1,b_1] ... [a_h,b_h] * t_1 * ... * t_b = id,   [a,b] = a b a^-1 b^-1,
///
/// and generate a transitive subgroup of S_n.
struct MonodromyDatum {
  int n = 0;
  int h = 0;
  std::vector<Permutation> transpositions;
  std::vector<std::pair<Permutation, Permutation>> handles;

  int branch_count() const { return static_cast<int>(transpositions.size()); }
  friend bool operator==(const MonodromyDatum&, const MonodromyDatum&) = default;
};

/// Builds a genus-0 datum from 1-based transposition pairs.
MonodromyDatum make_datum(int n, const std::vector<std::pair<int, int>>& transpositions);

enum class DatumDefect {
  none,
  degree_too_small,
  negative_base_genus,
  no_branch_points,
  degree_mismatch,
  handle_count,
  not_a_transposition,
  product_relation,
  not_transitive,
};

struct Validation {
  bool ok = true;
  DatumDefect defect = DatumDefect::none;
  std::string detail;
  explicit operator bool() const { return ok; }
};

std::string to_string(DatumDefect d);

Validation validate(const MonodromyDatum& d);

/// Handles first, left to right, then transpositions left to right.
Permutation monodromy_product(const MonodromyDatum& d);

struct CoverNumerics {
  int n = 0;
  int h = 0;
  int b = 0;
  int p = 0;
};

class ImpossibleType : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cover genus from b = n(2-2h) + 2p - 2. Throws ImpossibleType when p would
/// be non-integral or negative.
int genus_from_relation(int n, int h, int b);
CoverNumerics cover_numerics(int n, int h, int b);

struct EnumerationLimits {
  int max_degree = 6;
  int max_branch_points = 8;
};

/// One representative per S_n-conjugation class of valid genus-0 transposition
/// tuples of length b. Representatives are the lexicographically least tuple
/// in their class (transpositions ordered by their sorted 1-based pair), and
/// the returned list is sorted. `workers` splits the search; the result does
/// not depend on it. Throws BudgetExceeded outside the limits.
std::vector<MonodromyDatum> enumerate_classes(int n, int b, int workers = 1,
                                              EnumerationLimits limits = {});

/// Lexicographically least simultaneous conjugate of the transposition tuple.
MonodromyDatum canonical_form(const MonodromyDatum& d);

class IndexOutOfRange : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Elementary Hurwitz move at 1-based position i:
///   (t_i, t_{i+1}) -> (t_{i+1}, t_{i+1}^-1 t_i t_{i+1}).
MonodromyDatum braid_move(const MonodromyDatum& d, int i);
/// Inverse of braid_move at the same position.
MonodromyDatum braid_move_inverse(const MonodromyDatum& d, int i);

/// Partition of the given classes into orbits of the braid group action.
/// Each orbit lists indices into `classes` in increasing order; orbits are
/// sorted by their first index.
std::vector<std::vector<std::size_t>> braid_orbits(const std::vector<MonodromyDatum>& classes);

/// Sheet count of the branch-locus map: the number of classes.
std::size_t delta_degree(int n, int b);

/// Order of the centralizer in S_n of the monodromy group. Throws
/// std::invalid_argument for invalid data.
int automorphism_order(const MonodromyDatum& d);

}  // namespace hurwitz

#endif
