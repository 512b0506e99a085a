#ifndef HURWITZ_PERMUTATION_HPP
#define HURWITZ_PERMUTATION_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hurwitz {

/// Permutation of {0..n-1} stored in one-line notation.
///
/// Composition follows (p * q)(i) = p(q(i)) everywhere in the library; the
/// product relation of a monodromy datum depends on this convention.
/// Public constructors that take user-facing labels use 1-based points.
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  /// Transposition swapping the 1-based points a and b.
  static Permutation transposition(int n, int a, int b);
  /// Builds from disjoint cycles written with 1-based points.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const;
  bool is_identity() const;
  /// Number of points moved.
  int support_size() const;
  bool is_transposition() const { return support_size() == 2; }
  /// For a transposition: the swapped pair (0-based, first < second).
  std::pair<int, int> swapped_pair() const;

  /// Cycle notation with 1-based points, "()" for the identity.
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<int> images_;
};

class DegreeMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// (p * q)(i) = p(q(i)). Throws DegreeMismatch.
Permutation compose(const Permutation& p, const Permutation& q);
inline Permutation operator*(const Permutation& p, const Permutation& q) { return compose(p, q); }

/// sigma * p * sigma^{-1}.
Permutation conjugate(const Permutation& p, const Permutation& sigma);

/// True iff the group generated by perms acts transitively on {0..n-1}.
bool is_transitive(std::span<const Permutation> perms, int n);

/// All n! permutations of degree n in lexicographic order of images.
std::vector<Permutation> all_permutations(int n);

}  // namespace hurwitz

#endif
