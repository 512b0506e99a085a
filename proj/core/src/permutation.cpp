#include "hurwitz/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hurwitz {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = degree();
  std::vector<char> seen(images_.size(), 0);
  for (int x : images_) {
    if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)])
      throw std::invalid_argument("permutation images are not a bijection");
    seen[static_cast<std::size_t>(x)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::transposition(int n, int a, int b) {
  if (a < 1 || b < 1 || a > n || b > n || a == b)
    throw std::invalid_argument("transposition points must be distinct and in 1..n");
  auto p = identity(n);
  std::swap(p.images_[static_cast<std::size_t>(a - 1)], p.images_[static_cast<std::size_t>(b - 1)]);
  return p;
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  for (const auto& c : cycles) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      const int from = c[k];
      const int to = c[(k + 1) % c.size()];
      if (from < 1 || from > n || to < 1 || to > n)
        throw std::invalid_argument("cycle point out of range");
      v[static_cast<std::size_t>(from - 1)] = to - 1;
    }
  }
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> v(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) v[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  Permutation r;
  r.images_ = std::move(v);
  return r;
}

bool Permutation::is_identity() const { return support_size() == 0; }

int Permutation::support_size() const {
  int moved = 0;
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i)) ++moved;
  return moved;
}

std::pair<int, int> Permutation::swapped_pair() const {
  if (!is_transposition()) throw std::logic_error("not a transposition");
  int first = -1;
  for (int i = 0; i < degree(); ++i) {
    if ((*this)(i) != i) {
      first = i;
      break;
    }
  }
  return {first, (*this)(first)};
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  std::vector<char> done(images_.size(), 0);
  bool any = false;
  for (int i = 0; i < degree(); ++i) {
    if (done[static_cast<std::size_t>(i)] || (*this)(i) == i) continue;
    any = true;
    os << '(';
    int j = i;
    bool first = true;
    while (!done[static_cast<std::size_t>(j)]) {
      done[static_cast<std::size_t>(j)] = 1;
      if (!first) os << ' ';
      os << j + 1;
      first = false;
      j = (*this)(j);
    }
    os << ')';
  }
  return any ? os.str() : "()";
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree())
    throw DegreeMismatch("compose: degree " + std::to_string(p.degree()) + " vs " +
                         std::to_string(q.degree()));
  std::vector<int> v(static_cast<std::size_t>(p.degree()));
  for (int i = 0; i < p.degree(); ++i) v[static_cast<std::size_t>(i)] = p(q(i));
  return Permutation(std::move(v));
}

Permutation conjugate(const Permutation& p, const Permutation& sigma) {
  if (p.degree() != sigma.degree()) throw DegreeMismatch("conjugate: degree mismatch");
  // (sigma p sigma^-1)(sigma(i)) = sigma(p(i))
  std::vector<int> v(static_cast<std::size_t>(p.degree()));
  for (int i = 0; i < p.degree(); ++i) v[static_cast<std::size_t>(sigma(i))] = sigma(p(i));
  return Permutation(std::move(v));
}

bool is_transitive(std::span<const Permutation> perms, int n) {
  if (n <= 0) return false;
  for (const auto& p : perms)
    if (p.degree() != n) throw DegreeMismatch("is_transitive: degree mismatch");
  std::vector<char> in_orbit(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  in_orbit[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& p : perms) {
      const int y = p(x);
      if (!in_orbit[static_cast<std::size_t>(y)]) {
        in_orbit[static_cast<std::size_t>(y)] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace hurwitz
