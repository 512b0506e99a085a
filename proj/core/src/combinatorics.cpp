#include "hurwitz/combinatorics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <thread>

namespace hurwitz {

MonodromyDatum make_datum(int n, const std::vector<std::pair<int, int>>& transpositions) {
  MonodromyDatum d;
  d.n = n;
  d.h = 0;
  for (auto [a, b] : transpositions) d.transpositions.push_back(Permutation::transposition(n, a, b));
  return d;
}

std::string to_string(DatumDefect d) {
  switch (d) {
    case DatumDefect::none: return "ok";
    case DatumDefect::degree_too_small: return "degree_too_small";
    case DatumDefect::negative_base_genus: return "negative_base_genus";
    case DatumDefect::no_branch_points: return "no_branch_points";
    case DatumDefect::degree_mismatch: return "degree_mismatch";
    case DatumDefect::handle_count: return "handle_count";
    case DatumDefect::not_a_transposition: return "not_a_transposition";
    case DatumDefect::product_relation: return "product_relation";
    case DatumDefect::not_transitive: return "not_transitive";
  }
  return "unknown";
}

Permutation monodromy_product(const MonodromyDatum& d) {
  auto prod = Permutation::identity(d.n);
  for (const auto& [a, b] : d.handles) prod = prod * a * b * a.inverse() * b.inverse();
  for (const auto& t : d.transpositions) prod = prod * t;
  return prod;
}

Validation validate(const MonodromyDatum& d) {
  auto fail = [](DatumDefect defect, std::string detail) {
    return Validation{false, defect, std::move(detail)};
  };
  if (d.n < 2) return fail(DatumDefect::degree_too_small, "degree must be at least 2");
  if (d.h < 0) return fail(DatumDefect::negative_base_genus, "base genus must be >= 0");
  if (d.transpositions.empty()) return fail(DatumDefect::no_branch_points, "b must be >= 1");
  if (static_cast<int>(d.handles.size()) != d.h)
    return fail(DatumDefect::handle_count, "expected " + std::to_string(d.h) + " handle pairs");
  std::vector<Permutation> gens;
  for (std::size_t i = 0; i < d.transpositions.size(); ++i) {
    const auto& t = d.transpositions[i];
    if (t.degree() != d.n) return fail(DatumDefect::degree_mismatch, "transposition " + std::to_string(i + 1));
    if (!t.is_transposition())
      return fail(DatumDefect::not_a_transposition, "entry " + std::to_string(i + 1) + " is " + t.to_string());
    gens.push_back(t);
  }
  for (const auto& [a, b] : d.handles) {
    if (a.degree() != d.n || b.degree() != d.n) return fail(DatumDefect::degree_mismatch, "handle generator");
    gens.push_back(a);
    gens.push_back(b);
  }
  const auto prod = monodromy_product(d);
  if (!prod.is_identity()) return fail(DatumDefect::product_relation, "product is " + prod.to_string());
  if (!is_transitive(gens, d.n)) return fail(DatumDefect::not_transitive, "monodromy group is not transitive");
  return {};
}

int genus_from_relation(int n, int h, int b) {
  const int twice_p = b - n * (2 - 2 * h) + 2;
  if (twice_p % 2 != 0)
    throw ImpossibleType("b - n(2-2h) must be even (n=" + std::to_string(n) + ", h=" + std::to_string(h) +
                         ", b=" + std::to_string(b) + ")");
  if (twice_p < 0)
    throw ImpossibleType("negative cover genus (n=" + std::to_string(n) + ", h=" + std::to_string(h) +
                         ", b=" + std::to_string(b) + ")");
  return twice_p / 2;
}

CoverNumerics cover_numerics(int n, int h, int b) { return {n, h, b, genus_from_relation(n, h, b)}; }

namespace {

// Transpositions of S_n indexed in lexicographic order of their 0-based pair,
// which coincides with the order of the 1-based pairs.
struct TranspositionTable {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> index_of;          // index_of[a][b]
  std::vector<std::vector<std::uint8_t>> conj;     // conj[sigma][t]
  std::vector<std::vector<int>> sigma_images;

  explicit TranspositionTable(int degree) : n(degree) {
    index_of.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        index_of[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = static_cast<int>(pairs.size());
        index_of[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, b);
      }
    for (const auto& s : all_permutations(n)) {
      std::vector<std::uint8_t> row;
      for (auto [a, b] : pairs)
        row.push_back(static_cast<std::uint8_t>(index_of[static_cast<std::size_t>(s(a))][static_cast<std::size_t>(s(b))]));
      conj.push_back(std::move(row));
      sigma_images.emplace_back(s.images().begin(), s.images().end());
    }
  }

  Permutation perm(int t) const {
    auto [a, b] = pairs[static_cast<std::size_t>(t)];
    return Permutation::transposition(n, a + 1, b + 1);
  }
};

using Tuple = std::vector<std::uint8_t>;

// True iff no simultaneous conjugate of prefix[0..len) is lexicographically
// smaller.
bool prefix_is_least(const TranspositionTable& tt, const Tuple& t, std::size_t len) {
  for (const auto& row : tt.conj) {
    for (std::size_t k = 0; k < len; ++k) {
      const auto c = row[t[k]];
      if (c < t[k]) return false;
      if (c > t[k]) break;
    }
  }
  return true;
}

Tuple canonical_tuple(const TranspositionTable& tt, const Tuple& t) {
  Tuple best = t;
  Tuple cand(t.size());
  for (const auto& row : tt.conj) {
    for (std::size_t k = 0; k < t.size(); ++k) cand[k] = row[t[k]];
    if (cand < best) best = cand;
  }
  return best;
}

int cycle_count(const std::vector<int>& p) {
  std::vector<char> seen(p.size(), 0);
  int cycles = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) seen[j] = 1;
  }
  return cycles;
}

bool tuple_transitive(const TranspositionTable& tt, const Tuple& t) {
  std::vector<int> parent(static_cast<std::size_t>(tt.n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  int comps = tt.n;
  for (auto idx : t) {
    auto [a, b] = tt.pairs[idx];
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --comps;
    }
  }
  return comps == 1;
}

// Depth-first search over canonical prefixes starting with branch `first_choice`
// at depth 1 (depth 0 is pinned to the least transposition).
void search(const TranspositionTable& tt, int b, Tuple& t, std::vector<int>& partial, std::size_t depth,
            std::vector<Tuple>& out, int worker, int workers) {
  const int remaining = b - static_cast<int>(depth);
  // Distance of the partial product from the identity in transposition count.
  const int dist = tt.n - cycle_count(partial);
  if (dist > remaining || (remaining - dist) % 2 != 0) return;
  if (remaining == 0) {
    if (tuple_transitive(tt, t)) out.push_back(t);
    return;
  }
  if (remaining == 1) {
    // The last entry is forced: partial * t_b = id with t_b a transposition.
    int a = -1;
    for (int i = 0; i < tt.n; ++i)
      if (partial[static_cast<std::size_t>(i)] != i) {
        a = i;
        break;
      }
    if (a < 0) return;
    const int idx = tt.index_of[static_cast<std::size_t>(a)][static_cast<std::size_t>(partial[static_cast<std::size_t>(a)])];
    t[depth] = static_cast<std::uint8_t>(idx);
    if (!prefix_is_least(tt, t, depth + 1)) return;
    if (tuple_transitive(tt, t)) out.push_back(t);
    return;
  }
  for (std::size_t idx = 0; idx < tt.pairs.size(); ++idx) {
    if (depth == 1 && static_cast<int>(idx % static_cast<std::size_t>(workers)) != worker) continue;
    t[depth] = static_cast<std::uint8_t>(idx);
    if (!prefix_is_least(tt, t, depth + 1)) continue;
    auto [x, y] = tt.pairs[idx];
    // partial * (x y): swap the values at positions x and y.
    std::swap(partial[static_cast<std::size_t>(x)], partial[static_cast<std::size_t>(y)]);
    search(tt, b, t, partial, depth + 1, out, worker, workers);
    std::swap(partial[static_cast<std::size_t>(x)], partial[static_cast<std::size_t>(y)]);
  }
}

MonodromyDatum datum_from_tuple(const TranspositionTable& tt, const Tuple& t) {
  MonodromyDatum d;
  d.n = tt.n;
  for (auto idx : t) d.transpositions.push_back(tt.perm(idx));
  return d;
}

Tuple tuple_from_datum(const TranspositionTable& tt, const MonodromyDatum& d) {
  Tuple t;
  for (const auto& p : d.transpositions) {
    if (!p.is_transposition() || p.degree() != tt.n) throw std::invalid_argument("entry is not a transposition");
    auto [a, b] = p.swapped_pair();
    t.push_back(static_cast<std::uint8_t>(tt.index_of[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]));
  }
  return t;
}

}  // namespace

std::vector<MonodromyDatum> enumerate_classes(int n, int b, int workers, EnumerationLimits limits) {
  if (n < 2) throw std::invalid_argument("enumerate_classes: degree must be >= 2");
  if (b < 1) throw std::invalid_argument("enumerate_classes: b must be >= 1");
  if (n > limits.max_degree || b > limits.max_branch_points)
    throw BudgetExceeded("enumerate_classes: (n=" + std::to_string(n) + ", b=" + std::to_string(b) +
                         ") exceeds budget n <= " + std::to_string(limits.max_degree) +
                         ", b <= " + std::to_string(limits.max_branch_points));
  // Parity and the transitivity bound b >= 2(n-1) rule out most types at once.
  if (b % 2 != 0 || b < 2 * (n - 1)) return {};

  const TranspositionTable tt(n);
  workers = std::max(1, workers);
  std::vector<std::vector<Tuple>> found(static_cast<std::size_t>(workers));
  auto run = [&](int w) {
    Tuple t(static_cast<std::size_t>(b), 0);
    std::vector<int> partial(static_cast<std::size_t>(n));
    std::iota(partial.begin(), partial.end(), 0);
    // Every class has a representative starting with the least transposition (1 2).
    std::swap(partial[0], partial[1]);
    search(tt, b, t, partial, 1, found[static_cast<std::size_t>(w)], w, workers);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::vector<Tuple> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  std::vector<MonodromyDatum> out;
  out.reserve(all.size());
  for (const auto& t : all) out.push_back(datum_from_tuple(tt, t));
  return out;
}

MonodromyDatum canonical_form(const MonodromyDatum& d) {
  if (d.h != 0) throw std::invalid_argument("canonical_form: only base genus 0 is supported");
  const TranspositionTable tt(d.n);
  return datum_from_tuple(tt, canonical_tuple(tt, tuple_from_datum(tt, d)));
}

MonodromyDatum braid_move(const MonodromyDatum& d, int i) {
  if (i < 1 || i > d.branch_count() - 1)
    throw IndexOutOfRange("braid_move: index " + std::to_string(i) + " outside 1.." +
                          std::to_string(d.branch_count() - 1));
  auto out = d;
  const auto& ti = d.transpositions[static_cast<std::size_t>(i - 1)];
  const auto& tj = d.transpositions[static_cast<std::size_t>(i)];
  out.transpositions[static_cast<std::size_t>(i - 1)] = tj;
  out.transpositions[static_cast<std::size_t>(i)] = tj.inverse() * ti * tj;
  return out;
}

MonodromyDatum braid_move_inverse(const MonodromyDatum& d, int i) {
  if (i < 1 || i > d.branch_count() - 1)
    throw IndexOutOfRange("braid_move_inverse: index " + std::to_string(i) + " outside 1.." +
                          std::to_string(d.branch_count() - 1));
  auto out = d;
  const auto& ti = d.transpositions[static_cast<std::size_t>(i - 1)];
  const auto& tj = d.transpositions[static_cast<std::size_t>(i)];
  out.transpositions[static_cast<std::size_t>(i - 1)] = ti * tj * ti.inverse();
  out.transpositions[static_cast<std::size_t>(i)] = ti;
  return out;
}

std::vector<std::vector<std::size_t>> braid_orbits(const std::vector<MonodromyDatum>& classes) {
  if (classes.empty()) return {};
  const int n = classes.front().n;
  const TranspositionTable tt(n);
  std::map<Tuple, std::size_t> index;
  std::vector<Tuple> tuples;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    auto t = canonical_tuple(tt, tuple_from_datum(tt, classes[k]));
    index.emplace(t, k);
    tuples.push_back(std::move(t));
  }
  std::vector<std::size_t> parent(classes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (int i = 1; i < classes[k].branch_count(); ++i) {
      const auto moved = braid_move(datum_from_tuple(tt, tuples[k]), i);
      const auto it = index.find(canonical_tuple(tt, tuple_from_datum(tt, moved)));
      if (it == index.end()) continue;  // move leaves the supplied class list
      const auto ra = find(k), rb = find(it->second);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < classes.size(); ++k) groups[find(k)].push_back(k);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t delta_degree(int n, int b) { return enumerate_classes(n, b).size(); }

int automorphism_order(const MonodromyDatum& d) {
  if (auto v = validate(d); !v) throw std::invalid_argument("automorphism_order: " + to_string(v.defect));
  std::vector<Permutation> gens = d.transpositions;
  for (const auto& [a, b] : d.handles) {
    gens.push_back(a);
    gens.push_back(b);
  }
  int order = 0;
  for (const auto& s : all_permutations(d.n)) {
    bool commutes = true;
    for (const auto& g : gens)
      if (s * g != g * s) {
        commutes = false;
        break;
      }
    if (commutes) ++order;
  }
  return order;
}

}  // namespace hurwitz
