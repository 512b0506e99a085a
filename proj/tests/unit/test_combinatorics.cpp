#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "hurwitz/combinatorics.hpp"

using namespace hurwitz;

namespace {

// Independent oracle: every tuple of transpositions, product and transitivity
// checked directly, classes keyed by the least conjugate written as pair lists.
using Key = std::vector<std::pair<int, int>>;

Key key_of(const std::vector<Permutation>& ts) {
  Key k;
  for (const auto& t : ts) k.push_back(t.swapped_pair());
  return k;
}

std::set<Key> brute_force_classes(int n, int b) {
  std::vector<Permutation> trans;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) trans.push_back(Permutation::transposition(n, i, j));
  const auto sigmas = all_permutations(n);
  std::set<Key> out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(b), 0);
  while (true) {
    std::vector<Permutation> ts;
    auto prod = Permutation::identity(n);
    for (auto i : idx) {
      ts.push_back(trans[i]);
      prod = prod * trans[i];
    }
    if (prod.is_identity() && is_transitive(ts, n)) {
      Key best;
      bool first = true;
      for (const auto& s : sigmas) {
        std::vector<Permutation> c;
        for (const auto& t : ts) c.push_back(conjugate(t, s));
        const auto k = key_of(c);
        if (first || k < best) best = k;
        first = false;
      }
      out.insert(best);
    }
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == trans.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  return out;
}

std::set<Key> as_keys(const std::vector<MonodromyDatum>& ds) {
  std::set<Key> out;
  for (const auto& d : ds) out.insert(key_of(d.transpositions));
  return out;
}

}  // namespace

TEST(Enumerate, ThreeFourMatchesBruteForce) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto classes = enumerate_classes(3, 4);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(classes.size(), 4u);
  EXPECT_EQ(as_keys(classes), brute_force_classes(3, 4));
  EXPECT_LT(sec, 1.0);
}

TEST(Enumerate, DegreeTwoParity) {
  for (int b = 1; b <= 8; ++b) EXPECT_EQ(enumerate_classes(2, b).size(), b % 2 == 0 ? 1u : 0u) << "b=" << b;
}

TEST(Enumerate, SmallCasesMatchBruteForce) {
  for (auto [n, b] : {std::pair{3, 2}, {3, 6}, {4, 4}, {4, 6}, {5, 4}})
    EXPECT_EQ(as_keys(enumerate_classes(n, b)), brute_force_classes(n, b)) << n << "," << b;
}

TEST(Enumerate, RepresentativesAreValidCanonicalAndSorted) {
  const auto classes = enumerate_classes(4, 6);
  EXPECT_TRUE(std::is_sorted(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    return key_of(a.transpositions) < key_of(b.transpositions);
  }));
  for (const auto& d : classes) {
    EXPECT_TRUE(validate(d).ok);
    EXPECT_EQ(canonical_form(d), d);
  }
}

TEST(Enumerate, WorkerCountDoesNotMatter) {
  const auto one = enumerate_classes(4, 6, 1);
  for (int w : {2, 3, 8}) EXPECT_EQ(enumerate_classes(4, 6, w), one) << "workers=" << w;
}

TEST(Enumerate, BudgetIsEnforced) {
  EXPECT_THROW(enumerate_classes(7, 4), BudgetExceeded);
  EXPECT_THROW(enumerate_classes(3, 10), BudgetExceeded);
  EXPECT_EQ(delta_degree(3, 4), 4u);
}

TEST(Validate, ReportsDefects) {
  auto good = make_datum(2, {{1, 2}, {1, 2}});
  EXPECT_TRUE(validate(good).ok);

  auto odd = make_datum(2, {{1, 2}, {1, 2}, {1, 2}});
  EXPECT_EQ(validate(odd).defect, DatumDefect::product_relation);

  auto split = make_datum(4, {{1, 2}, {1, 2}, {3, 4}, {3, 4}});
  EXPECT_EQ(validate(split).defect, DatumDefect::not_transitive);

  auto cyc = good;
  cyc.n = 3;
  cyc.transpositions = {Permutation::from_cycles(3, {{1, 2, 3}}), Permutation::from_cycles(3, {{1, 3, 2}})};
  EXPECT_EQ(validate(cyc).defect, DatumDefect::not_a_transposition);

  MonodromyDatum handles = good;
  handles.h = 1;
  EXPECT_EQ(validate(handles).defect, DatumDefect::handle_count);
}

TEST(Validate, HandlesEnterTheProductRelation) {
  // [a, b] t1 t2 = id with a, b commuting
  MonodromyDatum d = make_datum(2, {{1, 2}, {1, 2}});
  d.h = 1;
  d.handles.emplace_back(Permutation::transposition(2, 1, 2), Permutation::identity(2));
  EXPECT_TRUE(validate(d).ok);
  EXPECT_TRUE(monodromy_product(d).is_identity());
}

TEST(GenusRelation, RiemannHurwitz) {
  EXPECT_EQ(genus_from_relation(2, 0, 6), 2);
  EXPECT_EQ(genus_from_relation(3, 0, 4), 0);
  EXPECT_EQ(genus_from_relation(2, 1, 2), 2);
  EXPECT_THROW(genus_from_relation(2, 0, 3), ImpossibleType);
  EXPECT_THROW(genus_from_relation(3, 0, 2), ImpossibleType);
  for (int n = 1; n <= 6; ++n)
    for (int h = 0; h <= 3; ++h)
      for (int b = 0; b <= 20; ++b) {
        try {
          const auto c = cover_numerics(n, h, b);
          EXPECT_EQ(b, n * (2 - 2 * h) + 2 * c.p - 2);
          EXPECT_GE(c.p, 0);
        } catch (const ImpossibleType&) {
        }
      }
}

TEST(Braid, MoveAndInverse) {
  for (const auto& d : enumerate_classes(4, 6)) {
    for (int i = 1; i < d.branch_count(); ++i) {
      const auto m = braid_move(d, i);
      EXPECT_TRUE(validate(m).ok);
      EXPECT_EQ(monodromy_product(m), monodromy_product(d));
      EXPECT_EQ(braid_move_inverse(m, i), d);
      EXPECT_EQ(braid_move(braid_move_inverse(d, i), i), d);
    }
  }
  const auto d = make_datum(2, {{1, 2}, {1, 2}});
  EXPECT_THROW(braid_move(d, 0), IndexOutOfRange);
  EXPECT_THROW(braid_move(d, 2), IndexOutOfRange);
}

TEST(Braid, ConnectedCases) {
  const auto t0 = std::chrono::steady_clock::now();
  for (auto [n, b] : {std::pair{2, 6}, {3, 4}, {4, 6}}) {
    const auto orbits = braid_orbits(enumerate_classes(n, b));
    EXPECT_EQ(orbits.size(), 1u) << n << "," << b;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
}

TEST(Braid, OrbitsPartitionTheClasses) {
  const auto classes = enumerate_classes(3, 6);
  const auto orbits = braid_orbits(classes);
  std::vector<std::size_t> all;
  for (const auto& o : orbits) {
    EXPECT_TRUE(std::is_sorted(o.begin(), o.end()));
    all.insert(all.end(), o.begin(), o.end());
  }
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), classes.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
}

TEST(Automorphisms, CentralizerOrder) {
  EXPECT_EQ(automorphism_order(make_datum(2, {{1, 2}, {1, 2}})), 2);
  for (const auto& d : enumerate_classes(3, 4)) EXPECT_EQ(automorphism_order(d), 1);
  EXPECT_THROW(automorphism_order(make_datum(2, {{1, 2}})), std::invalid_argument);
}
