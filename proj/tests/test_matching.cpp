#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "amatch/matching.hpp"

using namespace amatch;

namespace {

using Z = FiniteElement;
using ZMap = std::vector<std::pair<Z, Z>>;

std::vector<Z> zs(std::initializer_list<std::uint64_t> v) {
  std::vector<Z> out;
  for (auto x : v) out.push_back({x});
  return out;
}

ZMap zmap(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> v) {
  ZMap out;
  for (auto [a, b] : v) out.emplace_back(Z{a}, Z{b});
  return out;
}

// Oracle: every bijection A -> B by std::next_permutation, filtered by the
// matching condition. Independent of PairGraph and the backtracker.
std::vector<ZMap> brute_force_matchings(const FiniteGroup& g, std::vector<Z> A, std::vector<Z> B) {
  std::sort(A.begin(), A.end());
  std::sort(B.begin(), B.end());
  std::vector<ZMap> out;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < A.size() && ok; ++i)
      ok = std::find(A.begin(), A.end(), g.add(A[i], B[i])) == A.end();
    if (ok) {
      ZMap m;
      for (std::size_t i = 0; i < A.size(); ++i) m.emplace_back(A[i], B[i]);
      out.push_back(m);
    }
  } while (std::next_permutation(B.begin(), B.end()));
  return out;
}

std::map<Z, int> brute_counts(const FiniteGroup& g, const ZMap& m) {
  std::map<Z, int> c;
  for (auto [a, b] : m) ++c[g.add(a, b)];
  return c;
}

std::vector<Z> random_subset(std::mt19937_64& rng, const std::vector<Z>& pool, std::size_t k) {
  auto copy = pool;
  std::shuffle(copy.begin(), copy.end(), rng);
  copy.resize(k);
  std::sort(copy.begin(), copy.end());
  return copy;
}

}  // namespace

TEST(IsMatching, Examples) {
  FiniteGroup z7({7}), z5({5}), z9({9});
  EXPECT_TRUE(is_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}), zmap({{1, 2}, {2, 4}, {4, 1}})));

  auto bad = check_matching(z5, zs({1, 2}), zs({1, 2}), zmap({{1, 1}, {2, 2}}));
  EXPECT_FALSE(bad.ok);
  ASSERT_TRUE(bad.violation.has_value());
  EXPECT_EQ(*bad.violation, Z{1});

  for (std::uint64_t b = 1; b < 9; ++b) EXPECT_TRUE(is_matching(z9, zs({0}), zs({b}), zmap({{0, b}})));
  EXPECT_TRUE(is_matching(IntegerGroup{}, {Integer(0)}, {Integer(-5)}, {{Integer(0), Integer(-5)}}));
}

TEST(IsMatching, MalformedMapsAndNonBijections) {
  FiniteGroup z7({7});
  try {
    check_matching(z7, zs({1, 2}), zs({3, 4}), zmap({{1, 3}}));
    FAIL() << "expected malformed-map";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::malformed_map);
  }
  EXPECT_THROW(check_matching(z7, zs({1, 2}), zs({3, 4}), zmap({{1, 3}, {5, 4}})), Error);
  EXPECT_THROW(check_matching(z7, zs({1, 2}), zs({3, 4}), zmap({{1, 3}, {1, 4}})), Error);

  auto twice = check_matching(z7, zs({1, 2}), zs({3, 4}), zmap({{1, 4}, {2, 4}}));
  EXPECT_FALSE(twice.ok);
  auto outside = check_matching(z7, zs({1, 2}), zs({3, 4}), zmap({{1, 5}, {2, 4}}));
  EXPECT_FALSE(outside.ok);
  EXPECT_FALSE(check_matching(z7, zs({1, 2}), zs({3, 4, 5}), zmap({{1, 3}, {2, 4}})).ok);
  EXPECT_THROW(make_matching(z7, zs({1, 2}), zs({1, 2}), zmap({{1, 1}, {2, 2}})), Error);
}

TEST(Profile, Examples) {
  FiniteGroup z7({7}), z5({5});
  auto f = make_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}), zmap({{1, 2}, {2, 4}, {4, 1}}));
  auto p = profile(f);
  EXPECT_EQ(p.fibers.size(), 3u);
  EXPECT_EQ(p.fibers.at(Z{3}), zs({1}));
  EXPECT_EQ(p.fibers.at(Z{6}), zs({2}));
  EXPECT_EQ(p.fibers.at(Z{5}), zs({4}));
  EXPECT_EQ(p.count(Z{0}), 0u);

  auto neg = make_matching(z5, zs({1, 2, 3, 4}), zs({1, 2, 3, 4}), zmap({{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  auto q = profile(neg);
  ASSERT_EQ(q.fibers.size(), 1u);
  EXPECT_EQ(q.fibers.at(Z{0}), zs({1, 2, 3, 4}));

  auto single = make_matching(z7, zs({0}), zs({3}), zmap({{0, 3}}));
  EXPECT_EQ(profile(single).fibers.at(Z{3}), zs({0}));
}

TEST(Invert, Examples) {
  FiniteGroup z7({7}), z5({5});
  auto f = make_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}), zmap({{1, 2}, {2, 4}, {4, 1}}));
  auto inv = invert(f);
  EXPECT_EQ(inv.pairs, zmap({{1, 4}, {2, 1}, {4, 2}}));
  EXPECT_TRUE(profiles_equal(profile(inv), profile(f)));

  auto neg = make_matching(z5, zs({1, 2, 3, 4}), zs({1, 2, 3, 4}), zmap({{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  EXPECT_EQ(invert(neg), neg);

  auto across = make_matching(z7, zs({0}), zs({3}), zmap({{0, 3}}));
  try {
    invert(across);
    FAIL() << "expected not-invertible-in-place";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_invertible_in_place);
  }
}

TEST(FindMatching, Examples) {
  FiniteGroup z4({4}), z5({5}), z7({7});
  EXPECT_FALSE(find_matching(z4, zs({0, 2}), zs({1, 2})).has_value());

  auto swap = find_matching(z5, zs({1, 2}), zs({1, 2}));
  ASSERT_TRUE(swap.has_value());
  EXPECT_EQ(swap->pairs, zmap({{1, 2}, {2, 1}}));

  auto single = find_matching(z7, zs({0}), zs({6}));
  ASSERT_TRUE(single.has_value());
  EXPECT_EQ(single->pairs, zmap({{0, 6}}));

  try {
    find_matching(z7, zs({0, 1}), zs({6}));
    FAIL() << "expected invalid-pair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_pair);
  }
}

TEST(EnumerateMatchings, Examples) {
  FiniteGroup z5({5}), z4({4}), z11({11});
  auto ms = enumerate_matchings(z5, zs({1, 2, 3}), zs({1, 2, 3}));
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].pairs, zmap({{1, 3}, {2, 2}, {3, 1}}));

  EXPECT_TRUE(enumerate_matchings(z4, zs({0, 2}), zs({1, 2})).empty());
  EXPECT_EQ(enumerate_matchings(z11, zs({0}), zs({7})).size(), 1u);

  try {
    enumerate_matchings(z11, zs({1, 2, 3, 4, 5, 6}), zs({1, 2, 3, 4, 5, 6}), Budget(3));
    FAIL() << "expected budget-exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}

TEST(EnumerateMatchings, AgreesWithPermutationOracleInLexOrder) {
  std::mt19937_64 rng(2024);
  for (std::uint64_t n = 2; n <= 12; ++n) {
    FiniteGroup g({n});
    auto all = g.elements();
    for (int trial = 0; trial < 25; ++trial) {
      std::size_t k = 1 + rng() % std::min<std::uint64_t>(6, n);
      auto A = random_subset(rng, all, k);
      auto B = random_subset(rng, all, k);
      auto expected = brute_force_matchings(g, A, B);
      auto got = enumerate_matchings(g, A, B);
      ASSERT_EQ(got.size(), expected.size()) << g.descriptor();
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].pairs, expected[i]);
      // Existence search agrees with the oracle.
      EXPECT_EQ(find_matching(g, A, B).has_value(), !expected.empty());
    }
  }
}

TEST(FindMatching, ExhaustiveAgreementSmallCyclic) {
  // find_matching is none iff the enumeration is empty, |A| = |B| <= 3, n <= 8.
  for (std::uint64_t n = 2; n <= 8; ++n) {
    FiniteGroup g({n});
    auto all = g.elements();
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, n); ++k)
      for_each_combination(n, k, [&](std::span<const std::size_t> ia) {
        std::vector<Z> A;
        for (auto i : ia) A.push_back(all[i]);
        return for_each_combination(n, k, [&](std::span<const std::size_t> ib) {
          std::vector<Z> B;
          for (auto i : ib) B.push_back(all[i]);
          auto found = find_matching(g, A, B);
          EXPECT_EQ(found.has_value(), !brute_force_matchings(g, A, B).empty());
          if (found) {
            EXPECT_TRUE(is_matching(g, A, B, found->pairs));
          }
          return true;
        });
      });
  }
}

TEST(IsAcyclic, Examples) {
  FiniteGroup z5({5}), z7({7});
  auto neg = make_matching(z5, zs({1, 2, 3, 4}), zs({1, 2, 3, 4}), zmap({{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  EXPECT_EQ(is_acyclic(neg), Decision::yes);

  auto cyc = make_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}), zmap({{1, 2}, {2, 4}, {4, 1}}));
  EXPECT_EQ(is_acyclic(cyc), Decision::no);

  auto single = make_matching(z7, zs({0}), zs({1}), zmap({{0, 1}}));
  EXPECT_EQ(is_acyclic(single), Decision::yes);
  EXPECT_EQ(is_acyclic(cyc, Budget(0)), Decision::unknown);
}

TEST(IsAcyclic, MatchesProfileClassSizes) {
  std::mt19937_64 rng(99);
  for (std::uint64_t n : {7, 9, 10, 11}) {
    FiniteGroup g({n});
    auto all = g.elements();
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t k = 2 + rng() % 4;
      auto A = random_subset(rng, all, k);
      auto B = random_subset(rng, all, k);
      auto oracle = brute_force_matchings(g, A, B);
      std::map<std::map<Z, int>, int> classes;
      for (const auto& m : oracle) ++classes[brute_counts(g, m)];
      for (const auto& m : oracle) {
        auto f = make_matching(g, A, B, m);
        EXPECT_EQ(is_acyclic(f) == Decision::yes, classes[brute_counts(g, m)] == 1);
      }
    }
  }
}

TEST(Orbits, Examples) {
  FiniteGroup z7({7}), z5({5}), z4({4});
  auto cyc = make_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}), zmap({{1, 2}, {2, 4}, {4, 1}}));
  auto d = orbits(cyc);
  ASSERT_EQ(d.cycles.size(), 1u);
  EXPECT_EQ(d.cycles[0], zs({1, 2, 4}));
  EXPECT_EQ(d.order_of(Z{1}), 3u);
  EXPECT_FALSE(d.involutive());

  auto neg = make_matching(z5, zs({1, 2, 3, 4}), zs({1, 2, 3, 4}), zmap({{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  auto dn = orbits(neg);
  EXPECT_EQ(dn.cycles.size(), 2u);
  for (std::uint64_t a = 1; a <= 4; ++a) EXPECT_EQ(dn.order_of(Z{a}), 2u);
  EXPECT_TRUE(dn.involutive());

  // {0} -> {0} is not a matching (0 + 0 lies in A); a fixed point at 2 in Z_4 is.
  EXPECT_FALSE(is_matching(z4, zs({0}), zs({0}), zmap({{0, 0}})));
  auto fixed = make_matching(z4, zs({2}), zs({2}), zmap({{2, 2}}));
  auto df = orbits(fixed);
  ASSERT_EQ(df.cycles.size(), 1u);
  EXPECT_EQ(df.order_of(Z{2}), 1u);
}

TEST(Restrict, Examples) {
  FiniteGroup z11({11});
  // (4 7)(5 6)(3 8 2 9) on {2..9}
  auto f = make_matching(z11, zs({2, 3, 4, 5, 6, 7, 8, 9}), zs({2, 3, 4, 5, 6, 7, 8, 9}),
                         zmap({{4, 7}, {7, 4}, {5, 6}, {6, 5}, {3, 8}, {8, 2}, {2, 9}, {9, 3}}));
  auto r = restrict_matching(f, zs({4, 7}));
  EXPECT_EQ(r.domain, zs({2, 3, 5, 6, 8, 9}));
  EXPECT_TRUE(is_matching(z11, r.domain, r.codomain, r.pairs));
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto s = r.sum_at(i);
    EXPECT_TRUE(s == Z{0} || s == Z{1} || s == Z{10});
  }
  EXPECT_EQ(restrict_matching(f, {}), f);
  try {
    restrict_matching(f, zs({3}));
    FAIL() << "expected invalid-restriction";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_restriction);
  }
}

TEST(FailsAtOrder, SmallCyclicGroups) {
  FiniteGroup z7({7}), z5({5});
  auto s3 = fails_at_order(z7, 3);
  ASSERT_EQ(s3.status, SearchStatus::found);
  const auto& w = *s3.witness;
  EXPECT_EQ(w.order(), 3u);
  EXPECT_NE(w.f, w.g);
  EXPECT_TRUE(profiles_equal(profile(w.f), profile(w.g)));
  // First witness in canonical order, cross-checked against the permutation oracle.
  EXPECT_EQ(w.f.domain, zs({0, 1, 2}));
  EXPECT_EQ(w.f.codomain, zs({2, 3, 4}));
  EXPECT_EQ(w.f.pairs, zmap({{0, 3}, {1, 4}, {2, 2}}));
  EXPECT_EQ(w.g.pairs, zmap({{0, 4}, {1, 2}, {2, 3}}));

  for (std::size_t m = 1; m <= 5; ++m) EXPECT_EQ(fails_at_order(z5, m).status, SearchStatus::absent) << m;
  EXPECT_EQ(fails_at_order(z7, 1).status, SearchStatus::absent);
  EXPECT_EQ(fails_at_order(z7, 4, Budget(5)).status, SearchStatus::unknown);
}

TEST(FailsAtOrder, IntegerWindow) {
  std::vector<Integer> window;
  for (int v = -3; v <= 3; ++v) window.emplace_back(v);
  auto s = fails_at_order(IntegerGroup{}, window, 3);
  ASSERT_EQ(s.status, SearchStatus::found);
  EXPECT_NE(s.witness->f, s.witness->g);
  EXPECT_TRUE(profiles_equal(profile(s.witness->f), profile(s.witness->g)));
}

TEST(MatchingProperty, Examples) {
  auto z4 = matching_property_upto(FiniteGroup({4}), 2);
  ASSERT_FALSE(z4.pass);
  EXPECT_EQ(z4.counterexample->first, zs({0, 2}));
  EXPECT_EQ(z4.counterexample->second, zs({1, 2}));

  FiniteGroup klein({2, 2});
  auto k = matching_property_upto(klein, 2);
  ASSERT_FALSE(k.pass);
  EXPECT_FALSE(find_matching(klein, k.counterexample->first, k.counterexample->second).has_value());
  // The pair {(0,0),(1,0)} -> {(1,0),(0,1)} is also blocked.
  EXPECT_FALSE(find_matching(klein, {klein.parse("(0,0)"), klein.parse("(1,0)")},
                             {klein.parse("(1,0)"), klein.parse("(0,1)")})
                   .has_value());

  EXPECT_TRUE(matching_property_upto(FiniteGroup({5}), 4).pass);
}

TEST(FindAcyclic, Examples) {
  IntegerGroup zz;
  auto r = find_acyclic_matching(zz, {Integer(1), Integer(3)}, {Integer(2), Integer(5)});
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_EQ(is_acyclic(*r.matching), Decision::yes);

  auto one = find_acyclic_matching(zz, {Integer(0)}, {Integer(1)});
  ASSERT_EQ(one.status, SearchStatus::found);
  EXPECT_EQ(one.matching->pairs.front().second, Integer(1));

  // Z_7, {1,2,4}: classify every matching by profile with the oracle.
  FiniteGroup z7({7});
  auto oracle = brute_force_matchings(z7, zs({1, 2, 4}), zs({1, 2, 4}));
  std::map<std::map<Z, int>, int> classes;
  for (const auto& m : oracle) ++classes[brute_counts(z7, m)];
  bool any_singleton = false;
  for (const auto& kv : classes) any_singleton = any_singleton || kv.second == 1;
  auto z = find_acyclic_matching(z7, zs({1, 2, 4}), zs({1, 2, 4}));
  EXPECT_EQ(z.status == SearchStatus::found, any_singleton);

  EXPECT_THROW(find_acyclic_matching(zz, {Integer(1)}, {Integer(0)}), Error);
}

TEST(Invariants, RandomMatchingsKeepProfileConservation) {
  std::mt19937_64 rng(5);
  for (std::uint64_t n : {6, 8, 12, 13}) {
    FiniteGroup g({n});
    auto all = g.elements();
    for (int trial = 0; trial < 30; ++trial) {
      std::size_t k = 1 + rng() % 5;
      auto A = random_subset(rng, all, k);
      for (const auto& f : enumerate_matchings(g, A, A)) {
        auto p = profile(f);
        EXPECT_EQ(p.total(), A.size());
        for (const auto& [x, fiber] : p.fibers) EXPECT_FALSE(set_contains<Z>(A, x));
        auto inv = invert(f);
        EXPECT_TRUE(is_matching(g, inv.domain, inv.codomain, inv.pairs));
        EXPECT_TRUE(profiles_equal(profile(inv), p));
      }
    }
  }
}
