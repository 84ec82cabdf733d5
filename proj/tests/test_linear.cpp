#include <gtest/gtest.h>

#include <random>
#include <set>

#include "amatch/linear.hpp"

using namespace amatch;

namespace {

using V = Vec<PrimeField>;
using S = Subspace<PrimeField>;
using Map = LinearMap<PrimeField>;

// All q^dim elements of A, by running through every coefficient vector.
std::set<V> elements_of(const FiniteTower& t, const S& A) {
  const auto q = t.p();
  std::set<V> out;
  std::vector<std::uint64_t> x(A.dim(), 0);
  while (true) {
    V v(t.n(), 0);
    for (std::size_t i = 0; i < A.dim(); ++i)
      for (unsigned j = 0; j < t.n(); ++j) v[j] = (v[j] + x[i] * A.rows()[i][j]) % q;
    out.insert(v);
    std::size_t i = 0;
    while (i < x.size() && ++x[i] == q) x[i++] = 0;
    if (i == x.size()) break;
  }
  return out;
}

// Every ordered basis of A, as lists of nonzero vectors.
std::vector<std::vector<V>> ordered_bases(const FiniteTower& t, const S& A) {
  const auto elems = elements_of(t, A);
  std::vector<V> nonzero;
  for (const auto& e : elems)
    if (!t.is_zero(e)) nonzero.push_back(e);
  std::vector<std::vector<V>> out;
  std::vector<V> cur;
  std::function<void()> rec = [&] {
    if (cur.size() == A.dim()) {
      out.push_back(cur);
      return;
    }
    for (const auto& v : nonzero) {
      cur.push_back(v);
      if (linalg::rank(t.scalars(), cur) == cur.size()) rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

// The matched condition straight from its definition: for each i and each
// b = Σ λ_j b_j with a_i·b ∈ A, the coefficient λ_i vanishes.
bool matched_by_definition(const FiniteTower& t, const std::vector<V>& basisA, const std::vector<V>& basisB) {
  const auto A = elements_of(t, S::span(t.scalars(), t.n(), basisA));
  const auto q = t.p();
  const std::size_t m = basisB.size();
  std::vector<std::uint64_t> lambda(m, 0);
  while (true) {
    V b(t.n(), 0);
    for (std::size_t j = 0; j < m; ++j)
      for (unsigned c = 0; c < t.n(); ++c) b[c] = (b[c] + lambda[j] * basisB[j][c]) % q;
    for (std::size_t i = 0; i < m; ++i)
      if (A.count(t.mul(basisA[i], b)) && lambda[i] != 0) return false;
    std::size_t i = 0;
    while (i < m && ++lambda[i] == q) lambda[i++] = 0;
    if (i == m) return true;
  }
}

// Some isomorphism A → B matches every ordered basis to its image.
bool strong_matching_by_definition(const FiniteTower& t, const S& A, const S& B) {
  const auto& k = t.scalars();
  const auto bases = ordered_bases(t, A);
  bool any = false;
  for_each_invertible_matrix(k, A.dim(), [&](const std::vector<V>& M) {
    const auto phi = map_from_matrix(k, A, B, M);
    for (const auto& basis : bases) {
      std::vector<V> image;
      for (const auto& a : basis) image.push_back(apply(k, phi, a));
      if (!matched_by_definition(t, basis, image)) return true;
    }
    any = true;
    return false;
  });
  return any;
}

// a·f(a) = φ(a)·h(φ(a)) at every point of A.
bool quad_equal_by_points(const FiniteTower& t, const Map& f, const Map& phi, const Map& h) {
  const auto& k = t.scalars();
  for (const auto& a : elements_of(t, f.domain)) {
    const auto pa = apply(k, phi, a);
    if (t.mul(a, apply(k, f, a)) != t.mul(pa, apply(k, h, pa))) return false;
  }
  return true;
}

S random_subspace(const FiniteTower& t, std::size_t d, std::mt19937_64& rng) {
  while (true) {
    std::vector<V> rows;
    for (std::size_t i = 0; i < d; ++i) rows.push_back(t.element_at(rng() % t.order()));
    auto s = S::span(t.scalars(), t.n(), rows);
    if (s.dim() == d) return s;
  }
}

Map random_iso(const FiniteTower& t, const S& A, const S& B, std::mt19937_64& rng) {
  const auto& k = t.scalars();
  while (true) {
    std::vector<V> M(A.dim(), V(B.dim()));
    for (auto& row : M)
      for (auto& x : row) x = rng() % t.p();
    if (linalg::rank(k, M) == A.dim()) return map_from_matrix(k, A, B, M);
  }
}

template <class Fn>
void expect_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

FiniteTower gf9() { return FiniteTower(3, 2, std::vector<std::uint64_t>{1, 0, 1}); }

}  // namespace

TEST(Subspace, RrefIsCanonical) {
  std::mt19937_64 rng(17);
  FiniteTower t(3, 4);
  const auto& k = t.scalars();
  for (int r = 0; r < 100; ++r) {
    const auto A = random_subspace(t, 1 + rng() % 3, rng);
    // a random invertible recombination of the basis spans the same subspace
    std::vector<V> mixed;
    for (std::size_t i = 0; i < A.dim(); ++i) {
      V coeff(A.dim());
      for (auto& x : coeff) x = rng() % 3;
      mixed.push_back(combine(k, A.rows(), coeff, t.n()));
    }
    auto B = S::span(k, t.n(), mixed);
    if (B.dim() == A.dim()) {
      EXPECT_EQ(B, A);
    }
    auto shuffled = A.rows();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(S::span(k, t.n(), shuffled), A);
  }
}

TEST(Subspace, IntersectionAndSumMatchElementSets) {
  std::mt19937_64 rng(23);
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 3}, {5, 3}}) {
    FiniteTower t(p, n);
    const auto& k = t.scalars();
    for (int r = 0; r < 40; ++r) {
      const auto A = random_subspace(t, 1 + rng() % (n - 1), rng);
      const auto B = random_subspace(t, 1 + rng() % (n - 1), rng);
      const auto ea = elements_of(t, A);
      const auto eb = elements_of(t, B);
      std::set<V> common;
      for (const auto& x : ea)
        if (eb.count(x)) common.insert(x);
      EXPECT_EQ(elements_of(t, intersect(k, A, B)), common);
      EXPECT_EQ(intersect(k, A, A), A);
      const auto s = sum(k, A, B);
      EXPECT_EQ(s.dim() + intersect(k, A, B).dim(), A.dim() + B.dim());
      for (const auto& x : ea) EXPECT_TRUE(contains(k, s, x));
    }
  }
}

TEST(Subspace, ProductMatchesAllPairwiseProducts) {
  std::mt19937_64 rng(29);
  FiniteTower t(3, 4);
  const auto& k = t.scalars();
  for (int r = 0; r < 30; ++r) {
    const auto A = random_subspace(t, 1 + rng() % 2, rng);
    const auto B = random_subspace(t, 1 + rng() % 2, rng);
    std::vector<V> all;
    for (const auto& a : elements_of(t, A))
      for (const auto& b : elements_of(t, B)) all.push_back(t.mul(a, b));
    const auto P = product(t, A, B);
    EXPECT_EQ(P, S::span(k, t.n(), all));
    EXPECT_LE(P.dim(), A.dim() * B.dim());
  }
}

TEST(Subspace, Examples) {
  auto t = gf9();
  const auto& k = t.scalars();
  const auto A = span_elements(t, {t.generator()});
  const auto one = span_elements(t, {t.one()});
  EXPECT_EQ(product(t, A, A), one);
  EXPECT_EQ(intersect(k, A, one).dim(), 0u);

  RationalFunctionTower q;
  const auto T = q.indeterminate();
  const auto A2 = span_elements(q, {T, q.pow(T, 3)});
  EXPECT_EQ(product(q, A2, A2), span_elements(q, {q.monomial(2), q.monomial(4), q.monomial(6)}));
  EXPECT_EQ(intersect(q.scalars(), A2, product(q, A2, A2)).dim(), 0u);
}

TEST(LinearMaps, InverseAndCompose) {
  std::mt19937_64 rng(31);
  FiniteTower t(5, 3);
  const auto& k = t.scalars();
  for (int r = 0; r < 30; ++r) {
    const auto A = random_subspace(t, 2, rng);
    const auto B = random_subspace(t, 2, rng);
    const auto f = random_iso(t, A, B, rng);
    const auto g = inverse(k, f);
    EXPECT_EQ(compose(k, g, f), identity_map(A));
    EXPECT_EQ(compose(k, f, g), identity_map(B));
    for (const auto& a : elements_of(t, A)) EXPECT_EQ(apply(k, g, apply(k, f, a)), a);
  }
}

TEST(StrongMatching, Examples) {
  auto t = gf9();
  const auto A = span_elements(t, {t.generator()});
  const auto one = span_elements(t, {t.one()});
  EXPECT_TRUE(strong_matching_exists(t, A, A));
  EXPECT_FALSE(strong_matching_exists(t, one, one));

  FiniteTower t5(5, 3);
  EXPECT_TRUE(strong_matching_exists(t5, span_elements(t5, {t5.generator()}), span_elements(t5, {t5.generator()})));
  expect_code(ErrorCode::invalid_pair, [&] {
    strong_matching_exists(t5, span_elements(t5, {t5.generator()}), span_elements(t5, {t5.one(), t5.generator()}));
  });
}

TEST(MatchedBasis, Examples) {
  auto t = gf9();
  const auto a = t.generator();
  EXPECT_TRUE(is_matched_basis(t, {a}, {a}));
  EXPECT_FALSE(is_matched_basis(t, {t.one()}, {t.one()}));
  expect_code(ErrorCode::invalid_basis, [&] { is_matched_basis(t, {a, t.scale(2, a)}, {a, t.one()}); });
  expect_code(ErrorCode::invalid_basis, [&] { is_matched_basis(t, {a}, {a, t.one()}); });

  // an intermediate field is closed under products, so it is matched to no
  // basis of a subspace it meets
  FiniteTower t81(3, 4);
  const auto F = subfield_subspace(t81, 2);
  EXPECT_FALSE(is_matched_basis(t81, F.rows(), F.rows()));
}

TEST(MatchedBasis, AgreesWithDefinition) {
  std::mt19937_64 rng(37);
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 3}, {3, 4}, {5, 3}}) {
    FiniteTower t(p, n);
    for (int r = 0; r < 60; ++r) {
      const std::size_t d = 1 + rng() % 2;
      const auto A = random_subspace(t, d, rng);
      const auto B = random_subspace(t, d, rng);
      const auto ba = ordered_bases(t, A);
      const auto bb = ordered_bases(t, B);
      const auto& x = ba[rng() % ba.size()];
      const auto& y = bb[rng() % bb.size()];
      EXPECT_EQ(is_matched_basis(t, x, y), matched_by_definition(t, x, y));
    }
  }
}

TEST(MatchedSubspace, Examples) {
  auto t = gf9();
  const auto A = span_elements(t, {t.generator()});
  EXPECT_EQ(is_matched_subspace(t, A, A, MatchMode::exhaustive(), Budget()).matched, Decision::yes);
  const auto one = span_elements(t, {t.one()});
  auto r = is_matched_subspace(t, one, one, MatchMode::exhaustive(), Budget());
  EXPECT_EQ(r.matched, Decision::no);
  EXPECT_EQ(r.failing_basis.size(), 1u);
  EXPECT_EQ(is_matched_subspace(t, A, A, MatchMode::exhaustive(), Budget(0)).matched, Decision::unknown);

  // dimension one with AB ∩ A = {0}: every isomorphism is strong, so A is matched
  FiniteTower t5(5, 3);
  const auto A1 = span_elements(t5, {t5.generator()});
  const auto B1 = span_elements(t5, {t5.add(t5.generator(), t5.one())});
  ASSERT_TRUE(strong_matching_exists(t5, A1, B1));
  EXPECT_EQ(is_matched_subspace(t5, A1, B1, MatchMode::exhaustive(), Budget()).matched, Decision::yes);
}

TEST(StrongMatching, IsStrongMatchingExamples) {
  auto t = gf9();
  const auto A = span_elements(t, {t.generator()});
  EXPECT_EQ(is_strong_matching(t, identity_map(A), MatchMode::exhaustive(), Budget()).strong, Decision::yes);
  const auto one = span_elements(t, {t.one()});
  EXPECT_EQ(is_strong_matching(t, identity_map(one), MatchMode::exhaustive(), Budget()).strong, Decision::no);

  FiniteTower t5(5, 3);
  const auto A1 = span_elements(t5, {t5.generator()});
  EXPECT_EQ(is_strong_matching(t5, scale(t5.scalars(), 2, identity_map(A1)), MatchMode::exhaustive(), Budget()).strong,
            Decision::yes);
}

// For every pair of subspaces of dimension ≤ 2, AB ∩ A = {0} holds exactly
// when some isomorphism matches every basis to its image.
TEST(StrongMatching, CriterionAgreesWithDefinitionOnSmallFields) {
  for (auto t : {FiniteTower(2, 3), gf9()}) {
    const auto& k = t.scalars();
    for (std::size_t d = 1; d <= 2; ++d) {
      std::vector<S> subs;
      for_each_subspace(k, t.n(), d, [&](const S& s) {
        subs.push_back(s);
        return true;
      });
      for (const auto& A : subs)
        for (const auto& B : subs)
          EXPECT_EQ(strong_matching_exists(t, A, B), strong_matching_by_definition(t, A, B))
              << t.descriptor() << " d=" << d;
    }
  }
}

TEST(StrongMatching, EveryIsomorphismIsStrongWhenCriterionHolds) {
  std::mt19937_64 rng(41);
  FiniteTower t(3, 4);
  int checked = 0;
  for (int r = 0; r < 200 && checked < 20; ++r) {
    const auto A = random_subspace(t, 2, rng);
    const auto B = random_subspace(t, 2, rng);
    if (!strong_matching_exists(t, A, B)) continue;
    ++checked;
    const auto phi = random_iso(t, A, B, rng);
    EXPECT_EQ(is_strong_matching(t, phi, MatchMode::exhaustive(), Budget()).strong, Decision::yes);
    EXPECT_EQ(is_strong_matching(t, phi, MatchMode::sampled(5, 9), Budget()).strong, Decision::yes);
  }
  EXPECT_GT(checked, 0);
}

TEST(Subfield, KernelOfFrobeniusIsTheSubfield) {
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {2, 6}, {3, 4}}) {
    FiniteTower t(p, n);
    for (unsigned d : intermediate_fields(t)) {
      const auto F = subfield_subspace(t, d);
      EXPECT_EQ(F.dim(), d);
      std::set<V> fixed;
      for (std::uint64_t i = 0; i < t.order(); ++i) {
        auto x = t.element_at(i);
        if (t.frobenius(x, d) == x) fixed.insert(x);
      }
      EXPECT_EQ(elements_of(t, F), fixed);
    }
  }
  EXPECT_TRUE(intermediate_fields(FiniteTower(2, 3)).empty());
}

TEST(SubspaceEnumeration, CountsAreGaussianBinomials) {
  auto count = [](std::uint64_t p, std::size_t n, std::size_t d) {
    std::size_t c = 0;
    for_each_subspace(PrimeField(p), n, d, [&](const S&) {
      ++c;
      return true;
    });
    return c;
  };
  EXPECT_EQ(count(2, 3, 1), 7u);
  EXPECT_EQ(count(2, 3, 2), 7u);
  EXPECT_EQ(count(3, 4, 2), 130u);
  EXPECT_EQ(count(2, 4, 2), 35u);
  EXPECT_EQ(projective_points(PrimeField(3), S::span(PrimeField(3), 2, {{1, 0}, {0, 1}})).size(), 4u);
}

TEST(QuadMap, Examples) {
  FiniteTower t(5, 3);
  const auto& k = t.scalars();
  const auto A = span_elements(t, {t.generator()});
  const auto id = identity_map(A);
  EXPECT_TRUE(quad_map_equal(t, id, scale(k, 2, id), scale(k, 4, id)));
  EXPECT_TRUE(quad_map_equal(t, scale(k, 3, id), id, scale(k, 3, id)));
  EXPECT_FALSE(quad_map_equal(t, id, scale(k, 2, id), id));

  FiniteTower t2(2, 11);
  std::vector<FiniteTower::element> gens;
  for (unsigned i = 0; i < 10; ++i) gens.push_back(t2.pow(t2.generator(), i + 1));
  const auto big = span_elements(t2, gens);
  expect_code(ErrorCode::unsupported_field, [&] {
    const auto m = identity_map(big);
    quad_map_equal(t2, m, m, m);
  });
  const auto small = span_elements(t2, {t2.generator(), t2.pow(t2.generator(), 3)});
  EXPECT_TRUE(quad_map_equal(t2, identity_map(small), identity_map(small), identity_map(small)));
}

TEST(QuadMap, CoefficientsAgreeWithPointwise) {
  std::mt19937_64 rng(43);
  for (auto [p, n, dmax] : std::vector<std::tuple<std::uint64_t, unsigned, std::size_t>>{{5, 3, 3}, {7, 3, 2}, {5, 4, 4}, {5, 7, 2}}) {
    FiniteTower t(p, n);
    const auto& k = t.scalars();
    int equal = 0;
    for (int r = 0; r < 40; ++r) {
      const std::size_t d = 1 + rng() % dmax;
      const auto A = random_subspace(t, d, rng);
      const auto B = random_subspace(t, d, rng);
      const auto f = random_iso(t, A, B, rng);
      Map phi = random_iso(t, A, A, rng);
      Map h = random_iso(t, A, B, rng);
      if (r % 2 == 0) {
        // h = c⁻²·f with φ = c·id gives an equal pair
        const std::uint64_t c = 1 + rng() % (p - 1);
        phi = scale(k, c, identity_map(A));
        h = scale(k, k.mul(k.inv(c), k.inv(c)), f);
      }
      const bool expected = quad_equal_by_points(t, f, phi, h);
      equal += expected;
      EXPECT_EQ(quad_map_equal(t, f, phi, h), expected);
      EXPECT_EQ(quad_map_equal_pointwise(t, f, phi, h), expected);
    }
    EXPECT_GE(equal, 20);
  }
}

TEST(LinearWitness, FiniteExamples) {
  {
    FiniteTower t(5, 3);
    const auto w = linear_witness(t, 1);
    const auto& k = t.scalars();
    EXPECT_EQ(w.c, 2u);
    EXPECT_EQ(w.branch, "scaled");
    EXPECT_EQ(w.h, scale(k, 4, identity_map(w.A)));
    EXPECT_EQ(w.phi, scale(k, 2, identity_map(w.A)));
    EXPECT_TRUE(w.claims.all());
    EXPECT_TRUE(w.claims.scalar_multiple);
  }
  for (auto [p, n, m] : std::vector<std::tuple<std::uint64_t, unsigned, unsigned>>{{5, 3, 1}, {7, 3, 1}, {5, 7, 1}, {5, 7, 2}}) {
    FiniteTower t(p, n);
    const auto w = linear_witness(t, m);
    const auto& k = t.scalars();
    EXPECT_EQ(w.A.dim(), m);
    EXPECT_EQ(intersect(k, w.A, product(t, w.A, w.A)).dim(), 0u);
    EXPECT_TRUE(quad_equal_by_points(t, w.f, w.phi, w.h));
    EXPECT_FALSE(w.f == w.h);
    EXPECT_EQ(is_strong_matching(t, w.f, MatchMode::exhaustive(), Budget()).strong, Decision::yes);
    EXPECT_EQ(is_strong_matching(t, w.h, MatchMode::exhaustive(), Budget()).strong, Decision::yes);
    EXPECT_EQ(derive_linear_claims(t, w.f, w.h, w.phi), w.claims);
  }
  // A_2 = ⟨a, a³⟩ and its square ⟨a², a⁴, a⁶⟩ in GF(5^7)
  FiniteTower t7(5, 7);
  const auto a = t7.generator();
  const auto A2 = span_elements(t7, {a, t7.pow(a, 3)});
  EXPECT_EQ(product(t7, A2, A2), span_elements(t7, {t7.pow(a, 2), t7.pow(a, 4), t7.pow(a, 6)}));

  expect_code(ErrorCode::invalid_tower, [] { linear_witness(FiniteTower(5, 4), 1); });
  expect_code(ErrorCode::invalid_order, [] { linear_witness(FiniteTower(5, 3), 2); });
  expect_code(ErrorCode::invalid_order, [] { linear_witness(FiniteTower(5, 3), 0); });
  expect_code(ErrorCode::unsupported_field, [] { linear_witness(FiniteTower(3, 3), 1); });
}

TEST(LinearWitness, TamperedMapsFailClaims) {
  FiniteTower t(7, 3);
  const auto& k = t.scalars();
  const auto w = linear_witness(t, 1);
  EXPECT_FALSE(derive_linear_claims(t, w.f, w.h, identity_map(w.A)).equivalent);
  EXPECT_FALSE(derive_linear_claims(t, w.f, w.f, identity_map(w.A)).distinct);
  const auto one = span_elements(t, {t.one()});
  EXPECT_FALSE(derive_linear_claims(t, identity_map(one), scale(k, 2, identity_map(one)), identity_map(one)).strong_f);
}

TEST(TranscendentalWitness, Examples) {
  for (unsigned m : {1u, 2u, 3u}) {
    const auto w = transcendental_witness(m);
    const auto& t = w.tower;
    const auto& k = t.scalars();
    EXPECT_EQ(w.A.dim(), m);
    EXPECT_EQ(w.c, Rational(2));
    EXPECT_EQ(w.h, scale(k, Rational(1, 4), identity_map(w.A)));
    EXPECT_EQ(intersect(k, w.A, product(t, w.A, w.A)).dim(), 0u);
    EXPECT_TRUE(w.claims.all());
    EXPECT_EQ(derive_linear_claims(t, w.f, w.h, w.phi), w.claims);
  }
  // t·t = 2t·(1/4)(2t)
  const auto w = transcendental_witness(1);
  const auto& t = w.tower;
  const auto x = t.indeterminate();
  EXPECT_EQ(t.mul(x, x), t.mul(t.scale(2, x), t.scale(Rational(1, 4), t.scale(2, x))));
  expect_code(ErrorCode::invalid_order, [] { transcendental_witness(0); });
  expect_code(ErrorCode::degree_overflow, [] { transcendental_witness(3, 8); });
}

TEST(LmpSearch, FindsCounterexamplesWithIntermediateFields) {
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 4}}) {
    FiniteTower t(p, n);
    const auto r = lmp_counterexample_search(t, Budget(1'000'000));
    ASSERT_EQ(r.status, SearchStatus::found) << t.descriptor();
    EXPECT_EQ(r.A.dim(), r.B.dim());
    EXPECT_FALSE(contains(t.scalars(), r.B, t.coords(t.one())));
    // the failing basis is matched to no ordered basis of B
    for (const auto& basis : ordered_bases(t, r.B)) EXPECT_FALSE(matched_by_definition(t, r.failing_basis, basis));
  }
}

TEST(LmpSearch, PrimeDegreeHasNoSmallCounterexample) {
  const auto r = lmp_counterexample_search(FiniteTower(2, 3), Budget(1'000'000));
  EXPECT_EQ(r.status, SearchStatus::absent);
  EXPECT_EQ(lmp_counterexample_search(FiniteTower(2, 4), Budget(0)).status, SearchStatus::unknown);
}

TEST(LinearAcyclic, DimensionOne) {
  FiniteTower t(5, 3);
  const auto& k = t.scalars();
  const auto A = span_elements(t, {t.generator()});
  const auto r = is_linear_acyclic(t, identity_map(A), Budget());
  // every equivalent g is λ·id with λμ² = 1, a scalar multiple of f
  EXPECT_EQ(r.acyclic, Decision::yes);
  ASSERT_TRUE(r.equivalent_g.has_value());
  EXPECT_TRUE(r.equivalent_g_is_scalar);
  EXPECT_EQ(*r.equivalent_g, scale(k, 4, identity_map(A)));
  EXPECT_EQ(r.strong_matchings, 4u);
  EXPECT_EQ(is_linear_acyclic(t, identity_map(A), Budget(0)).acyclic, Decision::unknown);
}
