#include <gtest/gtest.h>

#include <random>

#include "amatch/field.hpp"

using namespace amatch;

namespace {

using P = Poly<PrimeField>;

// Irreducible iff no monic factor of degree 1..deg/2 divides it.
bool irreducible_by_trial_division(const PrimeField& k, const P& f) {
  const long n = poly::degree<PrimeField>(f);
  const auto p = k.characteristic();
  for (long d = 1; 2 * d <= n; ++d) {
    P g(d + 1, 0);
    g[d] = 1;
    while (true) {
      if (poly::mod(k, f, g).empty()) return false;
      long i = 0;
      while (i < d && ++g[i] == p) g[i++] = 0;
      if (i == d) break;
    }
  }
  return n >= 1;
}

P monic_from_index(std::uint64_t p, unsigned n, std::uint64_t idx) {
  P f(n + 1, 0);
  f[n] = 1;
  for (unsigned i = 0; i < n; ++i) {
    f[i] = idx % p;
    idx /= p;
  }
  return f;
}

}  // namespace

TEST(Tower, ExplicitModulus) {
  FiniteTower gf9(3, 2, std::vector<std::uint64_t>{1, 0, 1});
  auto a = gf9.generator();
  EXPECT_EQ(gf9.mul(a, a), gf9.embed(2));
  EXPECT_EQ(gf9.descriptor(), "gf:3^2:1,0,1");
  EXPECT_EQ(gf9.order(), 9u);

  try {
    FiniteTower(3, 2, std::vector<std::uint64_t>{2, 0, 1});  // x^2 - 1
    FAIL() << "expected invalid-modulus";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_modulus);
  }
  EXPECT_THROW(FiniteTower(3, 2, std::vector<std::uint64_t>{1, 1}), Error);
  EXPECT_THROW(FiniteTower(4, 2), Error);
}

TEST(Tower, SmallestIrreducibleMatchesTrialDivision) {
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 4}, {5, 3}, {7, 3}, {5, 4}}) {
    PrimeField k(p);
    P expected;
    for (std::uint64_t idx = 0;; ++idx) {
      auto f = monic_from_index(p, n, idx);
      if (irreducible_by_trial_division(k, f)) {
        expected = f;
        break;
      }
    }
    EXPECT_EQ(FiniteTower(p, n).modulus(), expected) << p << "^" << n;
  }
  EXPECT_EQ(FiniteTower(5, 3).modulus(), (P{1, 1, 0, 1}));
}

TEST(Tower, RabinTestAgreesWithTrialDivision) {
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {2, 6}, {3, 3}, {3, 4}, {5, 2}, {5, 3}}) {
    PrimeField k(p);
    std::uint64_t count = 1;
    for (unsigned i = 0; i < n; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      auto f = monic_from_index(p, n, idx);
      EXPECT_EQ(is_irreducible(k, f), irreducible_by_trial_division(k, f)) << poly::format(k, f);
    }
  }
}

TEST(Tower, MultiplicativeGroupOrder) {
  FiniteTower t(5, 3);
  for (std::uint64_t i = 1; i < t.order(); ++i) {
    auto a = t.element_at(i);
    EXPECT_EQ(t.pow(a, t.order() - 1), t.one());
    EXPECT_EQ(t.mul(a, t.inv(a)), t.one());
  }
  try {
    t.inv(t.zero());
    FAIL() << "expected division-by-zero";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero);
  }
}

TEST(Tower, FieldAxiomsOnRandomTriples) {
  std::mt19937_64 rng(5);
  for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 4}, {3, 4}, {5, 7}, {7, 3}}) {
    FiniteTower t(p, n);
    for (int r = 0; r < 200; ++r) {
      auto a = t.element_at(rng() % t.order());
      auto b = t.element_at(rng() % t.order());
      auto c = t.element_at(rng() % t.order());
      EXPECT_EQ(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
      EXPECT_EQ(t.mul(a, b), t.mul(b, a));
      EXPECT_EQ(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
      EXPECT_EQ(t.add(a, t.neg(a)), t.zero());
      // Frobenius is additive and fixes K
      EXPECT_EQ(t.frobenius(t.add(a, b)), t.add(t.frobenius(a), t.frobenius(b)));
    }
    for (std::uint64_t c = 0; c < p; ++c) EXPECT_EQ(t.frobenius(t.embed(c)), t.embed(c));
  }
}

TEST(Tower, IntermediateFieldDegrees) {
  EXPECT_EQ(intermediate_fields(FiniteTower(2, 4)), (std::vector<unsigned>{2}));
  EXPECT_EQ(intermediate_fields(FiniteTower(5, 7)), (std::vector<unsigned>{}));
  EXPECT_EQ(intermediate_fields(FiniteTower(2, 6)), (std::vector<unsigned>{2, 3}));
}

TEST(Tower, ParseSpec) {
  EXPECT_EQ(parse_finite_tower("gf:3^2:1,0,1").descriptor(), "gf:3^2:1,0,1");
  EXPECT_EQ(parse_finite_tower("gf:5^3").modulus(), (P{1, 1, 0, 1}));
  EXPECT_THROW(parse_finite_tower("gf:3^2:2,0,1"), Error);
  EXPECT_THROW(parse_finite_tower("gf:3"), Error);
  EXPECT_THROW(parse_finite_tower("q:3^2"), Error);
}

TEST(RationalFunctions, Arithmetic) {
  RationalFunctionTower q;
  auto t = q.indeterminate();
  auto one = q.one();
  // (t^2 - 1) / (t - 1) = t + 1
  auto num = q.sub(q.mul(t, t), one);
  auto den = q.sub(t, one);
  auto r = q.mul(num, q.inv(den));
  EXPECT_TRUE(r.is_polynomial());
  EXPECT_EQ(r, q.add(t, one));
  EXPECT_EQ(q.mul(q.inv(t), t), one);
  EXPECT_EQ(q.pow(t, 5), q.monomial(5));
  EXPECT_EQ(q.format(q.scale(Rational(1, 2), t)), "[0/1,1/2]/[1/1]");
  EXPECT_EQ(q.coords(q.monomial(3))[3], Rational(1));
  EXPECT_THROW(q.coords(q.inv(t)), Error);
  try {
    q.inv(q.zero());
    FAIL() << "expected division-by-zero";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero);
  }
}

TEST(RationalFunctions, DegreeCap) {
  RationalFunctionTower q(8);
  auto t = q.indeterminate();
  EXPECT_NO_THROW(q.pow(t, 8));
  try {
    q.pow(t, 9);
    FAIL() << "expected degree-overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degree_overflow);
  }
}
