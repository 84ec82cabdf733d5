#pragma once

// Scalar fields and field towers K ⊆ L.
//
// Two towers are provided: GF(p) ⊆ GF(p^n) with an explicit irreducible
// modulus, and Q ⊆ Q(t), rational functions in one indeterminate. Elements
// of L are exposed as coordinate vectors over K, which is all the subspace
// algebra in linear.hpp needs. In Q(t) only polynomials have coordinates
// (monomial basis up to the degree cap).

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "amatch/error.hpp"
#include "amatch/group.hpp"

namespace amatch {

// ---------------------------------------------------------------------------
// Scalar fields

template <class F>
concept ScalarField = requires(const F& k, const typename F::value_type& x, const typename F::value_type& y) {
  typename F::value_type;
  { k.zero() } -> std::same_as<typename F::value_type>;
  { k.one() } -> std::same_as<typename F::value_type>;
  { k.add(x, y) } -> std::same_as<typename F::value_type>;
  { k.sub(x, y) } -> std::same_as<typename F::value_type>;
  { k.mul(x, y) } -> std::same_as<typename F::value_type>;
  { k.neg(x) } -> std::same_as<typename F::value_type>;
  { k.inv(x) } -> std::same_as<typename F::value_type>;
  { k.is_zero(x) } -> std::same_as<bool>;
  { k.size() } -> std::same_as<std::optional<std::uint64_t>>;
  { k.format(x) } -> std::same_as<std::string>;
} && std::totally_ordered<typename F::value_type>;

/// GF(p), residues 0..p-1.
class PrimeField {
 public:
  using value_type = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p) || p >= (1ULL << 32)) throw Error(ErrorCode::invalid_argument, "characteristic must be a prime below 2^32");
  }

  std::uint64_t characteristic() const { return p_; }
  std::optional<std::uint64_t> size() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return reduce_mod(v, p_); }
  value_type add(value_type a, value_type b) const { return (a + b) % p_; }
  value_type sub(value_type a, value_type b) const { return (a + p_ - b) % p_; }
  value_type neg(value_type a) const { return (p_ - a) % p_; }
  value_type mul(value_type a, value_type b) const { return detail::mul_mod(a, b, p_); }
  value_type inv(value_type a) const {
    if (a % p_ == 0) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    return detail::pow_mod(a, p_ - 2, p_);
  }
  bool is_zero(value_type a) const { return a == 0; }
  bool contains(value_type a) const { return a < p_; }
  std::string format(value_type a) const { return std::to_string(a); }

  /// Elements 0, 1, ..., p-1.
  std::vector<value_type> elements() const {
    std::vector<value_type> out(p_);
    for (std::uint64_t i = 0; i < p_; ++i) out[i] = i;
    return out;
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t p_;
};

/// The exact rationals.
class RationalField {
 public:
  using value_type = Rational;

  std::optional<std::uint64_t> size() const { return std::nullopt; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return v; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    return 1 / a;
  }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool contains(const value_type&) const { return true; }
  std::string format(const value_type& a) const {
    return numerator(a).str() + "/" + denominator(a).str();
  }
  value_type parse(std::string_view text) const { return RationalGroup{}.parse(text); }

  friend bool operator==(const RationalField&, const RationalField&) = default;
};

// ---------------------------------------------------------------------------
// Dense polynomials, least-degree coefficient first, no trailing zeros.

template <ScalarField F>
using Poly = std::vector<typename F::value_type>;

namespace poly {

template <ScalarField F>
void trim(const F& k, Poly<F>& a) {
  while (!a.empty() && k.is_zero(a.back())) a.pop_back();
}

template <ScalarField F>
long degree(const Poly<F>& a) {
  return static_cast<long>(a.size()) - 1;
}

template <ScalarField F>
Poly<F> add(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.add(r[i], b[i]);
  trim(k, r);
  return r;
}

template <ScalarField F>
Poly<F> sub(const F& k, const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r(std::max(a.size(), b.size()), k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = k.sub(r[i], b[i]);
  trim(k, r);
  return r;
}

template <ScalarField F>
Poly<F> scale(const F& k, const Poly<F>& a, const typename F::value_type& c) {
  Poly<F> r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(k.mul(x, c));
  trim(k, r);
  return r;
}

template <ScalarField F>
Poly<F> mul(const F& k, const Poly<F>& a, const Poly<F>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<F> r(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k.is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  }
  trim(k, r);
  return r;
}

/// Quotient and remainder; m must be nonzero.
template <ScalarField F>
std::pair<Poly<F>, Poly<F>> divmod(const F& k, Poly<F> a, const Poly<F>& m) {
  if (m.empty()) throw Error(ErrorCode::division_by_zero, "polynomial division by zero");
  trim(k, a);
  if (a.size() < m.size()) return {{}, a};
  Poly<F> q(a.size() - m.size() + 1, k.zero());
  const auto lead_inv = k.inv(m.back());
  for (std::size_t i = a.size(); i-- >= m.size();) {
    if (k.is_zero(a[i])) continue;
    const auto c = k.mul(a[i], lead_inv);
    const std::size_t shift = i + 1 - m.size();
    q[shift] = c;
    for (std::size_t j = 0; j < m.size(); ++j) a[shift + j] = k.sub(a[shift + j], k.mul(c, m[j]));
  }
  trim(k, a);
  trim(k, q);
  return {q, a};
}

template <ScalarField F>
Poly<F> mod(const F& k, const Poly<F>& a, const Poly<F>& m) {
  return divmod(k, a, m).second;
}

template <ScalarField F>
Poly<F> monic(const F& k, const Poly<F>& a) {
  if (a.empty()) return a;
  return scale(k, a, k.inv(a.back()));
}

/// Monic gcd (zero if both are zero).
template <ScalarField F>
Poly<F> gcd(const F& k, Poly<F> a, Poly<F> b) {
  trim(k, a);
  trim(k, b);
  while (!b.empty()) {
    auto r = mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(k, a);
}

/// base^e mod m.
template <ScalarField F>
Poly<F> powmod(const F& k, Poly<F> base, std::uint64_t e, const Poly<F>& m) {
  Poly<F> result{k.one()};
  result = mod(k, result, m);
  base = mod(k, base, m);
  while (e > 0) {
    if (e & 1) result = mod(k, mul(k, result, base), m);
    base = mod(k, mul(k, base, base), m);
    e >>= 1;
  }
  return result;
}

template <ScalarField F>
std::string format(const F& k, const Poly<F>& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += k.format(a[i]);
  }
  return s + "]";
}

}  // namespace poly

namespace detail {

/// x^(p^d) mod f, by d successive p-th powers.
inline Poly<PrimeField> frobenius_of_x(const PrimeField& k, const Poly<PrimeField>& f, unsigned d) {
  Poly<PrimeField> r = poly::mod(k, Poly<PrimeField>{0, 1}, f);
  for (unsigned i = 0; i < d; ++i) r = poly::powmod(k, r, k.characteristic(), f);
  return r;
}

inline std::vector<unsigned> proper_divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

}  // namespace detail

/// Rabin's test: f of degree n is irreducible over GF(p) iff x^(p^n) ≡ x
/// and gcd(x^(p^d) − x, f) = 1 for every proper divisor d of n.
inline bool is_irreducible(const PrimeField& k, Poly<PrimeField> f) {
  poly::trim(k, f);
  if (f.size() < 2) return false;
  f = poly::monic(k, f);
  const auto n = static_cast<unsigned>(poly::degree<PrimeField>(f));
  const Poly<PrimeField> x = poly::mod(k, Poly<PrimeField>{0, 1}, f);
  if (poly::sub(k, detail::frobenius_of_x(k, f, n), x).size() != 0) return false;
  for (unsigned d : detail::proper_divisors(n)) {
    auto h = poly::sub(k, detail::frobenius_of_x(k, f, d), x);
    if (poly::gcd(k, h, f).size() != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// GF(p) ⊆ GF(p^n)

class FiniteTower {
 public:
  using scalar_field = PrimeField;
  using scalar = std::uint64_t;
  using element = std::vector<std::uint64_t>;  // exactly n coordinates over the power basis

  /// Without a modulus, picks the smallest irreducible monic polynomial of
  /// degree n, ordering candidates by the integer value f(p).
  FiniteTower(std::uint64_t p, unsigned n, std::optional<std::vector<std::uint64_t>> modulus = std::nullopt)
      : k_(p), n_(n) {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "extension degree must be at least 2");
    long double size = 1;
    for (unsigned i = 0; i < n; ++i) size *= static_cast<long double>(p);
    if (size > static_cast<long double>(1ULL << 62)) throw Error(ErrorCode::invalid_argument, "field too large");
    order_ = 1;
    for (unsigned i = 0; i < n; ++i) order_ *= p;

    if (modulus) {
      Poly<PrimeField> f;
      for (auto c : *modulus) {
        if (c >= p) throw Error(ErrorCode::invalid_modulus, "coefficient out of range");
        f.push_back(c);
      }
      poly::trim(k_, f);
      if (poly::degree<PrimeField>(f) != static_cast<long>(n))
        throw Error(ErrorCode::invalid_modulus, "modulus must have degree " + std::to_string(n));
      f = poly::monic(k_, f);
      if (!is_irreducible(k_, f)) throw Error(ErrorCode::invalid_modulus, poly::format(k_, f) + " is reducible");
      modulus_ = f;
    } else {
      modulus_ = smallest_irreducible(k_, n);
    }
  }

  static Poly<PrimeField> smallest_irreducible(const PrimeField& k, unsigned n) {
    const auto p = k.characteristic();
    Poly<PrimeField> f(n + 1, 0);
    f[n] = 1;
    while (true) {
      if (is_irreducible(k, f)) return f;
      std::size_t i = 0;  // increment the low coefficients as a base-p counter
      while (i < n && ++f[i] == p) f[i++] = 0;
      if (i == n) throw Error(ErrorCode::invalid_modulus, "no irreducible polynomial found");
    }
  }

  const PrimeField& scalars() const { return k_; }
  std::uint64_t p() const { return k_.characteristic(); }
  unsigned n() const { return n_; }
  std::uint64_t order() const { return order_; }
  const Poly<PrimeField>& modulus() const { return modulus_; }
  std::size_t coord_dim() const { return n_; }

  /// "gf:p^n:c0,c1,...,cn" with the monic modulus, least degree first.
  std::string descriptor() const {
    std::string s = "gf:" + std::to_string(p()) + "^" + std::to_string(n_) + ":";
    for (std::size_t i = 0; i < modulus_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(modulus_[i]);
    }
    return s;
  }

  element zero() const { return element(n_, 0); }
  element one() const { return embed(1); }
  element embed(scalar c) const {
    element e(n_, 0);
    e[0] = c % p();
    return e;
  }
  /// The class of x modulo the modulus; it lies outside K.
  element generator() const {
    element e(n_, 0);
    e[1] = 1;
    return e;
  }

  bool contains(const element& x) const {
    return x.size() == n_ && std::all_of(x.begin(), x.end(), [&](auto c) { return c < p(); });
  }

  element add(const element& a, const element& b) const {
    element r(n_);
    for (unsigned i = 0; i < n_; ++i) r[i] = k_.add(a[i], b[i]);
    return r;
  }
  element sub(const element& a, const element& b) const {
    element r(n_);
    for (unsigned i = 0; i < n_; ++i) r[i] = k_.sub(a[i], b[i]);
    return r;
  }
  element neg(const element& a) const { return sub(zero(), a); }
  element scale(scalar c, const element& a) const {
    element r(n_);
    for (unsigned i = 0; i < n_; ++i) r[i] = k_.mul(c, a[i]);
    return r;
  }
  element mul(const element& a, const element& b) const {
    return pad(poly::mod(k_, poly::mul(k_, to_poly(a), to_poly(b)), modulus_));
  }
  element pow(const element& a, std::uint64_t e) const { return pad(poly::powmod(k_, to_poly(a), e, modulus_)); }
  element inv(const element& a) const {
    if (is_zero(a)) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    return pow(a, order_ - 2);
  }
  /// x ↦ x^(p^d), a K-linear map of L.
  element frobenius(const element& a, unsigned d = 1) const {
    element r = a;
    for (unsigned i = 0; i < d; ++i) r = pow(r, p());
    return r;
  }
  bool is_zero(const element& a) const {
    return std::all_of(a.begin(), a.end(), [](auto c) { return c == 0; });
  }

  std::vector<scalar> coords(const element& a) const { return a; }
  element from_coords(const std::vector<scalar>& v) const {
    if (v.size() != n_) throw Error(ErrorCode::invalid_argument, "coordinate vector has wrong length");
    return v;
  }

  /// Element with index i in the base-p expansion c0 + c1 p + ...
  element element_at(std::uint64_t i) const {
    element e(n_);
    for (unsigned j = 0; j < n_; ++j) {
      e[j] = i % p();
      i /= p();
    }
    return e;
  }

  std::string format(const element& a) const {
    std::string s = "[";
    for (unsigned i = 0; i < n_; ++i) {
      if (i) s += ",";
      s += std::to_string(a[i]);
    }
    return s + "]";
  }

 private:
  Poly<PrimeField> to_poly(const element& a) const {
    Poly<PrimeField> r(a.begin(), a.end());
    poly::trim(k_, r);
    return r;
  }
  element pad(Poly<PrimeField> r) const {
    r.resize(n_, 0);
    return r;
  }

  PrimeField k_;
  unsigned n_;
  std::uint64_t order_ = 1;
  Poly<PrimeField> modulus_;
};

/// Proper divisors d > 1 of n: the degrees of intermediate fields.
inline std::vector<unsigned> intermediate_fields(const FiniteTower& t) {
  std::vector<unsigned> out;
  for (unsigned d : detail::proper_divisors(t.n()))
    if (d > 1) out.push_back(d);
  return out;
}

// ---------------------------------------------------------------------------
// Q ⊆ Q(t)

using QPoly = Poly<RationalField>;

/// num/den with gcd 1 and den monic.
struct RationalFunction {
  QPoly num;
  QPoly den{Rational(1)};

  bool is_polynomial() const { return den.size() == 1; }
  friend bool operator==(const RationalFunction&, const RationalFunction&) = default;
};

class RationalFunctionTower {
 public:
  using scalar_field = RationalField;
  using scalar = Rational;
  using element = RationalFunction;

  static constexpr unsigned default_degree_cap = 64;

  explicit RationalFunctionTower(unsigned degree_cap = default_degree_cap) : cap_(degree_cap) {
    if (cap_ < 1) throw Error(ErrorCode::invalid_argument, "degree cap must be positive");
  }

  const RationalField& scalars() const { return k_; }
  unsigned degree_cap() const { return cap_; }
  std::size_t coord_dim() const { return cap_ + 1; }
  std::string descriptor() const { return "ratfun"; }

  element zero() const { return {}; }
  element one() const { return embed(1); }
  element embed(const scalar& c) const { return normalize({QPoly{c}, QPoly{Rational(1)}}); }
  element indeterminate() const { return {QPoly{Rational(0), Rational(1)}, QPoly{Rational(1)}}; }
  element monomial(unsigned d) const {
    QPoly p(d + 1, Rational(0));
    p[d] = 1;
    return checked({p, QPoly{Rational(1)}});
  }

  element add(const element& a, const element& b) const {
    return normalize({poly::add(k_, poly::mul(k_, a.num, b.den), poly::mul(k_, b.num, a.den)), poly::mul(k_, a.den, b.den)});
  }
  element sub(const element& a, const element& b) const { return add(a, neg(b)); }
  element neg(const element& a) const { return {poly::scale(k_, a.num, Rational(-1)), a.den}; }
  element scale(const scalar& c, const element& a) const { return normalize({poly::scale(k_, a.num, c), a.den}); }
  element mul(const element& a, const element& b) const {
    return normalize({poly::mul(k_, a.num, b.num), poly::mul(k_, a.den, b.den)});
  }
  element inv(const element& a) const {
    if (a.num.empty()) throw Error(ErrorCode::division_by_zero, "inverse of zero");
    return normalize({a.den, a.num});
  }
  element pow(const element& a, std::uint64_t e) const {
    element r = one();
    element b = a;
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      e >>= 1;
      if (e) b = mul(b, b);
    }
    return r;
  }
  bool is_zero(const element& a) const { return a.num.empty(); }

  /// Monomial coordinates; only polynomials have them.
  std::vector<scalar> coords(const element& a) const {
    if (!a.is_polynomial()) throw Error(ErrorCode::invalid_argument, "rational function is not a polynomial");
    std::vector<scalar> v(coord_dim(), Rational(0));
    for (std::size_t i = 0; i < a.num.size(); ++i) v[i] = a.num[i];
    return v;
  }
  element from_coords(const std::vector<scalar>& v) const {
    if (v.size() != coord_dim()) throw Error(ErrorCode::invalid_argument, "coordinate vector has wrong length");
    QPoly p(v.begin(), v.end());
    poly::trim(k_, p);
    return {p, QPoly{Rational(1)}};
  }

  std::string format(const element& a) const {
    return poly::format(k_, a.num) + "/" + poly::format(k_, a.den);
  }

 private:
  element checked(element e) const {
    if (poly::degree<RationalField>(e.num) > static_cast<long>(cap_) ||
        poly::degree<RationalField>(e.den) > static_cast<long>(cap_))
      throw Error(ErrorCode::degree_overflow, "degree exceeds cap " + std::to_string(cap_));
    return e;
  }

  element normalize(element e) const {
    poly::trim(k_, e.num);
    poly::trim(k_, e.den);
    if (e.den.empty()) throw Error(ErrorCode::division_by_zero, "zero denominator");
    if (e.num.empty()) return zero();
    auto g = poly::gcd(k_, e.num, e.den);
    if (g.size() > 1) {
      e.num = poly::divmod(k_, e.num, g).first;
      e.den = poly::divmod(k_, e.den, g).first;
    }
    const auto lead = k_.inv(e.den.back());
    e.num = poly::scale(k_, e.num, lead);
    e.den = poly::scale(k_, e.den, lead);
    return checked(std::move(e));
  }

  RationalField k_;
  unsigned cap_;
};

/// Parses "gf:p^n", "gf:p^n:c0,c1,...,cn" (least degree first).
inline FiniteTower parse_finite_tower(std::string_view spec) {
  auto fail = [&] { return Error(ErrorCode::invalid_argument, "bad tower spec '" + std::string(spec) + "'"); };
  if (spec.substr(0, 3) != "gf:") throw fail();
  auto rest = spec.substr(3);
  const auto caret = rest.find('^');
  if (caret == std::string_view::npos) throw fail();
  const auto colon = rest.find(':', caret);
  const auto p = detail::parse_i64(rest.substr(0, caret));
  const auto n = detail::parse_i64(rest.substr(caret + 1, colon == std::string_view::npos ? rest.npos : colon - caret - 1));
  if (p < 2 || n < 1 || n > 64) throw fail();
  std::optional<std::vector<std::uint64_t>> modulus;
  if (colon != std::string_view::npos) {
    modulus.emplace();
    auto list = rest.substr(colon + 1);
    while (true) {
      const auto comma = list.find(',');
      const auto c = detail::parse_i64(list.substr(0, comma));
      if (c < 0) throw fail();
      modulus->push_back(static_cast<std::uint64_t>(c));
      if (comma == std::string_view::npos) break;
      list = list.substr(comma + 1);
    }
  }
  return FiniteTower(static_cast<std::uint64_t>(p), static_cast<unsigned>(n), modulus);
}

}  // namespace amatch
