#pragma once

// Exact Abelian group carriers: finite groups given by invariant factors,
// the integers, the dyadic rationals Z[1/2] and the rationals.
//
// Every carrier exposes the same surface (zero/add/neg/order/format/parse)
// so the matching algorithms can be written once as templates. AnyGroup and
// AnyElement give the runtime-tagged view used by the CLI and certificates.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <compare>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "amatch/error.hpp"

namespace amatch {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Order of a group element; nullopt stands for infinite order.
using ElementOrder = std::optional<std::uint64_t>;

template <class G>
concept AbelianGroup =
    requires(const G& g, const typename G::element_type& x, const typename G::element_type& y,
             std::string_view text) {
      typename G::element_type;
      { g.zero() } -> std::same_as<typename G::element_type>;
      { g.add(x, y) } -> std::same_as<typename G::element_type>;
      { g.neg(x) } -> std::same_as<typename G::element_type>;
      { g.order(x) } -> std::same_as<ElementOrder>;
      { g.format(x) } -> std::same_as<std::string>;
      { g.parse(text) } -> std::same_as<typename G::element_type>;
      { g.descriptor() } -> std::same_as<std::string>;
    } && std::totally_ordered<typename G::element_type>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_i64(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::invalid_argument, "not an integer: '" + std::string(s) + "'");
  return v;
}

inline Integer parse_integer(std::string_view s) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(ErrorCode::invalid_argument, "not an integer: '" + std::string(s) + "'");
  Integer v{std::string(digits)};
  return (!s.empty() && s.front() == '-') ? Integer(-v) : v;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

}  // namespace detail

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Reduces a into [0, m).
inline std::uint64_t reduce_mod(std::int64_t a, std::uint64_t m) {
  auto r = a % static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

/// Legendre symbol (a/p) by Euler's criterion a^((p-1)/2) mod p.
inline int legendre(std::int64_t a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p))
    throw Error(ErrorCode::invalid_argument, "legendre: modulus " + std::to_string(p) + " is not an odd prime");
  auto r = reduce_mod(a, p);
  if (r == 0) return 0;
  return detail::pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Finite carriers

/// Element of a finite carrier, stored as its mixed-radix code with the first
/// invariant factor most significant. Numeric order on codes coincides with
/// the lexicographic order on residue vectors.
struct FiniteElement {
  std::uint64_t code = 0;
  friend auto operator<=>(const FiniteElement&, const FiniteElement&) = default;
};

/// Z_{d1} x ... x Z_{dk}; the factors need not divide each other.
class FiniteGroup {
 public:
  using element_type = FiniteElement;

  static constexpr std::uint64_t max_order = std::uint64_t{1} << 32;

  explicit FiniteGroup(std::vector<std::uint64_t> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw Error(ErrorCode::invalid_carrier, "finite carrier needs at least one factor");
    order_ = 1;
    for (auto d : factors_) {
      if (d < 2) throw Error(ErrorCode::invalid_carrier, "invariant factor " + std::to_string(d) + " < 2");
      if (order_ > max_order / d) throw Error(ErrorCode::invalid_carrier, "carrier too large");
      order_ *= d;
    }
  }

  const std::vector<std::uint64_t>& factors() const noexcept { return factors_; }
  std::uint64_t size() const noexcept { return order_; }
  bool cyclic() const noexcept { return factors_.size() == 1; }

  /// lcm of the invariant factors.
  std::uint64_t exponent() const {
    std::uint64_t e = 1;
    for (auto d : factors_) e = std::lcm(e, d);
    return e;
  }

  bool contains(FiniteElement x) const noexcept { return x.code < order_; }

  std::vector<std::uint64_t> residues(FiniteElement x) const {
    std::vector<std::uint64_t> r(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
      r[i] = x.code % factors_[i];
      x.code /= factors_[i];
    }
    return r;
  }

  /// Builds an element from arbitrary integer coordinates, reducing each.
  FiniteElement from_residues(std::span<const std::int64_t> coords) const {
    if (coords.size() != factors_.size())
      throw Error(ErrorCode::carrier_mismatch, "residue vector has wrong length");
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) code = code * factors_[i] + reduce_mod(coords[i], factors_[i]);
    return {code};
  }

  /// Convenience constructor for cyclic carriers.
  FiniteElement element(std::int64_t residue) const {
    if (!cyclic()) throw Error(ErrorCode::carrier_mismatch, "scalar element of a non-cyclic carrier");
    return {reduce_mod(residue, order_)};
  }

  FiniteElement zero() const { return {0}; }

  FiniteElement add(FiniteElement x, FiniteElement y) const {
    check(x);
    check(y);
    if (cyclic()) return {(x.code + y.code) % order_};
    std::uint64_t code = 0, place = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      const auto d = factors_[i];
      code += ((x.code % d + y.code % d) % d) * place;
      x.code /= d;
      y.code /= d;
      place *= d;
    }
    return {code};
  }

  FiniteElement neg(FiniteElement x) const {
    check(x);
    if (cyclic()) return {(order_ - x.code) % order_};
    std::uint64_t code = 0, place = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      const auto d = factors_[i];
      code += ((d - x.code % d) % d) * place;
      x.code /= d;
      place *= d;
    }
    return {code};
  }

  ElementOrder order(FiniteElement x) const {
    check(x);
    std::uint64_t n = 1;
    auto r = residues(x);
    for (std::size_t i = 0; i < r.size(); ++i) n = std::lcm(n, factors_[i] / std::gcd(r[i], factors_[i]));
    return n;
  }

  std::vector<FiniteElement> elements() const {
    std::vector<FiniteElement> all(order_);
    for (std::uint64_t c = 0; c < order_; ++c) all[c].code = c;
    return all;
  }

  std::string format(FiniteElement x) const {
    check(x);
    auto r = residues(x);
    if (cyclic()) return std::to_string(r[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
    return s + ")";
  }

  FiniteElement parse(std::string_view text) const {
    text = detail::trim(text);
    std::vector<std::int64_t> coords;
    if (!text.empty() && text.front() == '(') {
      if (text.back() != ')') throw Error(ErrorCode::invalid_argument, "unterminated residue vector");
      text = text.substr(1, text.size() - 2);
      while (true) {
        auto comma = text.find(',');
        coords.push_back(detail::parse_i64(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
      }
    } else {
      coords.push_back(detail::parse_i64(text));
    }
    if (coords.size() != factors_.size()) throw Error(ErrorCode::carrier_mismatch, "residue vector has wrong length");
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] < 0 || static_cast<std::uint64_t>(coords[i]) >= factors_[i])
        throw Error(ErrorCode::invalid_argument, "residue out of canonical range");
    return from_residues(coords);
  }

  std::string descriptor() const {
    std::string s = "z:";
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? "x" : "") + std::to_string(factors_[i]);
    return s;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.factors_ == b.factors_; }

 private:
  void check(FiniteElement x) const {
    if (!contains(x)) throw Error(ErrorCode::carrier_mismatch, "element code outside " + descriptor());
  }

  std::vector<std::uint64_t> factors_;
  std::uint64_t order_ = 1;
};

// ---------------------------------------------------------------------------
// Torsion-free carriers

class IntegerGroup {
 public:
  using element_type = Integer;

  Integer zero() const { return 0; }
  Integer add(const Integer& x, const Integer& y) const { return x + y; }
  Integer neg(const Integer& x) const { return -x; }
  ElementOrder order(const Integer& x) const { return x == 0 ? ElementOrder{1} : std::nullopt; }
  std::string format(const Integer& x) const { return x.str(); }
  Integer parse(std::string_view text) const { return detail::parse_integer(text); }
  std::string descriptor() const { return "int"; }
  friend bool operator==(const IntegerGroup&, const IntegerGroup&) { return true; }
};

/// num / 2^exp with num odd whenever exp > 0.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(Integer num, unsigned exp = 0) : num_(std::move(num)), exp_(exp) { normalize(); }  // NOLINT

  const Integer& numerator() const noexcept { return num_; }
  unsigned exponent() const noexcept { return exp_; }

  friend Dyadic operator+(const Dyadic& x, const Dyadic& y) {
    const auto e = std::max(x.exp_, y.exp_);
    return Dyadic((x.num_ << (e - x.exp_)) + (y.num_ << (e - y.exp_)), e);
  }
  friend Dyadic operator-(const Dyadic& x) { return Dyadic(-x.num_, x.exp_); }
  friend Dyadic operator-(const Dyadic& x, const Dyadic& y) { return x + (-y); }

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& x, const Dyadic& y) {
    const auto e = std::max(x.exp_, y.exp_);
    const Integer lhs = x.num_ << (e - x.exp_);
    const Integer rhs = y.num_ << (e - y.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && !boost::multiprecision::bit_test(num_, 0)) {
      num_ >>= 1;
      --exp_;
    }
  }

  Integer num_ = 0;
  unsigned exp_ = 0;
};

/// Z[1/2]: 2-divisible but not 3-divisible, so G = 2G while 6G is proper.
class DyadicGroup {
 public:
  using element_type = Dyadic;

  Dyadic zero() const { return {}; }
  Dyadic add(const Dyadic& x, const Dyadic& y) const { return x + y; }
  Dyadic neg(const Dyadic& x) const { return -x; }
  ElementOrder order(const Dyadic& x) const { return x.numerator() == 0 ? ElementOrder{1} : std::nullopt; }
  std::string format(const Dyadic& x) const { return x.numerator().str() + "/2^" + std::to_string(x.exponent()); }

  Dyadic parse(std::string_view text) const {
    text = detail::trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Dyadic(detail::parse_integer(text));
    auto den = detail::trim(text.substr(slash + 1));
    if (den.substr(0, 2) != "2^") throw Error(ErrorCode::invalid_argument, "dyadic denominator must be 2^e");
    auto e = detail::parse_i64(den.substr(2));
    if (e < 0 || e > 1 << 20) throw Error(ErrorCode::invalid_argument, "dyadic exponent out of range");
    return Dyadic(detail::parse_integer(text.substr(0, slash)), static_cast<unsigned>(e));
  }

  std::string descriptor() const { return "dyadic"; }
  friend bool operator==(const DyadicGroup&, const DyadicGroup&) { return true; }
};

class RationalGroup {
 public:
  using element_type = Rational;

  Rational zero() const { return 0; }
  Rational add(const Rational& x, const Rational& y) const { return x + y; }
  Rational neg(const Rational& x) const { return -x; }
  ElementOrder order(const Rational& x) const { return x == 0 ? ElementOrder{1} : std::nullopt; }

  std::string format(const Rational& x) const {
    return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
  }

  Rational parse(std::string_view text) const {
    text = detail::trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(text));
    auto num = detail::parse_integer(text.substr(0, slash));
    auto den = detail::parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::division_by_zero, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return Rational(num, den);
  }

  std::string descriptor() const { return "rat"; }
  friend bool operator==(const RationalGroup&, const RationalGroup&) { return true; }
};

static_assert(AbelianGroup<FiniteGroup>);
static_assert(AbelianGroup<IntegerGroup>);
static_assert(AbelianGroup<DyadicGroup>);
static_assert(AbelianGroup<RationalGroup>);

template <AbelianGroup G>
using element_t = typename G::element_type;

/// n·x by double-and-add.
template <AbelianGroup G>
element_t<G> multiple(const G& g, std::int64_t n, element_t<G> x) {
  if (n < 0) {
    x = g.neg(x);
    n = -n;
  }
  auto acc = g.zero();
  while (n > 0) {
    if (n & 1) acc = g.add(acc, x);
    x = g.add(x, x);
    n >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Runtime-tagged carriers

enum class CarrierKind { finite, integer, dyadic, rational };

using AnyGroup = std::variant<FiniteGroup, IntegerGroup, DyadicGroup, RationalGroup>;
using AnyElement = std::variant<FiniteElement, Integer, Dyadic, Rational>;

inline AnyGroup make_carrier(CarrierKind kind, std::vector<std::uint64_t> factors = {}) {
  switch (kind) {
    case CarrierKind::finite: return FiniteGroup(std::move(factors));
    case CarrierKind::integer: return IntegerGroup{};
    case CarrierKind::dyadic: return DyadicGroup{};
    case CarrierKind::rational: return RationalGroup{};
  }
  throw Error(ErrorCode::invalid_carrier, "unknown carrier kind");
}

inline CarrierKind kind_of(const AnyGroup& g) { return static_cast<CarrierKind>(g.index()); }

/// Parses "z:n", "z:n1xn2...", "int", "dyadic" or "rat".
inline AnyGroup parse_group_spec(std::string_view spec) {
  spec = detail::trim(spec);
  if (spec == "int") return IntegerGroup{};
  if (spec == "dyadic") return DyadicGroup{};
  if (spec == "rat") return RationalGroup{};
  if (spec.substr(0, 2) != "z:") throw Error(ErrorCode::invalid_carrier, "unknown group spec '" + std::string(spec) + "'");
  spec.remove_prefix(2);
  std::vector<std::uint64_t> factors;
  while (true) {
    auto x = spec.find('x');
    auto v = detail::parse_i64(spec.substr(0, x));
    if (v < 0) throw Error(ErrorCode::invalid_carrier, "negative invariant factor");
    factors.push_back(static_cast<std::uint64_t>(v));
    if (x == std::string_view::npos) break;
    spec.remove_prefix(x + 1);
  }
  return FiniteGroup(std::move(factors));
}

inline std::string descriptor(const AnyGroup& g) {
  return std::visit([](const auto& c) { return c.descriptor(); }, g);
}

namespace detail {

template <AbelianGroup G>
const element_t<G>& unwrap(const G& g, const AnyElement& x) {
  const auto* v = std::get_if<element_t<G>>(&x);
  if (v == nullptr) throw Error(ErrorCode::carrier_mismatch, "element does not belong to " + g.descriptor());
  if constexpr (std::same_as<G, FiniteGroup>) {
    if (!g.contains(*v)) throw Error(ErrorCode::carrier_mismatch, "element does not belong to " + g.descriptor());
  }
  return *v;
}

}  // namespace detail

inline AnyElement zero(const AnyGroup& g) {
  return std::visit([](const auto& c) -> AnyElement { return c.zero(); }, g);
}

inline AnyElement add(const AnyGroup& g, const AnyElement& x, const AnyElement& y) {
  return std::visit([&](const auto& c) -> AnyElement { return c.add(detail::unwrap(c, x), detail::unwrap(c, y)); }, g);
}

inline AnyElement neg(const AnyGroup& g, const AnyElement& x) {
  return std::visit([&](const auto& c) -> AnyElement { return c.neg(detail::unwrap(c, x)); }, g);
}

inline bool equal(const AnyGroup& g, const AnyElement& x, const AnyElement& y) {
  return std::visit([&](const auto& c) { return detail::unwrap(c, x) == detail::unwrap(c, y); }, g);
}

inline ElementOrder element_order(const AnyGroup& g, const AnyElement& x) {
  return std::visit([&](const auto& c) { return c.order(detail::unwrap(c, x)); }, g);
}

inline std::string format(const AnyGroup& g, const AnyElement& x) {
  return std::visit([&](const auto& c) { return c.format(detail::unwrap(c, x)); }, g);
}

inline AnyElement parse(const AnyGroup& g, std::string_view text) {
  return std::visit([&](const auto& c) -> AnyElement { return c.parse(text); }, g);
}

inline std::vector<AnyElement> enumerate_elements(const AnyGroup& g) {
  const auto* finite = std::get_if<FiniteGroup>(&g);
  if (finite == nullptr) throw Error(ErrorCode::not_enumerable, descriptor(g) + " is infinite");
  auto elems = finite->elements();
  return {elems.begin(), elems.end()};
}

}  // namespace amatch
