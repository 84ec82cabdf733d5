#pragma once

// Explicit witnesses: pairs of distinct matchings with equal multiplicity
// functions, and the pairing bijection that certifies the equality.
// Every generator validates its output before returning it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "amatch/error.hpp"
#include "amatch/group.hpp"
#include "amatch/matching.hpp"

namespace amatch {

enum class WitnessKind { qr, cycle, window, pairing, failure };

constexpr std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::qr: return "qr";
    case WitnessKind::cycle: return "cycle";
    case WitnessKind::window: return "window";
    case WitnessKind::pairing: return "pairing";
    case WitnessKind::failure: return "failure";
  }
  return "?";
}

struct Claims {
  bool is_matching_f = false;
  bool is_matching_g = false;
  bool f_ne_g = false;
  bool profiles_equal = false;
  bool pairing_identity_holds = false;

  bool all() const { return is_matching_f && is_matching_g && f_ne_g && profiles_equal && pairing_identity_holds; }
  friend bool operator==(const Claims&, const Claims&) = default;
};

struct GeneratorParams {
  std::map<std::string, std::int64_t> values;
  std::string variant;  // construction family or window model
  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

template <AbelianGroup G>
struct GroupCertificate {
  using E = element_t<G>;
  using Map = std::vector<std::pair<E, E>>;

  WitnessKind kind = WitnessKind::failure;
  G carrier;
  std::vector<E> A, B;
  Map f, g;
  std::optional<Map> phi;
  Claims claims;
  GeneratorParams generator;
};

using AnyCertificate = std::variant<GroupCertificate<FiniteGroup>, GroupCertificate<IntegerGroup>,
                                    GroupCertificate<DyadicGroup>, GroupCertificate<RationalGroup>>;

// ---------------------------------------------------------------------------
// Pairing bijections

/// Pairs each fiber A_x^f with A_x^g positionally (canonical order inside
/// fibers). Returns nothing when the multiplicity functions differ.
template <AbelianGroup G>
std::optional<std::vector<std::pair<element_t<G>, element_t<G>>>> build_pairing(const Matching<G>& f,
                                                                                   const Matching<G>& g) {
  if (f.domain != g.domain || f.codomain != g.codomain)
    throw Error(ErrorCode::invalid_pair, "matchings have different domain or codomain");
  auto pf = profile(f);
  auto pg = profile(g);
  if (!profiles_equal(pf, pg)) return std::nullopt;
  std::vector<std::pair<element_t<G>, element_t<G>>> phi;
  phi.reserve(f.size());
  for (const auto& [x, fiber] : pf.fibers) {
    const auto& target = pg.fibers.at(x);
    for (std::size_t i = 0; i < fiber.size(); ++i) phi.emplace_back(fiber[i], target[i]);
  }
  std::sort(phi.begin(), phi.end());
  return phi;
}

namespace detail {

/// phi is a bijection of A onto itself.
template <class E>
bool is_permutation_of(const std::vector<std::pair<E, E>>& phi, const std::vector<E>& A) {
  if (phi.size() != A.size()) return false;
  std::vector<E> keys, values;
  for (const auto& [x, y] : phi) {
    keys.push_back(x);
    values.push_back(y);
  }
  std::sort(keys.begin(), keys.end());
  std::sort(values.begin(), values.end());
  return keys == A && values == A;
}

template <class E>
const E* lookup(const std::vector<std::pair<E, E>>& map, const E& x) {
  for (const auto& [a, b] : map)
    if (a == x) return &b;
  return nullptr;
}

}  // namespace detail

/// a + f(a) = phi(a) + g(phi(a)) for every a, with phi a bijection of A.
template <AbelianGroup G>
bool verify_pairing(const Matching<G>& f, const Matching<G>& g,
                    const std::vector<std::pair<element_t<G>, element_t<G>>>& phi) {
  if (f.domain != g.domain) return false;
  if (!detail::is_permutation_of(phi, f.domain)) return false;
  const auto& grp = f.group;
  for (const auto& [a, b] : phi)
    if (grp.add(a, f(a)) != grp.add(b, g(b))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Claims re-derivation

template <AbelianGroup G>
std::optional<Matching<G>> try_matching(const G& grp, const std::vector<element_t<G>>& A,
                                        const std::vector<element_t<G>>& B,
                                        const std::vector<std::pair<element_t<G>, element_t<G>>>& map) {
  try {
    return make_matching(grp, A, B, map);
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace detail {

template <AbelianGroup G>
std::vector<element_t<G>> sums_of(const G& grp, const std::vector<std::pair<element_t<G>, element_t<G>>>& map) {
  std::vector<element_t<G>> s;
  for (const auto& [a, b] : map) s.push_back(grp.add(a, b));
  std::sort(s.begin(), s.end());
  return s;
}

template <class E>
std::vector<std::pair<E, E>> sorted_map(std::vector<std::pair<E, E>> m) {
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace detail

/// Membership predicate of the infinite domain a window witness is cut from.
template <class E>
using DomainPredicate = std::function<bool(const E&)>;

/// Window semantics: each map must be injective on the window, its sums must
/// avoid the whole infinite domain, and phi is a partial injection of the
/// window on which the pairing identity is required.
template <AbelianGroup G>
Claims derive_window_claims(const GroupCertificate<G>& c, const DomainPredicate<element_t<G>>& in_domain) {
  using E = element_t<G>;
  Claims cl;
  auto A = c.A;
  std::sort(A.begin(), A.end());
  const bool domain_ok = std::adjacent_find(A.begin(), A.end()) == A.end() && !A.empty() &&
                         std::all_of(A.begin(), A.end(), in_domain);
  auto map_ok = [&](const typename GroupCertificate<G>::Map& m) {
    if (!domain_ok || m.size() != A.size()) return false;
    auto sm = detail::sorted_map(m);
    std::vector<E> images;
    for (std::size_t i = 0; i < sm.size(); ++i) {
      if (sm[i].first != A[i]) return false;
      images.push_back(sm[i].second);
      const auto s = c.carrier.add(sm[i].first, sm[i].second);
      if (in_domain(s) || set_contains<E>(A, s)) return false;
    }
    std::sort(images.begin(), images.end());
    return std::adjacent_find(images.begin(), images.end()) == images.end();
  };
  cl.is_matching_f = map_ok(c.f);
  cl.is_matching_g = map_ok(c.g);
  cl.f_ne_g = detail::sorted_map(c.f) != detail::sorted_map(c.g);
  if (c.phi && cl.is_matching_f && cl.is_matching_g && !c.phi->empty()) {
    const auto& phi = *c.phi;
    std::vector<E> keys, values, lhs, rhs;
    bool identity = true;
    for (const auto& [a, b] : phi) {
      keys.push_back(a);
      values.push_back(b);
      const E* fa = detail::lookup(c.f, a);
      const E* gb = detail::lookup(c.g, b);
      if (fa == nullptr || gb == nullptr) {
        identity = false;
        break;
      }
      lhs.push_back(c.carrier.add(a, *fa));
      rhs.push_back(c.carrier.add(b, *gb));
      if (lhs.back() != rhs.back()) identity = false;
    }
    std::sort(keys.begin(), keys.end());
    std::sort(values.begin(), values.end());
    const bool injective = std::adjacent_find(keys.begin(), keys.end()) == keys.end() &&
                           std::adjacent_find(values.begin(), values.end()) == values.end();
    cl.pairing_identity_holds = identity && injective;
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    cl.profiles_equal = identity && lhs == rhs;
  }
  return cl;
}

/// Claims for finite-pair certificates (everything except windows).
template <AbelianGroup G>
Claims derive_pair_claims(const GroupCertificate<G>& c) {
  Claims cl;
  std::optional<Matching<G>> f, g;
  try {
    f = try_matching(c.carrier, c.A, c.B, c.f);
    g = try_matching(c.carrier, c.A, c.B, c.g);
  } catch (const Error&) {
  }
  cl.is_matching_f = f.has_value();
  cl.is_matching_g = g.has_value();
  cl.f_ne_g = detail::sorted_map(c.f) != detail::sorted_map(c.g);
  if (f && g) {
    cl.profiles_equal = profiles_equal(profile(*f), profile(*g));
    cl.pairing_identity_holds = c.phi.has_value() && verify_pairing(*f, *g, *c.phi);
  }
  return cl;
}

// ---------------------------------------------------------------------------
// Window witnesses for torsion-free carriers

/// Infinite-order models. even_integers: G = Z, x = 1, domain 2Z with
/// f(a) = a+1, g(a) = a-3. rational_even: domain 2Z inside Q with
/// f(a) = a+1, g(a) = a+5. dyadic_sixfold: G = Z[1/2] (so 2G = G),
/// domain 6G with f(a) = a+1, g(a) = a+7.
enum class WindowModel { even_integers, rational_even, dyadic_sixfold };

constexpr std::string_view to_string(WindowModel m) {
  switch (m) {
    case WindowModel::even_integers: return "even-integers";
    case WindowModel::rational_even: return "rational-even";
    case WindowModel::dyadic_sixfold: return "dyadic-sixfold";
  }
  return "?";
}

inline std::optional<WindowModel> parse_window_model(std::string_view s) {
  for (auto m : {WindowModel::even_integers, WindowModel::rational_even, WindowModel::dyadic_sixfold})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

inline WindowModel window_model_for(CarrierKind k) {
  switch (k) {
    case CarrierKind::integer: return WindowModel::even_integers;
    case CarrierKind::rational: return WindowModel::rational_even;
    case CarrierKind::dyadic: return WindowModel::dyadic_sixfold;
    case CarrierKind::finite: break;
  }
  throw Error(ErrorCode::invalid_carrier, "window witnesses live on torsion-free carriers");
}

inline bool in_even_integers(const Integer& x) { return !boost::multiprecision::bit_test(x, 0); }

inline bool in_even_rational_integers(const Rational& x) {
  return boost::multiprecision::denominator(x) == 1 && !boost::multiprecision::bit_test(boost::multiprecision::numerator(x), 0);
}

/// x in 6·Z[1/2] iff 3 divides the canonical numerator.
inline bool in_dyadic_sixfold(const Dyadic& x) { return x.numerator() % 3 == 0; }

struct WindowReport {
  std::size_t interior_points = 0;
  std::size_t violations = 0;
};

namespace detail {

template <AbelianGroup G>
GroupCertificate<G> build_window(const G& grp, WindowModel model, std::int64_t window, std::int64_t step,
                                 std::int64_t f_shift, std::int64_t g_shift, std::int64_t phi_shift,
                                 const std::function<element_t<G>(std::int64_t)>& embed) {
  if (window < 8) throw Error(ErrorCode::invalid_window, "window must be at least 8");
  GroupCertificate<G> c{.kind = WitnessKind::window, .carrier = grp,
                        .A = {}, .B = {}, .f = {}, .g = {}, .phi = {}, .claims = {}, .generator = {}};
  c.generator.variant = std::string(to_string(model));
  c.generator.values = {{"window", window}, {"step", step}, {"f_shift", f_shift}, {"g_shift", g_shift},
                        {"phi_shift", phi_shift}};
  const std::int64_t lo = -(window / step) * step;
  std::vector<std::int64_t> points;
  for (std::int64_t a = lo; a <= window; a += step) points.push_back(a);
  c.phi.emplace();
  for (auto a : points) {
    c.A.push_back(embed(a));
    c.f.emplace_back(embed(a), embed(a + f_shift));
    c.g.emplace_back(embed(a), embed(a + g_shift));
    c.B.push_back(embed(a + f_shift));
    const auto b = a + phi_shift;
    if (b >= lo && b <= window) c.phi->emplace_back(embed(a), embed(b));
  }
  std::sort(c.A.begin(), c.A.end());
  std::sort(c.B.begin(), c.B.end());
  if (c.phi->empty()) throw Error(ErrorCode::invalid_window, "window has an empty interior");
  return c;
}

}  // namespace detail

inline GroupCertificate<IntegerGroup> window_witness_integers(std::int64_t window) {
  auto c = detail::build_window<IntegerGroup>(IntegerGroup{}, WindowModel::even_integers, window, 2, 1, -3, 2,
                                              [](std::int64_t v) { return Integer(v); });
  c.claims = derive_window_claims<IntegerGroup>(c, in_even_integers);
  return c;
}

inline GroupCertificate<RationalGroup> window_witness_rationals(std::int64_t window) {
  auto c = detail::build_window<RationalGroup>(RationalGroup{}, WindowModel::rational_even, window, 2, 1, 5, -2,
                                               [](std::int64_t v) { return Rational(v); });
  c.claims = derive_window_claims<RationalGroup>(c, in_even_rational_integers);
  return c;
}

/// Domain points are 6t for t in (1/2)Z, i.e. the multiples of 3.
inline GroupCertificate<DyadicGroup> window_witness_dyadic(std::int64_t window) {
  auto c = detail::build_window<DyadicGroup>(DyadicGroup{}, WindowModel::dyadic_sixfold, window, 3, 1, 7, -3,
                                             [](std::int64_t v) { return Dyadic(Integer(v)); });
  c.claims = derive_window_claims<DyadicGroup>(c, in_dyadic_sixfold);
  return c;
}

inline AnyCertificate window_witness(WindowModel model, std::int64_t window) {
  switch (model) {
    case WindowModel::even_integers: return window_witness_integers(window);
    case WindowModel::rational_even: return window_witness_rationals(window);
    case WindowModel::dyadic_sixfold: return window_witness_dyadic(window);
  }
  throw Error(ErrorCode::invalid_argument, "unknown window model");
}

/// Counts pairing-identity violations over the phi-matched interior.
template <AbelianGroup G>
WindowReport check_window(const GroupCertificate<G>& c) {
  WindowReport r;
  if (!c.phi) return r;
  for (const auto& [a, b] : *c.phi) {
    ++r.interior_points;
    const auto* fa = detail::lookup(c.f, a);
    const auto* gb = detail::lookup(c.g, b);
    if (fa == nullptr || gb == nullptr || c.carrier.add(a, *fa) != c.carrier.add(b, *gb)) ++r.violations;
  }
  return r;
}

template <AbelianGroup G>
Claims derive_claims(const GroupCertificate<G>& c) {
  if (c.kind != WitnessKind::window) return derive_pair_claims(c);
  if constexpr (std::same_as<G, IntegerGroup>) {
    return derive_window_claims<G>(c, in_even_integers);
  } else if constexpr (std::same_as<G, RationalGroup>) {
    return derive_window_claims<G>(c, in_even_rational_integers);
  } else if constexpr (std::same_as<G, DyadicGroup>) {
    return derive_window_claims<G>(c, in_dyadic_sixfold);
  } else {
    return Claims{};
  }
}

// ---------------------------------------------------------------------------
// Finite-pair certificates

template <AbelianGroup G>
GroupCertificate<G> certify_pair(WitnessKind kind, const Matching<G>& f, const Matching<G>& g,
                                 GeneratorParams generator) {
  GroupCertificate<G> c{.kind = kind, .carrier = f.group,
                        .A = {}, .B = {}, .f = {}, .g = {}, .phi = {}, .claims = {}, .generator = {}};
  c.A = f.domain;
  c.B = f.codomain;
  c.f = f.pairs;
  c.g = g.pairs;
  c.phi = build_pairing(f, g);
  c.generator = std::move(generator);
  c.claims = derive_pair_claims(c);
  return c;
}

inline void require_prime_above_five(std::uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::invalid_argument, std::to_string(p) + " is not prime");
  if (p <= 5) throw Error(ErrorCode::construction_unavailable, "the construction needs a prime p > 5");
}

/// Multiplier pair for the quadratic-residue witness: the lexicographically
/// smallest a < b with a, b residues and a+1, b+1 non-residues.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> qr_multipliers(std::uint64_t p) {
  std::vector<std::uint64_t> ok;
  for (std::uint64_t a = 1; a + 1 < p && ok.size() < 2; ++a)
    if (legendre(static_cast<std::int64_t>(a), p) == 1 && legendre(static_cast<std::int64_t>(a + 1), p) == -1)
      ok.push_back(a);
  if (ok.size() < 2) return std::nullopt;
  return std::pair{ok[0], ok[1]};
}

/// A = nonzero squares mod p, f(s) = a·s and g(s) = b·s. Each sum (1+a)s is a
/// non-residue, hence outside A.
inline GroupCertificate<FiniteGroup> qr_witness(std::uint64_t p) {
  require_prime_above_five(p);
  auto ab = qr_multipliers(p);
  if (!ab) throw Error(ErrorCode::construction_unavailable, "no multiplier pair modulo " + std::to_string(p));
  const auto [a, b] = *ab;
  FiniteGroup zp({p});
  std::vector<FiniteElement> squares;
  for (std::uint64_t n = 1; n < p; ++n) squares.push_back({n * n % p});
  squares = [&] {
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    return squares;
  }();
  std::vector<std::pair<FiniteElement, FiniteElement>> fm, gm;
  for (auto s : squares) {
    fm.emplace_back(s, FiniteElement{a * s.code % p});
    gm.emplace_back(s, FiniteElement{b * s.code % p});
  }
  auto f = make_matching(zp, squares, squares, fm);
  auto g = make_matching(zp, squares, squares, gm);
  GeneratorParams gen{{{"p", static_cast<std::int64_t>(p)}, {"a", static_cast<std::int64_t>(a)},
                       {"b", static_cast<std::int64_t>(b)}},
                      "quadratic-residues"};
  auto c = certify_pair(WitnessKind::qr, f, g, std::move(gen));
  if (!c.claims.all()) throw Error(ErrorCode::construction_unavailable, "quadratic-residue witness failed validation");
  return c;
}

struct CycleWitness {
  GroupCertificate<FiniteGroup> certificate;
  std::vector<FiniteElement> excluded;  // every sum a + f(a) lies here
  std::string family;
};

namespace detail {

/// Matching A -> A on Z_p assembled from cycles given as residues.
inline std::optional<Matching<FiniteGroup>> from_cycles(const FiniteGroup& zp,
                                                        const std::vector<std::vector<std::int64_t>>& cycles) {
  std::vector<FiniteElement> A;
  std::vector<std::pair<FiniteElement, FiniteElement>> map;
  for (const auto& cyc : cycles)
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      A.push_back(zp.element(cyc[i]));
      map.emplace_back(zp.element(cyc[i]), zp.element(cyc[(i + 1) % cyc.size()]));
    }
  std::sort(A.begin(), A.end());
  if (std::adjacent_find(A.begin(), A.end()) != A.end()) return std::nullopt;  // cycles collide
  return try_matching(zp, A, A, map);
}

}  // namespace detail

/// Distinct matchings f and f^{-1} on a k-subset of Z_p, 2 < k < p-2.
/// Even k: A = Z_p \ {0, 1, p-1} with transpositions (j, p-j), j >= 4, and the
/// 4-cycle (3, p-3, 2, p-2). Odd k >= 5: A = Z_p \ {0, 4, p-4, p-1} with
/// transpositions from j = 5 and the 5-cycle (3, p-3, 2, p-2, 1). k = 3 uses
/// the 3-cycle (1 2 4). Smaller orders drop transpositions in increasing j.
inline CycleWitness cycle_witness(std::uint64_t p, std::uint64_t k, Budget budget = Budget{}) {
  require_prime_above_five(p);
  if (k <= 2 || k + 2 >= p) throw Error(ErrorCode::invalid_order, "order must satisfy 2 < k < p-2");
  const auto P = static_cast<std::int64_t>(p);
  const auto K = static_cast<std::int64_t>(k);
  FiniteGroup zp({p});

  std::vector<std::vector<std::int64_t>> cycles;
  std::vector<std::int64_t> excluded;
  std::string family;
  if (k == 3) {
    family = "three-cycle";
    cycles = {{1, 2, 4}};
    excluded = {3, 5, 6};
  } else if (k % 2 == 0) {
    family = "even";
    const auto drop = (P - 3 - K) / 2;
    for (std::int64_t j = 4 + drop; j <= (P - 1) / 2; ++j) cycles.push_back({j, P - j});
    cycles.push_back({3, P - 3, 2, P - 2});
    excluded = {0, 1, P - 1};
  } else {
    family = "odd";
    const auto drop = (P - 4 - K) / 2;
    for (std::int64_t j = 5 + drop; j <= (P - 1) / 2; ++j) cycles.push_back({j, P - j});
    cycles.push_back({3, P - 3, 2, P - 2, 1});
    excluded = {0, 4, P - 4, P - 1};
  }

  GeneratorParams gen{{{"p", P}, {"k", K}}, family};
  std::optional<Matching<FiniteGroup>> f = detail::from_cycles(zp, cycles);
  if (f && f->size() == k) {
    auto c = certify_pair(WitnessKind::cycle, *f, invert(*f), gen);
    std::vector<FiniteElement> ex;
    for (auto e : excluded) ex.push_back(zp.element(e));
    ex = canonical_set(std::move(ex));
    const bool sums_excluded = std::all_of(c.f.begin(), c.f.end(), [&](const auto& pr) {
      return set_contains<FiniteElement>(ex, zp.add(pr.first, pr.second));
    });
    if (c.claims.all() && sums_excluded) return {std::move(c), std::move(ex), family};
  }

  // Degenerate closed form: fall back to an exhaustive search at this order.
  auto found = fails_at_order(zp, k, budget);
  if (found.status != SearchStatus::found)
    throw Error(ErrorCode::construction_unavailable,
                "no cycle witness for p=" + std::to_string(p) + ", k=" + std::to_string(k));
  gen.variant = "search";
  auto c = certify_pair(WitnessKind::cycle, found.witness->f, found.witness->g, gen);
  std::vector<FiniteElement> sums;
  for (std::size_t i = 0; i < found.witness->f.size(); ++i) sums.push_back(found.witness->f.sum_at(i));
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  return {std::move(c), std::move(sums), "search"};
}

struct InvolutionReport {
  bool ok = true;
  std::size_t subsets = 0;
  std::size_t matchings = 0;
  std::optional<Matching<FiniteGroup>> counterexample;
};

/// Every matching f: A -> A with A a (p-2)-subset of Z_p \ {0} has f∘f = id.
inline InvolutionReport involution_check(std::uint64_t p, Budget budget = Budget{}) {
  if (!is_prime(p) || p < 5) throw Error(ErrorCode::invalid_argument, "involution check needs a prime p >= 5");
  FiniteGroup zp({p});
  InvolutionReport r;
  for (std::uint64_t skip = 1; skip < p && r.ok; ++skip) {
    std::vector<FiniteElement> A;
    for (std::uint64_t x = 1; x < p; ++x)
      if (x != skip) A.push_back({x});
    ++r.subsets;
    PairGraph<FiniteGroup> graph(zp, A, A);
    auto end = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t> asg) {
      ++r.matchings;
      for (std::size_t i = 0; i < asg.size(); ++i)
        if (asg[asg[i]] != i) {
          r.ok = false;
          r.counterexample = graph.to_matching(asg);
          return false;
        }
      return true;
    });
    if (end == EnumerationEnd::budget_exhausted) throw Error(ErrorCode::budget_exceeded, "involution check");
  }
  return r;
}

struct UniqueMatchingReport {
  bool ok = false;
  std::size_t matchings = 0;
  bool is_negation = false;
};

/// Z_p \ {0} -> itself admits exactly one matching, a -> -a.
inline UniqueMatchingReport unique_matching_check(std::uint64_t p, Budget budget = Budget{}) {
  if (!is_prime(p) || p < 3) throw Error(ErrorCode::invalid_argument, "uniqueness check needs an odd prime");
  FiniteGroup zp({p});
  auto all = zp.elements();
  std::vector<FiniteElement> A(all.begin() + 1, all.end());
  UniqueMatchingReport r;
  auto ms = enumerate_matchings(zp, A, A, budget);
  r.matchings = ms.size();
  if (ms.size() == 1)
    r.is_negation = std::all_of(ms[0].pairs.begin(), ms[0].pairs.end(),
                                [&](const auto& pr) { return pr.second == zp.neg(pr.first); });
  r.ok = r.matchings == 1 && r.is_negation;
  return r;
}

/// Certificate for the first failure witness at order m in a finite group.
inline std::optional<GroupCertificate<FiniteGroup>> failure_certificate(const FiniteGroup& g, std::size_t m,
                                                                        Budget budget, SearchStatus& status) {
  auto s = fails_at_order(g, m, budget);
  status = s.status;
  if (!s.witness) return std::nullopt;
  return certify_pair(WitnessKind::failure, s.witness->f, s.witness->g,
                      GeneratorParams{{{"order", static_cast<std::int64_t>(m)}}, "search"});
}

}  // namespace amatch
