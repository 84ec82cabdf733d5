#pragma once

// JSON witness certificates. A certificate carries its full payload (sets,
// maps, pairing) plus the claims it makes; checking recomputes every claim
// from the payload and never trusts the recorded flags.
//
// Requires nlohmann/json (vendor/json.hpp).

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amatch/constructions.hpp"
#include "amatch/error.hpp"
#include "amatch/field.hpp"
#include "amatch/group.hpp"
#include "amatch/linear.hpp"

namespace amatch {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

struct CheckResult {
  bool pass = false;
  std::string kind;
  std::vector<std::pair<std::string, bool>> claims;  // re-derived flags
  std::string message;
};

namespace detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorCode::malformed_certificate, what); }

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) malformed(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline std::optional<WitnessKind> parse_witness_kind(std::string_view s) {
  for (auto k : {WitnessKind::qr, WitnessKind::cycle, WitnessKind::window, WitnessKind::pairing, WitnessKind::failure})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

template <class Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::malformed_certificate) throw;
    malformed(e.what());
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Group certificates

inline Json claims_json(const Claims& c) {
  return Json{{"is_matching_f", c.is_matching_f},
              {"is_matching_g", c.is_matching_g},
              {"f_ne_g", c.f_ne_g},
              {"profiles_equal", c.profiles_equal},
              {"pairing_identity_holds", c.pairing_identity_holds}};
}

inline std::vector<std::pair<std::string, bool>> claims_list(const Claims& c) {
  return {{"is_matching_f", c.is_matching_f},
          {"is_matching_g", c.is_matching_g},
          {"f_ne_g", c.f_ne_g},
          {"profiles_equal", c.profiles_equal},
          {"pairing_identity_holds", c.pairing_identity_holds}};
}

template <AbelianGroup G>
Json to_json(const GroupCertificate<G>& c) {
  auto elems = [&](const std::vector<element_t<G>>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(c.carrier.format(x));
    return a;
  };
  auto pairs = [&](const typename GroupCertificate<G>::Map& m) {
    Json a = Json::array();
    for (const auto& [x, y] : m) a.push_back(Json::array({c.carrier.format(x), c.carrier.format(y)}));
    return a;
  };
  Json params = Json::object();
  for (const auto& [k, v] : c.generator.values) params[k] = v;
  Json j;
  j["schema_version"] = schema_version;
  j["kind"] = std::string(to_string(c.kind));
  j["carrier"] = c.carrier.descriptor();
  j["A"] = elems(c.A);
  j["B"] = elems(c.B);
  j["f"] = pairs(c.f);
  j["g"] = pairs(c.g);
  j["phi"] = c.phi ? pairs(*c.phi) : Json(nullptr);
  j["claims"] = claims_json(c.claims);
  j["generator"] = Json{{"variant", c.generator.variant}, {"params", params}};
  return j;
}

inline Json to_json(const AnyCertificate& c) {
  return std::visit([](const auto& x) { return to_json(x); }, c);
}

template <AbelianGroup G>
GroupCertificate<G> group_certificate_from_json(const G& grp, WitnessKind kind, const Json& j) {
  return detail::guarded([&] {
    auto elems = [&](const Json& a) {
      if (!a.is_array()) detail::malformed("element list expected");
      std::vector<element_t<G>> out;
      for (const auto& x : a) out.push_back(grp.parse(x.get<std::string>()));
      return out;
    };
    auto pairs = [&](const Json& a) {
      if (!a.is_array()) detail::malformed("pair list expected");
      typename GroupCertificate<G>::Map out;
      for (const auto& pr : a) {
        if (!pr.is_array() || pr.size() != 2) detail::malformed("pair expected");
        out.emplace_back(grp.parse(pr[0].get<std::string>()), grp.parse(pr[1].get<std::string>()));
      }
      return out;
    };
    GroupCertificate<G> c{.kind = kind, .carrier = grp,
                          .A = {}, .B = {}, .f = {}, .g = {}, .phi = {}, .claims = {}, .generator = {}};
    c.A = elems(detail::field(j, "A"));
    c.B = elems(detail::field(j, "B"));
    c.f = pairs(detail::field(j, "f"));
    c.g = pairs(detail::field(j, "g"));
    const auto& phi = detail::field(j, "phi");
    if (!phi.is_null()) c.phi = pairs(phi);
    const auto& cl = detail::field(j, "claims");
    c.claims.is_matching_f = detail::field(cl, "is_matching_f").get<bool>();
    c.claims.is_matching_g = detail::field(cl, "is_matching_g").get<bool>();
    c.claims.f_ne_g = detail::field(cl, "f_ne_g").get<bool>();
    c.claims.profiles_equal = detail::field(cl, "profiles_equal").get<bool>();
    c.claims.pairing_identity_holds = detail::field(cl, "pairing_identity_holds").get<bool>();
    const auto& gen = detail::field(j, "generator");
    c.generator.variant = detail::field(gen, "variant").get<std::string>();
    const Json& params = detail::field(gen, "params");
    for (auto it = params.begin(); it != params.end(); ++it)
      c.generator.values[it.key()] = it.value().template get<std::int64_t>();
    return c;
  });
}

template <AbelianGroup G>
CheckResult check_group_certificate(const GroupCertificate<G>& c) {
  CheckResult r;
  r.kind = std::string(to_string(c.kind));
  Claims derived;
  try {
    derived = derive_claims(c);
  } catch (const Error& e) {
    r.message = e.what();
  }
  r.claims = claims_list(derived);
  r.pass = derived.all() && derived == c.claims;
  if (r.message.empty()) {
    if (!derived.all())
      r.message = "a claim does not hold for the payload";
    else if (!(derived == c.claims))
      r.message = "recorded claims differ from the payload";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Linear certificates

namespace detail {

inline Json scalar_json(const PrimeField&, std::uint64_t x) { return x; }
inline Json scalar_json(const RationalField& k, const Rational& x) { return k.format(x); }

inline std::uint64_t scalar_from_json(const PrimeField& k, const Json& j) {
  if (!j.is_number_unsigned()) malformed("coefficient must be a nonnegative integer");
  const auto v = j.get<std::uint64_t>();
  if (!k.contains(v)) malformed("coefficient out of range");
  return v;
}
inline Rational scalar_from_json(const RationalField& k, const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  return k.parse(j.get<std::string>());
}

/// Coefficients least degree first; trailing zeros dropped for Q(t).
template <ScalarField F>
Json vector_json(const F& k, const Vec<F>& v, bool trim) {
  std::size_t len = v.size();
  if (trim)
    while (len > 0 && k.is_zero(v[len - 1])) --len;
  Json a = Json::array();
  for (std::size_t i = 0; i < len; ++i) a.push_back(scalar_json(k, v[i]));
  return a;
}

template <ScalarField F>
Vec<F> vector_from_json(const F& k, const Json& a, std::size_t dim) {
  if (!a.is_array()) malformed("coefficient list expected");
  if (a.size() > dim) malformed("coefficient list longer than the ambient dimension");
  Vec<F> v(dim, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = scalar_from_json(k, a[i]);
  return v;
}

template <ScalarField F>
Json rows_json(const F& k, const std::vector<Vec<F>>& rows, bool trim) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(vector_json(k, r, trim));
  return a;
}

template <ScalarField F>
std::vector<Vec<F>> rows_from_json(const F& k, const Json& a, std::size_t dim) {
  if (!a.is_array()) malformed("row list expected");
  std::vector<Vec<F>> out;
  for (const auto& r : a) out.push_back(vector_from_json(k, r, dim));
  return out;
}

template <FieldTower T>
constexpr bool trims_coordinates = std::same_as<T, RationalFunctionTower>;

template <ScalarField F>
Json linear_claims_json(const LinearClaims<F>& c) {
  return Json{{"strong_f", c.strong_f},
              {"strong_g", c.strong_h},
              {"equivalent", c.equivalent},
              {"distinct", c.distinct},
              {"scalar_multiple", c.scalar_multiple}};
}

template <ScalarField F>
std::vector<std::pair<std::string, bool>> linear_claims_list(const LinearClaims<F>& c) {
  return {{"strong_f", c.strong_f},
          {"strong_g", c.strong_h},
          {"equivalent", c.equivalent},
          {"distinct", c.distinct},
          {"scalar_multiple", c.scalar_multiple}};
}

}  // namespace detail

/// kind "linear" (finite tower) or "transcendental" (Q(t)). f, g and phi
/// list the images of the RREF basis rows of A.
template <FieldTower T>
Json to_json(const LinearWitness<T>& w) {
  const auto& k = w.tower.scalars();
  constexpr bool trim = detail::trims_coordinates<T>;
  Json params = Json::object();
  params["m"] = w.m;
  if constexpr (std::same_as<T, FiniteTower>) {
    params["p"] = w.tower.p();
    params["n"] = w.tower.n();
  }
  Json j;
  j["schema_version"] = schema_version;
  j["kind"] = std::same_as<T, FiniteTower> ? "linear" : "transcendental";
  j["carrier"] = w.tower.descriptor();
  j["A"] = detail::rows_json(k, w.A.rows(), trim);
  j["B"] = detail::rows_json(k, w.f.codomain.rows(), trim);
  j["f"] = detail::rows_json(k, w.f.images, trim);
  j["g"] = detail::rows_json(k, w.h.images, trim);
  j["phi"] = detail::rows_json(k, w.phi.images, trim);
  j["claims"] = detail::linear_claims_json(w.claims);
  j["generator"] = Json{{"variant", w.branch}, {"params", params}, {"c", k.format(w.c)}};
  return j;
}

template <FieldTower T>
CheckResult check_linear_certificate(const T& t, const Json& j) {
  using F = typename T::scalar_field;
  const auto& k = t.scalars();
  const auto dim = t.coord_dim();
  CheckResult r;
  r.kind = j.value("kind", "");
  auto [A, B, f, g, phi, recorded] = detail::guarded([&] {
    auto A = detail::rows_from_json(k, detail::field(j, "A"), dim);
    auto B = detail::rows_from_json(k, detail::field(j, "B"), dim);
    auto f = detail::rows_from_json(k, detail::field(j, "f"), dim);
    auto g = detail::rows_from_json(k, detail::field(j, "g"), dim);
    auto phi = detail::rows_from_json(k, detail::field(j, "phi"), dim);
    const auto& cl = detail::field(j, "claims");
    LinearClaims<F> rec;
    rec.strong_f = detail::field(cl, "strong_f").get<bool>();
    rec.strong_h = detail::field(cl, "strong_g").get<bool>();
    rec.equivalent = detail::field(cl, "equivalent").get<bool>();
    rec.distinct = detail::field(cl, "distinct").get<bool>();
    rec.scalar_multiple = detail::field(cl, "scalar_multiple").get<bool>();
    return std::make_tuple(A, B, f, g, phi, rec);
  });
  LinearClaims<F> derived;
  try {
    // the listed rows must already be the canonical basis the images refer to
    const auto SA = Subspace<F>::span(k, dim, A);
    const auto SB = Subspace<F>::span(k, dim, B);
    if (SA.rows() != A || SB.rows() != B) throw Error(ErrorCode::invalid_basis, "A or B is not in reduced row-echelon form");
    const auto mf = make_linear_map(k, SA, SB, f);
    const auto mg = make_linear_map(k, SA, SB, g);
    const auto mphi = make_linear_map(k, SA, SA, phi);
    derived = derive_linear_claims(t, mf, mg, mphi);
  } catch (const Error& e) {
    r.message = e.what();
  }
  r.claims = detail::linear_claims_list(derived);
  r.pass = derived.all() && derived == recorded;
  if (r.message.empty()) {
    if (!derived.all())
      r.message = "a claim does not hold for the payload";
    else if (!(derived == recorded))
      r.message = "recorded claims differ from the payload";
  }
  return r;
}

/// kind "lmp-counterexample": A, B and a basis of A matched to no basis of B.
inline Json to_json(const FiniteTower& t, const LmpCounterexample& c) {
  const auto& k = t.scalars();
  Json j;
  j["schema_version"] = schema_version;
  j["kind"] = "lmp-counterexample";
  j["carrier"] = t.descriptor();
  j["A"] = detail::rows_json(k, c.A.rows(), false);
  j["B"] = detail::rows_json(k, c.B.rows(), false);
  j["f"] = nullptr;
  j["g"] = nullptr;
  j["phi"] = nullptr;
  j["basis"] = detail::rows_json(k, c.failing_basis, false);
  j["claims"] = Json{{"equal_dimension", true}, {"one_not_in_B", true}, {"basis_unmatched", true}};
  j["generator"] = Json{{"variant", "subfield-seeded"}, {"params", Json{{"p", t.p()}, {"n", t.n()}}}};
  return j;
}

inline CheckResult check_lmp_certificate(const FiniteTower& t, const Json& j) {
  const auto& k = t.scalars();
  CheckResult r;
  r.kind = "lmp-counterexample";
  auto [A, B, basis, rec] = detail::guarded([&] {
    auto A = detail::rows_from_json(k, detail::field(j, "A"), t.n());
    auto B = detail::rows_from_json(k, detail::field(j, "B"), t.n());
    auto basis = detail::rows_from_json(k, detail::field(j, "basis"), t.n());
    const auto& cl = detail::field(j, "claims");
    std::vector<bool> rec{detail::field(cl, "equal_dimension").get<bool>(), detail::field(cl, "one_not_in_B").get<bool>(),
                          detail::field(cl, "basis_unmatched").get<bool>()};
    return std::make_tuple(A, B, basis, rec);
  });
  const auto SA = Subspace<PrimeField>::span(k, t.n(), A);
  const auto SB = Subspace<PrimeField>::span(k, t.n(), B);
  const bool equal_dim = SA.dim() == SB.dim() && SA.dim() > 0;
  const bool one_out = !contains(k, SB, t.coords(t.one()));
  bool unmatched = false;
  const bool is_basis = basis.size() == SA.dim() && linalg::rank(k, basis) == basis.size() &&
                        std::all_of(basis.begin(), basis.end(), [&](const auto& v) { return contains(k, SA, v); });
  if (equal_dim && is_basis) {
    Budget budget;
    unmatched = !find_matched_basis(t, basis, SB, budget).has_value();
  }
  r.claims = {{"equal_dimension", equal_dim}, {"one_not_in_B", one_out}, {"basis_unmatched", unmatched}};
  const std::vector<bool> derived{equal_dim, one_out, unmatched};
  r.pass = equal_dim && one_out && unmatched && derived == rec;
  if (!r.pass) r.message = is_basis ? "a claim does not hold for the payload" : "listed vectors are not a basis of A";
  return r;
}

// ---------------------------------------------------------------------------
// Dispatch

/// Re-derives every claim. Throws malformed-certificate for structural
/// problems; a well-formed certificate whose claims fail yields pass = false.
inline CheckResult check_certificate(const Json& j) {
  if (!j.is_object()) detail::malformed("certificate must be a JSON object");
  const auto& version = detail::field(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != schema_version) detail::malformed("unsupported schema_version");
  const auto kind = detail::guarded([&] { return detail::field(j, "kind").get<std::string>(); });
  const auto carrier = detail::guarded([&] { return detail::field(j, "carrier").get<std::string>(); });

  if (kind == "linear")
    return check_linear_certificate(detail::guarded([&] { return parse_finite_tower(carrier); }), j);
  if (kind == "transcendental") {
    if (carrier != "ratfun") detail::malformed("transcendental certificates live in ratfun");
    return check_linear_certificate(RationalFunctionTower{}, j);
  }
  if (kind == "lmp-counterexample")
    return check_lmp_certificate(detail::guarded([&] { return parse_finite_tower(carrier); }), j);

  const auto wk = detail::parse_witness_kind(kind);
  if (!wk) detail::malformed("unknown kind '" + kind + "'");
  const auto grp = detail::guarded([&] { return parse_group_spec(carrier); });
  return std::visit(
      [&](const auto& g) { return check_group_certificate(group_certificate_from_json(g, *wk, j)); }, grp);
}

inline CheckResult check_certificate_text(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    detail::malformed(std::string("not valid JSON: ") + e.what());
  }
  return check_certificate(j);
}

}  // namespace amatch
