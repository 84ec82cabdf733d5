#pragma once

// Desk-scale verification suites and the run report they produce.
//
// Each check is deterministic given the seed; sampled checks draw from
// std::mt19937_64 and reduce with %, so the stream does not depend on the
// standard library's distributions.

#include <json.hpp>

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "amatch/certificate.hpp"
#include "amatch/constructions.hpp"
#include "amatch/linear.hpp"
#include "amatch/matching.hpp"

namespace amatch {

enum class CheckStatus { pass, fail, unknown };

constexpr std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<CheckStatus> parse_check_status(std::string_view s) {
  for (auto c : {CheckStatus::pass, CheckStatus::fail, CheckStatus::unknown})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

struct CheckRecord {
  std::string id;
  Json params = Json::object();
  CheckStatus status = CheckStatus::unknown;
  Json counters = Json::object();
  std::string detail;
  std::optional<double> elapsed_ms;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct RunReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t max_p = 0;
  std::vector<CheckRecord> checks;

  /// pass iff every check passes; fail if any fails; unknown otherwise.
  CheckStatus overall() const {
    bool unknown = false;
    for (const auto& c : checks) {
      if (c.status == CheckStatus::fail) return CheckStatus::fail;
      if (c.status == CheckStatus::unknown) unknown = true;
    }
    return unknown ? CheckStatus::unknown : CheckStatus::pass;
  }

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline Json to_json(const RunReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json j;
    j["id"] = c.id;
    j["params"] = c.params;
    j["status"] = std::string(to_string(c.status));
    j["counters"] = c.counters;
    j["detail"] = c.detail;
    if (c.elapsed_ms) j["elapsed_ms"] = *c.elapsed_ms;
    checks.push_back(std::move(j));
  }
  Json j;
  j["schema_version"] = schema_version;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["max_p"] = r.max_p;
  j["checks"] = std::move(checks);
  j["overall"] = std::string(to_string(r.overall()));
  return j;
}

inline RunReport report_from_json(const Json& j) {
  return detail::guarded([&] {
    RunReport r;
    r.suite = detail::field(j, "suite").get<std::string>();
    r.seed = detail::field(j, "seed").get<std::uint64_t>();
    r.max_p = detail::field(j, "max_p").get<std::uint64_t>();
    for (const auto& c : detail::field(j, "checks")) {
      CheckRecord rec;
      rec.id = detail::field(c, "id").get<std::string>();
      rec.params = detail::field(c, "params");
      auto st = parse_check_status(detail::field(c, "status").get<std::string>());
      if (!st) detail::malformed("bad check status");
      rec.status = *st;
      rec.counters = detail::field(c, "counters");
      rec.detail = detail::field(c, "detail").get<std::string>();
      if (c.contains("elapsed_ms")) rec.elapsed_ms = c.at("elapsed_ms").get<double>();
      r.checks.push_back(std::move(rec));
    }
    return r;
  });
}

// ---------------------------------------------------------------------------
// Checks

namespace suite {

/// Ceiling on p for the exhaustive group checks.
inline constexpr std::uint64_t exhaustive_ceiling = 13;

inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = lo; p <= hi; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

inline CheckRecord record(std::string id) {
  CheckRecord r;
  r.id = std::move(id);
  return r;
}

inline CheckStatus status_of(bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; }

inline CheckRecord qr_witnesses() {
  auto r = record("qr-witness");
  const auto primes = primes_between(7, 101);
  r.params = Json{{"primes", primes}};
  bool ok = true;
  for (auto p : primes) {
    const auto c = qr_witness(p);
    const bool good = c.A.size() == (p - 1) / 2 && c.claims.all() && check_certificate(to_json(c)).pass;
    if (!good && ok) r.detail = "p=" + std::to_string(p);
    ok = ok && good;
  }
  r.status = status_of(ok);
  r.counters["primes"] = primes.size();
  return r;
}

inline CheckRecord cycle_witnesses() {
  auto r = record("cycle-witness");
  const std::vector<std::uint64_t> primes{7, 11, 13, 17};
  r.params = Json{{"primes", primes}};
  bool ok = true;
  std::size_t count = 0;
  for (auto p : primes) {
    FiniteGroup zp({p});
    for (std::uint64_t k = 3; k + 2 < p; ++k) {
      const auto w = cycle_witness(p, k);
      const auto& c = w.certificate;
      auto f = try_matching(zp, c.A, c.B, c.f);
      bool good = f.has_value() && c.claims.all() && check_certificate(to_json(c)).pass;
      if (f) {
        good = good && !(invert(*f) == *f);
        for (const auto& [a, b] : c.f) good = good && set_contains<FiniteElement>(w.excluded, zp.add(a, b));
      }
      if (!good && ok) r.detail = "p=" + std::to_string(p) + " k=" + std::to_string(k);
      ok = ok && good;
      ++count;
    }
  }
  r.status = status_of(ok);
  r.counters["witnesses"] = count;
  return r;
}

inline CheckRecord involutions(std::uint64_t max_p) {
  auto r = record("involution");
  const auto primes = primes_between(5, std::min<std::uint64_t>(max_p, 11));
  r.params = Json{{"primes", primes}};
  bool ok = true;
  std::size_t matchings = 0;
  for (auto p : primes) {
    const auto rep = involution_check(p);
    matchings += rep.matchings;
    if (!rep.ok && ok) r.detail = "p=" + std::to_string(p);
    ok = ok && rep.ok && rep.subsets == p - 1;
  }
  r.status = status_of(ok);
  r.counters["matchings"] = matchings;
  return r;
}

inline CheckRecord unique_matchings(std::uint64_t max_p) {
  auto r = record("unique-matching");
  const auto primes = primes_between(3, max_p);
  r.params = Json{{"primes", primes}};
  bool ok = true;
  for (auto p : primes) {
    const auto rep = unique_matching_check(p);
    if (!rep.ok && ok) r.detail = "p=" + std::to_string(p);
    ok = ok && rep.ok;
  }
  r.status = status_of(ok);
  return r;
}

inline CheckRecord matching_property() {
  auto r = record("matching-property");
  const std::vector<std::vector<std::uint64_t>> failing{{4}, {6}, {8}, {9}, {2, 2}};
  const std::vector<std::vector<std::uint64_t>> passing{{2}, {3}, {5}, {7}};
  r.params = Json{{"counterexample_expected", Json::array()}, {"property_expected", Json::array()}};
  bool ok = true;
  std::uint64_t pairs = 0;
  for (const auto& f : failing) {
    FiniteGroup g(f);
    r.params["counterexample_expected"].push_back(g.descriptor());
    const auto res = matching_property_upto(g, 3);
    pairs += res.pairs_checked;
    if (res.pass && ok) r.detail = g.descriptor() + " has no counterexample";
    ok = ok && !res.pass;
  }
  for (const auto& f : passing) {
    FiniteGroup g(f);
    r.params["property_expected"].push_back(g.descriptor());
    const auto res = matching_property_upto(g, g.size() - 1);
    pairs += res.pairs_checked;
    if (!res.pass && ok) r.detail = g.descriptor() + " has a counterexample";
    ok = ok && res.pass;
  }
  r.status = status_of(ok);
  r.counters["pairs"] = pairs;
  return r;
}

inline CheckRecord failure_orders() {
  auto r = record("fails-at-order");
  r.params = Json{{"never", {"z:2", "z:3", "z:5"}}, {"z:7", {3, 4}}};
  bool ok = true;
  bool unknown = false;
  std::uint64_t nodes = 0;
  for (std::uint64_t n : {2, 3, 5}) {
    FiniteGroup g({n});
    for (std::size_t m = 1; m <= n; ++m) {
      const auto s = fails_at_order(g, m);
      nodes += s.nodes;
      unknown = unknown || s.status == SearchStatus::unknown;
      if (s.status == SearchStatus::found && ok) r.detail = g.descriptor() + " fails at order " + std::to_string(m);
      ok = ok && s.status != SearchStatus::found;
    }
  }
  FiniteGroup z7({7});
  for (std::size_t m : {3, 4}) {
    const auto s = fails_at_order(z7, m);
    nodes += s.nodes;
    const bool good = s.status == SearchStatus::found && s.witness && !(s.witness->f == s.witness->g) &&
                      profiles_equal(profile(s.witness->f), profile(s.witness->g));
    if (!good && ok) r.detail = "no witness for z:7 at order " + std::to_string(m);
    ok = ok && good;
  }
  r.status = ok ? (unknown ? CheckStatus::unknown : CheckStatus::pass) : CheckStatus::fail;
  r.counters["nodes"] = nodes;
  return r;
}

inline CheckRecord integer_acyclic(std::uint64_t seed) {
  auto r = record("integer-acyclic");
  r.params = Json{{"pairs", 200}, {"range", {-50, 50}}, {"max_size", 6}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  IntegerGroup zz;
  bool ok = true;
  std::uint64_t matchings = 0;
  auto draw = [&](std::size_t k, bool avoid_zero) {
    std::vector<Integer> s;
    while (s.size() < k) {
      const auto v = static_cast<std::int64_t>(rng() % 101) - 50;
      if (avoid_zero && v == 0) continue;
      if (std::find(s.begin(), s.end(), Integer(v)) == s.end()) s.push_back(Integer(v));
    }
    std::sort(s.begin(), s.end());
    return s;
  };
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng() % 6;
    const auto A = draw(k, false);
    const auto B = draw(k, true);
    const auto res = find_acyclic_matching(zz, A, B);
    matchings += res.matchings_seen;
    bool good = res.status == SearchStatus::found && res.matching.has_value();
    if (good) {
      // the profile class of the returned matching is a singleton
      std::size_t tied = 0;
      const auto pf = profile(*res.matching);
      for (const auto& g : enumerate_matchings(zz, A, B))
        if (profiles_equal(profile(g), pf)) ++tied;
      good = tied == 1;
    }
    if (!good && ok) r.detail = "pair #" + std::to_string(t);
    ok = ok && good;
  }
  r.status = status_of(ok);
  r.counters["matchings"] = matchings;
  return r;
}

inline CheckRecord windows() {
  auto r = record("window-witness");
  r.params = Json{{"window", 200}, {"models", Json::array()}};
  bool ok = true;
  std::size_t points = 0;
  for (auto model : {WindowModel::even_integers, WindowModel::rational_even, WindowModel::dyadic_sixfold}) {
    r.params["models"].push_back(std::string(to_string(model)));
    const auto c = window_witness(model, 200);
    const auto rep = std::visit([](const auto& x) { return check_window(x); }, c);
    const bool claims = std::visit([](const auto& x) { return derive_claims(x).all(); }, c);
    points += rep.interior_points;
    const bool good = rep.violations == 0 && rep.interior_points > 0 && claims;
    if (!good && ok) r.detail = std::string(to_string(model));
    ok = ok && good;
  }
  r.status = status_of(ok);
  r.counters["interior_points"] = points;
  return r;
}

inline CheckRecord pairing_roundtrips(std::uint64_t seed) {
  auto r = record("pairing-roundtrip");
  r.params = Json{{"pairs", 500}, {"groups", {"z:11", "z:13"}}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  bool ok = true;
  std::size_t built = 0, converse = 0;
  for (std::uint64_t p : {11, 13}) {
    FiniteGroup zp({p});
    const auto all = zp.elements();
    std::size_t done = 0;
    while (done < 250) {
      auto pool = all;
      std::shuffle(pool.begin(), pool.end(), rng);
      const std::size_t k = 3 + rng() % 4;
      std::vector<FiniteElement> A(pool.begin(), pool.begin() + static_cast<long>(k));
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<FiniteElement> B(pool.begin(), pool.begin() + static_cast<long>(k));
      const auto ms = enumerate_matchings(zp, A, B);
      if (ms.empty()) continue;
      // f, then g drawn from f's profile class
      const auto& f = ms[rng() % ms.size()];
      std::vector<const Matching<FiniteGroup>*> tied;
      const auto pf = profile(f);
      for (const auto& g : ms)
        if (profiles_equal(profile(g), pf)) tied.push_back(&g);
      const auto& g = *tied[rng() % tied.size()];
      const auto phi = build_pairing(f, g);
      const bool good = phi.has_value() && verify_pairing(f, g, *phi);
      ++built;
      // converse on a random bijection against a random matching
      const auto& h = ms[rng() % ms.size()];
      auto image = f.domain;
      std::shuffle(image.begin(), image.end(), rng);
      std::vector<std::pair<FiniteElement, FiniteElement>> rnd;
      for (std::size_t i = 0; i < image.size(); ++i) rnd.emplace_back(f.domain[i], image[i]);
      bool conv = true;
      if (verify_pairing(f, h, rnd)) {
        ++converse;
        conv = profiles_equal(profile(f), profile(h));
      }
      if ((!good || !conv) && ok) r.detail = "z:" + std::to_string(p) + " pair #" + std::to_string(done);
      ok = ok && good && conv;
      ++done;
    }
  }
  r.status = status_of(ok);
  r.counters["pairs"] = built;
  r.counters["verified_random_bijections"] = converse;
  return r;
}

inline CheckRecord strong_matching_criterion(std::uint64_t seed) {
  auto r = record("strong-matching-criterion");
  r.params = Json{{"towers", Json::array()}, {"max_dim", 2}, {"sampled_isomorphisms", 20}, {"seed", seed}};
  std::mt19937_64 rng(seed);
  bool ok = true;
  std::size_t pairs = 0, sampled = 0;
  for (const auto& t : {FiniteTower(2, 3), FiniteTower(3, 2)}) {
    r.params["towers"].push_back(t.descriptor());
    const auto& k = t.scalars();
    for (std::size_t d = 1; d <= 2; ++d) {
      std::vector<Subspace<PrimeField>> subs;
      for_each_subspace(k, t.n(), d, [&](const Subspace<PrimeField>& s) {
        subs.push_back(s);
        return true;
      });
      for (const auto& A : subs)
        for (const auto& B : subs) {
          ++pairs;
          const bool criterion = strong_matching_exists(t, A, B);
          bool some = false;
          for_each_invertible_matrix(k, d, [&](const std::vector<Vec<PrimeField>>& M) {
            const auto phi = map_from_matrix(k, A, B, M);
            some = is_strong_matching(t, phi, MatchMode::exhaustive(), Budget()).strong == Decision::yes;
            return !some;
          });
          bool good = criterion == some;
          if (criterion) {
            for (int s = 0; s < 20; ++s) {
              std::vector<Vec<PrimeField>> M;
              do {
                M.assign(d, Vec<PrimeField>(d));
                for (auto& row : M)
                  for (auto& x : row) x = rng() % t.p();
              } while (linalg::rank(k, M) != d);
              ++sampled;
              const auto phi = map_from_matrix(k, A, B, M);
              good = good && is_strong_matching(t, phi, MatchMode::exhaustive(), Budget()).strong == Decision::yes;
            }
          }
          if (!good && ok) r.detail = t.descriptor() + " dim " + std::to_string(d);
          ok = ok && good;
        }
    }
  }
  r.status = status_of(ok);
  r.counters["subspace_pairs"] = pairs;
  r.counters["sampled_isomorphisms"] = sampled;
  return r;
}

inline CheckRecord linear_witnesses() {
  auto r = record("linear-witness");
  const std::vector<std::array<unsigned, 3>> cases{{5, 3, 1}, {7, 3, 1}, {5, 7, 1}, {5, 7, 2}};
  r.params = Json{{"cases", Json::array()}};
  bool ok = true;
  std::size_t pointwise = 0;
  for (const auto& [p, n, m] : cases) {
    r.params["cases"].push_back(Json{{"p", p}, {"n", n}, {"m", m}});
    const FiniteTower t(p, n);
    const auto w = linear_witness(t, m);
    const auto& k = t.scalars();
    bool good = intersect(k, w.A, product(t, w.A, w.A)).dim() == 0 && quad_map_equal(t, w.f, w.phi, w.h) &&
                !(w.f == w.h) && w.claims.all() && check_certificate(to_json(w)).pass;
    std::uint64_t size = 1;
    for (unsigned i = 0; i < m; ++i) size *= p;
    if (size <= 625) {
      ++pointwise;
      good = good && quad_map_equal_pointwise(t, w.f, w.phi, w.h);
    }
    if (!good && ok) r.detail = t.descriptor() + " m=" + std::to_string(m);
    ok = ok && good;
  }
  r.status = status_of(ok);
  r.counters["pointwise_checked"] = pointwise;
  return r;
}

inline CheckRecord transcendental_witnesses() {
  auto r = record("transcendental-witness");
  r.params = Json{{"m", {1, 2, 3}}};
  bool ok = true;
  for (unsigned m : {1u, 2u, 3u}) {
    const auto w = transcendental_witness(m);
    const auto& t = w.tower;
    const bool good = intersect(t.scalars(), w.A, product(t, w.A, w.A)).dim() == 0 && w.claims.all() &&
                      check_certificate(to_json(w)).pass;
    if (!good && ok) r.detail = "m=" + std::to_string(m);
    ok = ok && good;
  }
  r.status = status_of(ok);
  return r;
}

inline CheckRecord lmp_counterexamples() {
  auto r = record("lmp-counterexample");
  r.params = Json{{"towers", Json::array()}, {"budget", 10'000'000}};
  bool ok = true;
  bool unknown = false;
  std::uint64_t nodes = 0;
  for (const auto& t : {FiniteTower(2, 4), FiniteTower(3, 4)}) {
    r.params["towers"].push_back(t.descriptor());
    const auto c = lmp_counterexample_search(t, Budget(10'000'000));
    nodes += c.nodes;
    unknown = unknown || c.status == SearchStatus::unknown;
    const bool good = c.status == SearchStatus::found && check_certificate(to_json(t, c)).pass;
    if (!good && ok) r.detail = t.descriptor();
    ok = ok && good;
  }
  r.status = ok ? CheckStatus::pass : (unknown ? CheckStatus::unknown : CheckStatus::fail);
  r.counters["nodes"] = nodes;
  return r;
}

using Check = std::function<CheckRecord()>;

inline std::vector<Check> group_checks(std::uint64_t max_p, std::uint64_t seed) {
  return {qr_witnesses,
          cycle_witnesses,
          [=] { return involutions(max_p); },
          [=] { return unique_matchings(max_p); },
          matching_property,
          failure_orders,
          [=] { return integer_acyclic(seed); },
          windows,
          [=] { return pairing_roundtrips(seed); }};
}

inline std::vector<Check> linear_checks(std::uint64_t seed) {
  return {[=] { return strong_matching_criterion(seed); }, linear_witnesses, transcendental_witnesses,
          lmp_counterexamples};
}

}  // namespace suite

/// Runs "group", "linear" or "all". Elapsed times are recorded only when
/// asked for, so that default reports are byte-for-byte reproducible.
inline RunReport run_suite(const std::string& name, std::uint64_t max_p, std::uint64_t seed, bool timing = false) {
  std::vector<suite::Check> checks;
  if (name == "group" || name == "all") {
    auto g = suite::group_checks(max_p, seed);
    checks.insert(checks.end(), g.begin(), g.end());
  }
  if (name == "linear" || name == "all") {
    auto l = suite::linear_checks(seed);
    checks.insert(checks.end(), l.begin(), l.end());
  }
  if (checks.empty()) throw Error(ErrorCode::invalid_argument, "unknown suite '" + name + "'");
  RunReport report{name, seed, max_p, {}};
  for (const auto& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckRecord rec;
    try {
      rec = check();
    } catch (const Error& e) {
      rec.status = CheckStatus::fail;
      rec.detail = e.what();
    }
    if (timing)
      rec.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.checks.push_back(std::move(rec));
  }
  return report;
}

}  // namespace amatch
