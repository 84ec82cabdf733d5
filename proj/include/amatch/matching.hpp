#pragma once

// Matchings between finite subsets of an Abelian group.
//
// A matching is a bijection f: A -> B with a + f(a) outside A for every a.
// Everything here is generic over the carrier; the searches work on an
// index-level bipartite graph (PairGraph) whose edges are the admissible
// assignments, so group arithmetic is paid once per pair (a, b).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amatch/error.hpp"
#include "amatch/group.hpp"

namespace amatch {

/// Sorts and rejects duplicates.
template <class E>
std::vector<E> canonical_set(std::vector<E> s) {
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw Error(ErrorCode::invalid_argument, "set contains a repeated element");
  return s;
}

template <class E>
bool set_contains(std::span<const E> sorted, const E& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

template <AbelianGroup G>
struct Matching {
  using element_type = element_t<G>;
  using pair_type = std::pair<element_type, element_type>;

  G group;
  std::vector<element_type> domain;    // sorted
  std::vector<element_type> codomain;  // sorted
  std::vector<pair_type> pairs;        // sorted by first component; pairs[i].first == domain[i]

  std::size_t size() const noexcept { return pairs.size(); }

  const element_type& operator()(const element_type& a) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), a,
                               [](const pair_type& p, const element_type& x) { return p.first < x; });
    if (it == pairs.end() || it->first != a) throw Error(ErrorCode::invalid_argument, "element outside the domain");
    return it->second;
  }

  element_type sum_at(std::size_t i) const { return group.add(pairs[i].first, pairs[i].second); }

  friend bool operator==(const Matching& x, const Matching& y) {
    return x.domain == y.domain && x.codomain == y.codomain && x.pairs == y.pairs;
  }
};

template <class E>
struct MatchCheck {
  bool ok = true;
  std::optional<E> violation;  // first offending domain element
  std::string reason;
};

/// Validates a candidate map; throws malformed-map when it is not a function on A.
template <AbelianGroup G>
MatchCheck<element_t<G>> check_matching(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B,
                                        std::vector<std::pair<element_t<G>, element_t<G>>> map) {
  using E = element_t<G>;
  A = canonical_set(std::move(A));
  B = canonical_set(std::move(B));
  if (A.empty() || B.empty()) throw Error(ErrorCode::invalid_pair, "matching sets must be nonempty");
  std::sort(map.begin(), map.end());
  if (map.size() != A.size())
    throw Error(ErrorCode::malformed_map, "map has " + std::to_string(map.size()) + " entries for a domain of size " +
                                              std::to_string(A.size()));
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i].first != A[i]) throw Error(ErrorCode::malformed_map, "map is not a function on the domain");

  if (A.size() != B.size()) return {false, std::nullopt, "domain and codomain sizes differ"};
  std::vector<E> images;
  images.reserve(map.size());
  for (const auto& [a, b] : map) {
    if (!set_contains<E>(B, b)) return {false, a, "image " + g.format(b) + " is outside the codomain"};
    if (std::find(images.begin(), images.end(), b) != images.end())
      return {false, a, "image " + g.format(b) + " is hit twice"};
    images.push_back(b);
    if (set_contains<E>(A, g.add(a, b))) return {false, a, "sum " + g.format(g.add(a, b)) + " lies in the domain"};
  }
  return {};
}

template <AbelianGroup G>
bool is_matching(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B,
                 std::vector<std::pair<element_t<G>, element_t<G>>> map) {
  return check_matching(g, std::move(A), std::move(B), std::move(map)).ok;
}

template <AbelianGroup G>
Matching<G> make_matching(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B,
                          std::vector<std::pair<element_t<G>, element_t<G>>> map) {
  auto check = check_matching(g, A, B, map);
  if (!check.ok) throw Error(ErrorCode::not_a_matching, check.reason);
  std::sort(map.begin(), map.end());
  return {g, canonical_set(std::move(A)), canonical_set(std::move(B)), std::move(map)};
}

/// Fibers of x -> {a : a + f(a) = x}; only nonempty fibers are stored.
template <class E>
struct Profile {
  std::map<E, std::vector<E>> fibers;

  std::map<E, std::size_t> counts() const {
    std::map<E, std::size_t> c;
    for (const auto& [x, fiber] : fibers) c.emplace(x, fiber.size());
    return c;
  }

  std::size_t count(const E& x) const {
    auto it = fibers.find(x);
    return it == fibers.end() ? 0 : it->second.size();
  }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& kv : fibers) n += kv.second.size();
    return n;
  }
};

/// Equality of multiplicity functions: counts only, fibers may differ.
template <class E>
bool profiles_equal(const Profile<E>& p, const Profile<E>& q) {
  return p.counts() == q.counts();
}

template <AbelianGroup G>
Profile<element_t<G>> profile(const Matching<G>& f) {
  Profile<element_t<G>> p;
  for (std::size_t i = 0; i < f.size(); ++i) p.fibers[f.sum_at(i)].push_back(f.pairs[i].first);
  return p;
}

template <AbelianGroup G>
Matching<G> invert(const Matching<G>& f) {
  if (f.domain != f.codomain) throw Error(ErrorCode::not_invertible_in_place, "domain and codomain differ");
  Matching<G> inv{f.group, f.domain, f.codomain, {}};
  inv.pairs.reserve(f.size());
  for (const auto& [a, b] : f.pairs) inv.pairs.emplace_back(b, a);
  std::sort(inv.pairs.begin(), inv.pairs.end());
  return inv;
}

// ---------------------------------------------------------------------------
// Index-level search machinery

/// Bipartite graph on (A, B) with edge (i, j) iff A[i] + B[j] is not in A.
/// Sums are interned so profile comparisons reduce to sorted id vectors.
template <AbelianGroup G>
class PairGraph {
 public:
  using E = element_t<G>;
  static constexpr std::size_t max_size = 64;

  PairGraph(const G& g, std::vector<E> A, std::vector<E> B)
      : group_(g), A_(canonical_set(std::move(A))), B_(canonical_set(std::move(B))) {
    if (A_.size() != B_.size()) throw Error(ErrorCode::invalid_pair, "sets have different sizes");
    const auto n = A_.size();
    std::vector<E> raw;
    raw.reserve(n * n);
    for (const auto& a : A_)
      for (const auto& b : B_) raw.push_back(g.add(a, b));
    sums_ = raw;
    std::sort(sums_.begin(), sums_.end());
    sums_.erase(std::unique(sums_.begin(), sums_.end()), sums_.end());
    sum_id_.resize(n * n);
    allowed_.resize(n * n);
    for (std::size_t k = 0; k < raw.size(); ++k) {
      sum_id_[k] = static_cast<std::uint32_t>(std::lower_bound(sums_.begin(), sums_.end(), raw[k]) - sums_.begin());
      allowed_[k] = !set_contains<E>(A_, raw[k]);
    }
    if (n <= max_size) {
      row_mask_.assign(n, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (allowed(i, j)) row_mask_[i] |= std::uint64_t{1} << j;
    }
  }

  const G& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return A_.size(); }
  const std::vector<E>& domain() const noexcept { return A_; }
  const std::vector<E>& codomain() const noexcept { return B_; }
  bool allowed(std::size_t i, std::size_t j) const { return allowed_[i * size() + j] != 0; }
  std::uint32_t sum_id(std::size_t i, std::size_t j) const { return sum_id_[i * size() + j]; }
  const E& sum_value(std::uint32_t id) const { return sums_[id]; }
  std::uint64_t row_mask(std::size_t i) const { return row_mask_[i]; }

  /// Multiset of sum ids of an assignment, sorted: equal keys <=> equal profiles.
  std::vector<std::uint32_t> profile_key(std::span<const std::uint32_t> assignment) const {
    std::vector<std::uint32_t> key(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) key[i] = sum_id(i, assignment[i]);
    std::sort(key.begin(), key.end());
    return key;
  }

  Matching<G> to_matching(std::span<const std::uint32_t> assignment) const {
    Matching<G> m{group_, A_, B_, {}};
    m.pairs.reserve(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) m.pairs.emplace_back(A_[i], B_[assignment[i]]);
    return m;
  }

 private:
  G group_;
  std::vector<E> A_, B_;
  std::vector<E> sums_;
  std::vector<std::uint32_t> sum_id_;
  std::vector<char> allowed_;
  std::vector<std::uint64_t> row_mask_;
};

enum class EnumerationEnd { completed, stopped, budget_exhausted };

namespace detail {

template <class Visit>
class Backtracker {
 public:
  Backtracker(std::span<const std::uint64_t> rows, Budget& budget, Visit& visit)
      : rows_(rows), budget_(budget), visit_(visit), assignment_(rows.size()) {}

  EnumerationEnd run() {
    if (rows_.empty()) return EnumerationEnd::completed;
    const std::uint64_t full = rows_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows_.size()) - 1;
    std::uint64_t reachable = 0;
    for (auto r : rows_) {
      if (r == 0) return EnumerationEnd::completed;
      reachable |= r;
    }
    if (reachable != full) return EnumerationEnd::completed;
    descend(0, 0);
    return end_;
  }

 private:
  // Forward checking: every later row keeps an unused column and every unused
  // column stays reachable from some later row.
  bool feasible(std::size_t next_row, std::uint64_t used) const {
    std::uint64_t reachable = 0;
    for (std::size_t i = next_row; i < rows_.size(); ++i) {
      const auto avail = rows_[i] & ~used;
      if (avail == 0) return false;
      reachable |= avail;
    }
    const std::uint64_t full = rows_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows_.size()) - 1;
    return (reachable | used) == full;
  }

  bool descend(std::size_t row, std::uint64_t used) {
    if (row == rows_.size()) {
      if (!visit_(std::span<const std::uint32_t>(assignment_))) {
        end_ = EnumerationEnd::stopped;
        return false;
      }
      return true;
    }
    auto avail = rows_[row] & ~used;
    while (avail != 0) {
      const auto j = static_cast<std::uint32_t>(std::countr_zero(avail));
      avail &= avail - 1;
      if (!budget_.spend()) {
        end_ = EnumerationEnd::budget_exhausted;
        return false;
      }
      const auto next_used = used | (std::uint64_t{1} << j);
      if (row + 1 < rows_.size() && !feasible(row + 1, next_used)) continue;
      assignment_[row] = j;
      if (!descend(row + 1, next_used)) return false;
    }
    return true;
  }

  std::span<const std::uint64_t> rows_;
  Budget& budget_;
  Visit& visit_;
  std::vector<std::uint32_t> assignment_;
  EnumerationEnd end_ = EnumerationEnd::completed;
};

}  // namespace detail

/// Visits every perfect matching of the graph in lexicographic order of the
/// assignment vector. visit returns false to stop early.
template <AbelianGroup G, class Visit>
EnumerationEnd for_each_assignment(const PairGraph<G>& graph, Budget& budget, Visit&& visit) {
  if (graph.size() > PairGraph<G>::max_size)
    throw Error(ErrorCode::budget_exceeded, "enumeration limited to sets of size " +
                                                std::to_string(PairGraph<G>::max_size));
  std::vector<std::uint64_t> rows(graph.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = graph.row_mask(i);
  detail::Backtracker<std::remove_reference_t<Visit>> bt(rows, budget, visit);
  return bt.run();
}

/// All matchings A -> B in lexicographic order of the map.
template <AbelianGroup G>
std::vector<Matching<G>> enumerate_matchings(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B,
                                             Budget budget = Budget{}) {
  PairGraph<G> graph(g, std::move(A), std::move(B));
  std::vector<Matching<G>> out;
  auto end = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t> asg) {
    out.push_back(graph.to_matching(asg));
    return true;
  });
  if (end == EnumerationEnd::budget_exhausted) throw Error(ErrorCode::budget_exceeded, "matching enumeration");
  return out;
}

template <AbelianGroup G>
std::size_t count_matchings(const PairGraph<G>& graph, Budget& budget, bool& complete) {
  std::size_t n = 0;
  complete = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t>) {
               ++n;
               return true;
             }) == EnumerationEnd::completed;
  return n;
}

/// Augmenting-path maximum bipartite matching (Kuhn), rows and columns
/// scanned in canonical order. Returns a perfect assignment or nothing.
template <AbelianGroup G>
std::optional<std::vector<std::uint32_t>> perfect_assignment(const PairGraph<G>& graph) {
  const auto n = graph.size();
  constexpr std::uint32_t free = ~std::uint32_t{0};
  std::vector<std::uint32_t> owner(n, free);  // column -> row
  std::vector<char> seen(n);

  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t j = 0; j < n; ++j) {
      if (!graph.allowed(row, j) || seen[j]) continue;
      seen[j] = 1;
      if (owner[j] == free || self(self, owner[j])) {
        owner[j] = static_cast<std::uint32_t>(row);
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, i)) return std::nullopt;
  }
  std::vector<std::uint32_t> assignment(n);
  for (std::size_t j = 0; j < n; ++j) assignment[owner[j]] = static_cast<std::uint32_t>(j);
  return assignment;
}

template <AbelianGroup G>
std::optional<Matching<G>> find_matching(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B) {
  if (A.size() != B.size()) throw Error(ErrorCode::invalid_pair, "sets have different sizes");
  PairGraph<G> graph(g, std::move(A), std::move(B));
  auto asg = perfect_assignment(graph);
  if (!asg) return std::nullopt;
  return graph.to_matching(*asg);
}

/// True iff no other matching on (A, B) has the same multiplicity function.
template <AbelianGroup G>
Decision is_acyclic(const Matching<G>& f, Budget budget = Budget{}) {
  PairGraph<G> graph(f.group, f.domain, f.codomain);
  std::vector<std::uint32_t> mine(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    mine[i] = static_cast<std::uint32_t>(
        std::lower_bound(f.codomain.begin(), f.codomain.end(), f.pairs[i].second) - f.codomain.begin());
  const auto key = graph.profile_key(mine);
  bool twin = false;
  auto end = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t> asg) {
    if (std::equal(asg.begin(), asg.end(), mine.begin())) return true;
    if (graph.profile_key(asg) == key) {
      twin = true;
      return false;
    }
    return true;
  });
  if (twin) return Decision::no;
  return end == EnumerationEnd::budget_exhausted ? Decision::unknown : Decision::yes;
}

// ---------------------------------------------------------------------------
// Cycle structure for matchings A -> A

template <class E>
struct CycleDecomposition {
  /// Each cycle starts at its smallest element; cycles sorted by that element.
  std::vector<std::vector<E>> cycles;

  std::size_t order_of(const E& a) const {
    for (const auto& c : cycles)
      if (std::find(c.begin(), c.end(), a) != c.end()) return c.size();
    throw Error(ErrorCode::invalid_argument, "element outside the domain");
  }

  std::size_t longest() const {
    std::size_t m = 0;
    for (const auto& c : cycles) m = std::max(m, c.size());
    return m;
  }

  /// Only fixed points and transpositions, i.e. f∘f = id.
  bool involutive() const { return longest() <= 2; }
};

template <AbelianGroup G>
CycleDecomposition<element_t<G>> orbits(const Matching<G>& f) {
  if (f.domain != f.codomain) throw Error(ErrorCode::invalid_pair, "cycle structure needs A = B");
  CycleDecomposition<element_t<G>> d;
  std::vector<char> done(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (done[i]) continue;
    std::vector<element_t<G>> cycle;
    std::size_t k = i;
    while (!done[k]) {
      done[k] = 1;
      cycle.push_back(f.domain[k]);
      const auto& next = f.pairs[k].second;
      k = static_cast<std::size_t>(std::lower_bound(f.domain.begin(), f.domain.end(), next) - f.domain.begin());
    }
    d.cycles.push_back(std::move(cycle));
  }
  return d;
}

/// f restricted to A \ S, where S is a union of f-cycles and a proper subset of A.
template <AbelianGroup G>
Matching<G> restrict_matching(const Matching<G>& f, std::vector<element_t<G>> S) {
  using E = element_t<G>;
  if (f.domain != f.codomain) throw Error(ErrorCode::invalid_restriction, "restriction needs A = B");
  S = canonical_set(std::move(S));
  for (const auto& s : S) {
    if (!set_contains<E>(f.domain, s)) throw Error(ErrorCode::invalid_restriction, "dropped element outside A");
    if (!set_contains<E>(S, f(s))) throw Error(ErrorCode::invalid_restriction, "dropped set is not cycle-closed");
  }
  if (S.size() == f.size()) throw Error(ErrorCode::invalid_restriction, "cannot drop the whole domain");
  Matching<G> r{f.group, {}, {}, {}};
  for (const auto& p : f.pairs)
    if (!set_contains<E>(S, p.first)) {
      r.domain.push_back(p.first);
      r.pairs.push_back(p);
    }
  r.codomain = r.domain;
  return r;
}

// ---------------------------------------------------------------------------
// Failure-at-order and matching-property searches

template <AbelianGroup G>
struct FailureWitness {
  Matching<G> f;
  Matching<G> g;
  std::size_t order() const noexcept { return f.size(); }
};

template <AbelianGroup G>
struct FailureSearch {
  SearchStatus status = SearchStatus::absent;
  std::optional<FailureWitness<G>> witness;
  unsigned long long nodes = 0;
};

/// Visits k-subsets of {0..n-1} in lexicographic order; fn returns false to stop.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Searches pairs (A, B) of m-subsets of the universe for two distinct
/// matchings with equal multiplicity functions. The first witness in the
/// order (A, B, g) is returned, with f the earliest matching sharing g's
/// profile. B may contain 0.
template <AbelianGroup G>
FailureSearch<G> fails_at_order(const G& g, std::vector<element_t<G>> universe, std::size_t m,
                                Budget budget = Budget{}) {
  using E = element_t<G>;
  universe = canonical_set(std::move(universe));
  FailureSearch<G> result;
  if (m == 0 || m > universe.size()) return result;
  if (m > PairGraph<G>::max_size) {
    result.status = SearchStatus::unknown;
    return result;
  }
  auto pick = [&](std::span<const std::size_t> idx) {
    std::vector<E> s;
    s.reserve(idx.size());
    for (auto i : idx) s.push_back(universe[i]);
    return s;
  };
  bool exhausted = false;
  for_each_combination(universe.size(), m, [&](std::span<const std::size_t> ia) {
    auto A = pick(ia);
    return for_each_combination(universe.size(), m, [&](std::span<const std::size_t> ib) {
      if (!budget.spend()) {
        exhausted = true;
        return false;
      }
      PairGraph<G> graph(g, A, pick(ib));
      std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> first_by_key;
      auto end = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t> asg) {
        auto [it, fresh] = first_by_key.try_emplace(graph.profile_key(asg), asg.begin(), asg.end());
        if (fresh) return true;
        result.witness = FailureWitness<G>{graph.to_matching(it->second), graph.to_matching(asg)};
        return false;
      });
      if (end == EnumerationEnd::budget_exhausted) {
        exhausted = true;
        return false;
      }
      return !result.witness.has_value();
    });
  });
  result.nodes = budget.spent();
  if (result.witness) result.status = SearchStatus::found;
  else if (exhausted) result.status = SearchStatus::unknown;
  return result;
}

inline FailureSearch<FiniteGroup> fails_at_order(const FiniteGroup& g, std::size_t m, Budget budget = Budget{}) {
  return fails_at_order(g, g.elements(), m, budget);
}

template <class E>
struct PropertyCheck {
  bool pass = true;
  std::optional<std::pair<std::vector<E>, std::vector<E>>> counterexample;
  unsigned long long pairs_checked = 0;
};

/// Checks that every pair |A| = |B| <= k with 0 outside B admits a matching.
/// Pairs are visited by size, then A, then B, in canonical order.
inline PropertyCheck<FiniteElement> matching_property_upto(const FiniteGroup& g, std::size_t k) {
  PropertyCheck<FiniteElement> result;
  const auto all = g.elements();
  std::vector<FiniteElement> nonzero(all.begin() + 1, all.end());
  for (std::size_t s = 1; s <= k && result.pass; ++s) {
    for_each_combination(all.size(), s, [&](std::span<const std::size_t> ia) {
      std::vector<FiniteElement> A;
      for (auto i : ia) A.push_back(all[i]);
      return for_each_combination(nonzero.size(), s, [&](std::span<const std::size_t> ib) {
        std::vector<FiniteElement> B;
        for (auto i : ib) B.push_back(nonzero[i]);
        ++result.pairs_checked;
        PairGraph<FiniteGroup> graph(g, A, B);
        if (perfect_assignment(graph)) return true;
        result.pass = false;
        result.counterexample.emplace(A, B);
        return false;
      });
    });
  }
  return result;
}

template <AbelianGroup G>
struct AcyclicSearch {
  SearchStatus status = SearchStatus::absent;
  std::optional<Matching<G>> matching;
  std::size_t matchings_seen = 0;
  std::size_t profile_classes = 0;
};

/// Lexicographically first matching whose profile class is a singleton.
template <AbelianGroup G>
AcyclicSearch<G> find_acyclic_matching(const G& g, std::vector<element_t<G>> A, std::vector<element_t<G>> B,
                                       Budget budget = Budget{}) {
  if (A.size() != B.size()) throw Error(ErrorCode::invalid_pair, "sets have different sizes");
  if (std::find(B.begin(), B.end(), g.zero()) != B.end())
    throw Error(ErrorCode::invalid_pair, "codomain must not contain zero");
  PairGraph<G> graph(g, std::move(A), std::move(B));
  std::map<std::vector<std::uint32_t>, std::size_t> class_size;
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> first_of_class;
  AcyclicSearch<G> result;
  auto end = for_each_assignment(graph, budget, [&](std::span<const std::uint32_t> asg) {
    ++result.matchings_seen;
    auto key = graph.profile_key(asg);
    if (class_size[key]++ == 0) first_of_class.emplace_back(std::move(key), std::vector<std::uint32_t>(asg.begin(), asg.end()));
    return true;
  });
  result.profile_classes = class_size.size();
  if (end == EnumerationEnd::budget_exhausted) {
    result.status = SearchStatus::unknown;
    return result;
  }
  std::optional<std::vector<std::uint32_t>> best;
  for (const auto& [key, asg] : first_of_class)
    if (class_size[key] == 1 && (!best || asg < *best)) best = asg;
  if (best) {
    result.status = SearchStatus::found;
    result.matching = graph.to_matching(*best);
  }
  return result;
}

}  // namespace amatch
