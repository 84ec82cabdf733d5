#pragma once

// Linear matchings between K-subspaces of a field extension L.
//
// Subspaces are kept in reduced row-echelon form over K, so equal subspaces
// have identical representations. Linear maps are stored by the images of
// the domain's RREF basis, in ambient coordinates.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "amatch/error.hpp"
#include "amatch/field.hpp"

namespace amatch {

template <ScalarField F>
using Vec = std::vector<typename F::value_type>;

template <class T>
concept FieldTower = requires(const T& t, const typename T::element& x, const std::vector<typename T::scalar>& v) {
  typename T::scalar_field;
  typename T::element;
  { t.scalars() } -> std::convertible_to<const typename T::scalar_field&>;
  { t.coord_dim() } -> std::same_as<std::size_t>;
  { t.coords(x) } -> std::same_as<std::vector<typename T::scalar>>;
  { t.from_coords(v) } -> std::same_as<typename T::element>;
  { t.mul(x, x) } -> std::same_as<typename T::element>;
};

// ---------------------------------------------------------------------------
// Row reduction

namespace linalg {

template <ScalarField F>
bool is_zero(const F& k, const Vec<F>& v) {
  return std::all_of(v.begin(), v.end(), [&](const auto& x) { return k.is_zero(x); });
}

/// Brings rows to reduced row-echelon form, dropping zero rows. Returns the
/// pivot column of each remaining row.
template <ScalarField F>
std::vector<std::size_t> rref(const F& k, std::vector<Vec<F>>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && k.is_zero(rows[sel][c])) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const auto inv = k.inv(rows[r][c]);
    for (auto& x : rows[r]) x = k.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || k.is_zero(rows[i][c])) continue;
      const auto factor = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] = k.sub(rows[i][j], k.mul(factor, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

template <ScalarField F>
std::size_t rank(const F& k, std::vector<Vec<F>> rows) {
  return rref(k, rows).size();
}

/// Basis of {λ : Σ λ_j columns[j] = 0}, in RREF.
template <ScalarField F>
std::vector<Vec<F>> kernel(const F& k, const std::vector<Vec<F>>& columns) {
  const std::size_t r = columns.size();
  if (r == 0) return {};
  const std::size_t n = columns.front().size();
  std::vector<Vec<F>> rows;
  for (std::size_t j = 0; j < r; ++j) {
    Vec<F> row = columns[j];
    row.resize(n + r, k.zero());
    row[n + j] = k.one();
    rows.push_back(std::move(row));
  }
  rref(k, rows);
  std::vector<Vec<F>> out;
  for (const auto& row : rows) {
    if (!std::all_of(row.begin(), row.begin() + static_cast<long>(n), [&](const auto& x) { return k.is_zero(x); }))
      continue;
    out.emplace_back(row.begin() + static_cast<long>(n), row.end());
  }
  rref(k, out);
  return out;
}

}  // namespace linalg

// ---------------------------------------------------------------------------
// Subspaces

template <ScalarField F>
class Subspace {
 public:
  using vector_type = Vec<F>;

  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

  static Subspace span(const F& k, std::size_t ambient, std::vector<vector_type> vectors) {
    for (const auto& v : vectors)
      if (v.size() != ambient) throw Error(ErrorCode::invalid_argument, "vector has wrong length");
    Subspace s(ambient);
    s.pivots_ = linalg::rref(k, vectors);
    s.rows_ = std::move(vectors);
    return s;
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<vector_type>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t ambient_;
  std::vector<vector_type> rows_;
  std::vector<std::size_t> pivots_;
};

/// v with its pivot-column components cleared against A: the projection onto
/// the coordinate complement spanned by non-pivot columns.
template <ScalarField F>
Vec<F> reduce(const F& k, const Subspace<F>& A, Vec<F> v) {
  for (std::size_t i = 0; i < A.dim(); ++i) {
    const auto c = v[A.pivots()[i]];
    if (k.is_zero(c)) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = k.sub(v[j], k.mul(c, A.rows()[i][j]));
  }
  return v;
}

template <ScalarField F>
bool contains(const F& k, const Subspace<F>& A, const Vec<F>& v) {
  return linalg::is_zero(k, reduce(k, A, v));
}

/// Coordinates of v in the RREF basis of A, or nothing if v ∉ A.
template <ScalarField F>
std::optional<Vec<F>> coords_in(const F& k, const Subspace<F>& A, const Vec<F>& v) {
  if (!contains(k, A, v)) return std::nullopt;
  Vec<F> x;
  for (auto p : A.pivots()) x.push_back(v[p]);
  return x;
}

/// Σ x_i · rows_i of A.
template <ScalarField F>
Vec<F> combine(const F& k, const std::vector<Vec<F>>& rows, const Vec<F>& x, std::size_t ambient) {
  Vec<F> v(ambient, k.zero());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (k.is_zero(x[i])) continue;
    for (std::size_t j = 0; j < ambient; ++j) v[j] = k.add(v[j], k.mul(x[i], rows[i][j]));
  }
  return v;
}

template <ScalarField F>
Subspace<F> sum(const F& k, const Subspace<F>& A, const Subspace<F>& B) {
  auto rows = A.rows();
  rows.insert(rows.end(), B.rows().begin(), B.rows().end());
  return Subspace<F>::span(k, A.ambient(), rows);
}

/// Zassenhaus: reduce [a | a], [b | 0]; rows with zero left half span A ∩ B.
template <ScalarField F>
Subspace<F> intersect(const F& k, const Subspace<F>& A, const Subspace<F>& B) {
  const std::size_t n = A.ambient();
  std::vector<Vec<F>> rows;
  for (const auto& a : A.rows()) {
    Vec<F> row = a;
    row.insert(row.end(), a.begin(), a.end());
    rows.push_back(std::move(row));
  }
  for (const auto& b : B.rows()) {
    Vec<F> row = b;
    row.resize(2 * n, k.zero());
    rows.push_back(std::move(row));
  }
  linalg::rref(k, rows);
  std::vector<Vec<F>> out;
  for (const auto& row : rows)
    if (std::all_of(row.begin(), row.begin() + static_cast<long>(n), [&](const auto& x) { return k.is_zero(x); }))
      out.emplace_back(row.begin() + static_cast<long>(n), row.end());
  return Subspace<F>::span(k, n, out);
}

template <FieldTower T>
using SubspaceOf = Subspace<typename T::scalar_field>;

template <FieldTower T>
SubspaceOf<T> span_elements(const T& t, const std::vector<typename T::element>& elems) {
  std::vector<Vec<typename T::scalar_field>> rows;
  for (const auto& e : elems) rows.push_back(t.coords(e));
  return SubspaceOf<T>::span(t.scalars(), t.coord_dim(), rows);
}

template <FieldTower T>
std::vector<typename T::element> basis_elements(const T& t, const SubspaceOf<T>& A) {
  std::vector<typename T::element> out;
  for (const auto& r : A.rows()) out.push_back(t.from_coords(r));
  return out;
}

/// AB: span of all products of basis elements.
template <FieldTower T>
SubspaceOf<T> product(const T& t, const SubspaceOf<T>& A, const SubspaceOf<T>& B) {
  std::vector<typename T::element> prods;
  const auto ea = basis_elements(t, A);
  const auto eb = basis_elements(t, B);
  for (const auto& a : ea)
    for (const auto& b : eb) prods.push_back(t.mul(a, b));
  return span_elements(t, prods);
}

/// A strong matching A → B exists iff AB ∩ A = {0}.
template <FieldTower T>
bool strong_matching_exists(const T& t, const SubspaceOf<T>& A, const SubspaceOf<T>& B) {
  if (A.dim() != B.dim() || A.dim() == 0)
    throw Error(ErrorCode::invalid_pair, "subspaces must have equal positive dimension");
  return intersect(t.scalars(), product(t, A, B), A).dim() == 0;
}

// ---------------------------------------------------------------------------
// Linear maps

template <ScalarField F>
struct LinearMap {
  Subspace<F> domain, codomain;
  std::vector<Vec<F>> images;  // image of domain.rows()[i], ambient coordinates

  friend bool operator==(const LinearMap&, const LinearMap&) = default;
};

template <ScalarField F>
LinearMap<F> make_linear_map(const F& k, const Subspace<F>& domain, const Subspace<F>& codomain,
                             std::vector<Vec<F>> images) {
  if (images.size() != domain.dim()) throw Error(ErrorCode::invalid_argument, "one image per domain basis vector");
  for (const auto& v : images)
    if (v.size() != codomain.ambient() || !contains(k, codomain, v))
      throw Error(ErrorCode::invalid_argument, "image outside the codomain");
  return {domain, codomain, std::move(images)};
}

/// Map with matrix rows M[j] = codomain coordinates of the image of basis j.
template <ScalarField F>
LinearMap<F> map_from_matrix(const F& k, const Subspace<F>& domain, const Subspace<F>& codomain,
                             const std::vector<Vec<F>>& M) {
  std::vector<Vec<F>> images;
  for (const auto& row : M) images.push_back(combine(k, codomain.rows(), row, codomain.ambient()));
  return make_linear_map(k, domain, codomain, images);
}

template <ScalarField F>
std::vector<Vec<F>> matrix_of(const F& k, const LinearMap<F>& f) {
  std::vector<Vec<F>> M;
  for (const auto& v : f.images) M.push_back(*coords_in(k, f.codomain, v));
  return M;
}

template <ScalarField F>
LinearMap<F> identity_map(const Subspace<F>& A) {
  return {A, A, A.rows()};
}

/// Image of the element with domain coordinates x.
template <ScalarField F>
Vec<F> apply_coords(const F& k, const LinearMap<F>& f, const Vec<F>& x) {
  return combine(k, f.images, x, f.codomain.ambient());
}

template <ScalarField F>
Vec<F> apply(const F& k, const LinearMap<F>& f, const Vec<F>& v) {
  auto x = coords_in(k, f.domain, v);
  if (!x) throw Error(ErrorCode::invalid_argument, "vector outside the domain");
  return apply_coords(k, f, *x);
}

template <ScalarField F>
bool is_isomorphism(const F& k, const LinearMap<F>& f) {
  return f.domain.dim() == f.codomain.dim() && linalg::rank(k, f.images) == f.domain.dim();
}

template <ScalarField F>
LinearMap<F> scale(const F& k, const typename F::value_type& c, LinearMap<F> f) {
  for (auto& v : f.images)
    for (auto& x : v) x = k.mul(c, x);
  return f;
}

/// g ∘ f.
template <ScalarField F>
LinearMap<F> compose(const F& k, const LinearMap<F>& g, const LinearMap<F>& f) {
  if (!(f.codomain == g.domain)) throw Error(ErrorCode::invalid_argument, "maps do not compose");
  std::vector<Vec<F>> images;
  for (const auto& v : f.images) images.push_back(apply(k, g, v));
  return {f.domain, g.codomain, images};
}

template <ScalarField F>
LinearMap<F> inverse(const F& k, const LinearMap<F>& f) {
  if (!is_isomorphism(k, f)) throw Error(ErrorCode::invalid_argument, "map is not invertible");
  // Row-reduce [images | I]; the right half then holds the preimage coordinates.
  const std::size_t m = f.domain.dim();
  const std::size_t n = f.codomain.ambient();
  std::vector<Vec<F>> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Vec<F> row = f.images[i];
    row.resize(n + m, k.zero());
    row[n + i] = k.one();
    rows.push_back(std::move(row));
  }
  linalg::rref(k, rows);
  // rows now pair the RREF basis of the codomain with domain coordinates
  std::vector<Vec<F>> images;
  for (const auto& row : rows) {
    Vec<F> x(row.begin() + static_cast<long>(n), row.end());
    images.push_back(combine(k, f.domain.rows(), x, f.domain.ambient()));
  }
  return {f.codomain, f.domain, images};
}

/// Some c with g = c·f, if any.
template <ScalarField F>
std::optional<typename F::value_type> scalar_ratio(const F& k, const LinearMap<F>& g, const LinearMap<F>& f) {
  if (!(f.domain == g.domain) || !(f.codomain == g.codomain)) return std::nullopt;
  std::optional<typename F::value_type> c;
  for (std::size_t i = 0; i < f.images.size() && !c; ++i)
    for (std::size_t j = 0; j < f.images[i].size(); ++j)
      if (!k.is_zero(f.images[i][j])) {
        c = k.mul(g.images[i][j], k.inv(f.images[i][j]));
        break;
      }
  if (!c) c = k.zero();
  return scale(k, *c, f) == g ? c : std::nullopt;
}

// ---------------------------------------------------------------------------
// Matched bases

/// 𝒜 is matched to ℬ: for every i and b ∈ B, a_i·b ∈ A forces b into the
/// hyperplane spanned by ℬ∖{b_i}. The set of such b is the kernel of
/// λ ↦ Σ λ_j (a_i b_j) taken modulo A; the condition is λ_i = 0 on it.
template <FieldTower T>
bool is_matched_basis(const T& t, const std::vector<Vec<typename T::scalar_field>>& basisA,
                      const std::vector<Vec<typename T::scalar_field>>& basisB) {
  const auto& k = t.scalars();
  const std::size_t n = basisA.size();
  if (n == 0 || basisB.size() != n) throw Error(ErrorCode::invalid_basis, "bases must be nonempty and of equal size");
  if (linalg::rank(k, basisA) != n || linalg::rank(k, basisB) != n)
    throw Error(ErrorCode::invalid_basis, "vectors are linearly dependent");
  const auto A = SubspaceOf<T>::span(k, t.coord_dim(), basisA);
  std::vector<typename T::element> bs;
  for (const auto& b : basisB) bs.push_back(t.from_coords(b));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = t.from_coords(basisA[i]);
    std::vector<Vec<typename T::scalar_field>> columns;
    for (const auto& b : bs) columns.push_back(reduce(k, A, t.coords(t.mul(ai, b))));
    for (const auto& lambda : linalg::kernel(k, columns))
      if (!k.is_zero(lambda[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration over a finite base field

/// Projective points of A: nonzero coordinate vectors whose first nonzero
/// entry is 1, returned as ambient vectors in lexicographic order.
inline std::vector<Vec<PrimeField>> projective_points(const PrimeField& k, const Subspace<PrimeField>& A) {
  std::vector<Vec<PrimeField>> out;
  const std::size_t m = A.dim();
  const auto q = k.characteristic();
  for (std::size_t lead = 0; lead < m; ++lead) {
    Vec<PrimeField> x(m, 0);
    x[lead] = 1;
    while (true) {
      out.push_back(combine(k, A.rows(), x, A.ambient()));
      std::size_t i = m;  // odometer over the entries after the leading 1
      while (i > lead + 1 && ++x[i - 1] == q) x[--i] = 0;
      if (i == lead + 1) break;
    }
  }
  return out;
}

/// Visits each unordered basis of A made of projective points, once.
inline bool for_each_projective_basis(const PrimeField& k, const Subspace<PrimeField>& A,
                                      const std::function<bool(const std::vector<Vec<PrimeField>>&)>& visit) {
  const auto points = projective_points(k, A);
  const std::size_t m = A.dim();
  std::vector<std::size_t> idx;
  std::vector<Vec<PrimeField>> chosen;
  std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
    if (chosen.size() == m) return visit(chosen);
    for (std::size_t i = start; i < points.size(); ++i) {
      chosen.push_back(points[i]);
      const bool independent = linalg::rank(k, chosen) == chosen.size();
      if (independent && !rec(i + 1)) return false;
      chosen.pop_back();
    }
    return true;
  };
  return rec(0);
}

/// All invertible m×m matrices over GF(p), in lexicographic order of entries.
inline bool for_each_invertible_matrix(const PrimeField& k, std::size_t m,
                                       const std::function<bool(const std::vector<Vec<PrimeField>>&)>& visit) {
  const auto q = k.characteristic();
  std::vector<Vec<PrimeField>> M(m, Vec<PrimeField>(m, 0));
  while (true) {
    if (linalg::rank(k, M) == m && !visit(M)) return false;
    std::size_t pos = m * m;
    while (pos > 0) {
      --pos;
      auto& x = M[pos / m][pos % m];
      if (++x < q) break;
      x = 0;
      if (pos == 0) return true;
    }
    if (m == 0) return true;
  }
}

struct MatchMode {
  enum class Kind { exhaustive, sampled } kind = Kind::exhaustive;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static MatchMode exhaustive() { return {}; }
  static MatchMode sampled(std::size_t k, std::uint64_t seed) { return {Kind::sampled, k, seed}; }
};

namespace detail {

/// Random basis of A: the rows of a random invertible matrix applied to A.
inline std::vector<Vec<PrimeField>> random_basis(const PrimeField& k, const Subspace<PrimeField>& A,
                                                 std::mt19937_64& rng) {
  const auto q = k.characteristic();
  const std::size_t m = A.dim();
  while (true) {
    std::vector<Vec<PrimeField>> M(m, Vec<PrimeField>(m));
    for (auto& row : M)
      for (auto& x : row) x = rng() % q;
    if (linalg::rank(k, M) != m) continue;
    std::vector<Vec<PrimeField>> out;
    for (const auto& row : M) out.push_back(combine(k, A.rows(), row, A.ambient()));
    return out;
  }
}

/// Bases of A to test in the given mode.
inline bool for_each_basis(const PrimeField& k, const Subspace<PrimeField>& A, const MatchMode& mode,
                           const std::function<bool(const std::vector<Vec<PrimeField>>&)>& visit) {
  if (mode.kind == MatchMode::Kind::exhaustive) return for_each_projective_basis(k, A, visit);
  std::mt19937_64 rng(mode.seed);
  for (std::size_t s = 0; s < mode.samples; ++s)
    if (!visit(random_basis(k, A, rng))) return false;
  return true;
}

}  // namespace detail

struct MatchedSubspaceResult {
  Decision matched = Decision::unknown;
  std::vector<Vec<PrimeField>> failing_basis;  // a basis of A matched to no basis of B
  std::uint64_t nodes = 0;
};

/// Some ordered basis of B to which basisA is matched, searched over
/// projective points (scaling basis vectors never changes the condition).
inline std::optional<std::vector<Vec<PrimeField>>> find_matched_basis(const FiniteTower& t,
                                                                        const std::vector<Vec<PrimeField>>& basisA,
                                                                        const Subspace<PrimeField>& B, Budget& budget) {
  const auto& k = t.scalars();
  std::optional<std::vector<Vec<PrimeField>>> found;
  for_each_projective_basis(k, B, [&](const std::vector<Vec<PrimeField>>& chosen) {
    std::vector<std::size_t> perm(chosen.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (!budget.spend()) return false;
      std::vector<Vec<PrimeField>> ordered;
      for (auto i : perm) ordered.push_back(chosen[i]);
      if (is_matched_basis(t, basisA, ordered)) {
        found = std::move(ordered);
        return false;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  });
  return found;
}

/// Every basis of A (all of them, or a seeded sample) is matched to some
/// basis of B.
inline MatchedSubspaceResult is_matched_subspace(const FiniteTower& t, const Subspace<PrimeField>& A,
                                                 const Subspace<PrimeField>& B, const MatchMode& mode, Budget budget) {
  if (A.dim() != B.dim() || A.dim() == 0)
    throw Error(ErrorCode::invalid_pair, "subspaces must have equal positive dimension");
  MatchedSubspaceResult res;
  bool all = true;
  detail::for_each_basis(t.scalars(), A, mode, [&](const std::vector<Vec<PrimeField>>& basisA) {
    if (find_matched_basis(t, basisA, B, budget)) return true;
    if (budget.exhausted()) return false;
    all = false;
    res.failing_basis = basisA;
    return false;
  });
  res.nodes = budget.spent();
  res.matched = budget.exhausted() ? Decision::unknown : (all ? Decision::yes : Decision::no);
  return res;
}

struct StrongMatchingResult {
  Decision strong = Decision::unknown;
  std::vector<Vec<PrimeField>> failing_basis;  // 𝒜 not matched to φ(𝒜)
};

/// φ matches every basis (all, or a seeded sample) to its image basis.
inline StrongMatchingResult is_strong_matching(const FiniteTower& t, const LinearMap<PrimeField>& phi,
                                               const MatchMode& mode, Budget budget) {
  const auto& k = t.scalars();
  if (!is_isomorphism(k, phi)) throw Error(ErrorCode::invalid_argument, "map is not an isomorphism");
  StrongMatchingResult res;
  bool all = true;
  detail::for_each_basis(k, phi.domain, mode, [&](const std::vector<Vec<PrimeField>>& basisA) {
    if (!budget.spend()) return false;
    std::vector<Vec<PrimeField>> image;
    for (const auto& a : basisA) image.push_back(apply(k, phi, a));
    if (is_matched_basis(t, basisA, image)) return true;
    all = false;
    res.failing_basis = basisA;
    return false;
  });
  res.strong = budget.exhausted() ? Decision::unknown : (all ? Decision::yes : Decision::no);
  return res;
}

// ---------------------------------------------------------------------------
// Quadratic maps a ↦ a·f(a)

namespace detail {

/// Normalized coefficients of x ↦ Σ_{i,j} x_i x_j C[i][j] (an L-valued
/// quadratic form): diagonal C[i][i] and, for i < j, C[i][j] + C[j][i].
template <ScalarField F>
std::vector<Vec<F>> normalize_quadratic(const F& k, const std::vector<std::vector<Vec<F>>>& C) {
  std::vector<Vec<F>> out;
  const std::size_t m = C.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      if (i == j) {
        out.push_back(C[i][i]);
        continue;
      }
      Vec<F> s = C[i][j];
      for (std::size_t c = 0; c < s.size(); ++c) s[c] = k.add(s[c], C[j][i][c]);
      out.push_back(std::move(s));
    }
  return out;
}

/// C[k][l] = e_k · h(e_l) in ambient coordinates.
template <FieldTower T>
std::vector<std::vector<Vec<typename T::scalar_field>>> product_table(const T& t,
                                                                      const LinearMap<typename T::scalar_field>& h) {
  const std::size_t m = h.domain.dim();
  std::vector<std::vector<Vec<typename T::scalar_field>>> C(m, std::vector<Vec<typename T::scalar_field>>(m));
  for (std::size_t a = 0; a < m; ++a) {
    const auto ea = t.from_coords(h.domain.rows()[a]);
    for (std::size_t b = 0; b < m; ++b) C[a][b] = t.coords(t.mul(ea, t.from_coords(h.images[b])));
  }
  return C;
}

}  // namespace detail

/// Coefficients of a ↦ φ(a)·h(φ(a)) as a quadratic form in the coordinates
/// of a; with φ = id this is a ↦ a·h(a).
template <FieldTower T>
std::vector<Vec<typename T::scalar_field>> quadratic_coefficients(const T& t,
                                                                  const LinearMap<typename T::scalar_field>& h,
                                                                  const LinearMap<typename T::scalar_field>* phi) {
  using F = typename T::scalar_field;
  const auto& k = t.scalars();
  const auto C = detail::product_table(t, h);
  if (phi == nullptr) return detail::normalize_quadratic(k, C);
  const auto P = matrix_of(k, *phi);  // φ(e_i) = Σ_a P[i][a] e_a
  const std::size_t m = C.size();
  const std::size_t n = t.coord_dim();
  std::vector<std::vector<Vec<F>>> N(m, std::vector<Vec<F>>(m, Vec<F>(n, k.zero())));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t a = 0; a < m; ++a) {
        if (k.is_zero(P[i][a])) continue;
        for (std::size_t b = 0; b < m; ++b) {
          const auto w = k.mul(P[i][a], P[j][b]);
          if (k.is_zero(w)) continue;
          for (std::size_t c = 0; c < n; ++c) N[i][j][c] = k.add(N[i][j][c], k.mul(w, C[a][b][c]));
        }
      }
  return detail::normalize_quadratic(k, N);
}

/// a·f(a) = φ(a)·h(φ(a)) on A, checked point by point.
template <FieldTower T>
bool quad_map_equal_pointwise(const T& t, const LinearMap<typename T::scalar_field>& f,
                              const LinearMap<typename T::scalar_field>& phi,
                              const LinearMap<typename T::scalar_field>& h) {
  using F = typename T::scalar_field;
  const auto& k = t.scalars();
  const auto q = k.size();
  if (!q) throw Error(ErrorCode::unsupported_field, "pointwise comparison needs a finite base field");
  const std::size_t m = f.domain.dim();
  Vec<F> x(m, k.zero());
  while (true) {
    const auto a = combine(k, f.domain.rows(), x, f.domain.ambient());
    const auto fa = apply_coords(k, f, x);
    const auto pa = apply(k, phi, a);
    const auto hpa = apply(k, h, pa);
    if (t.mul(t.from_coords(a), t.from_coords(fa)) != t.mul(t.from_coords(pa), t.from_coords(hpa))) return false;
    std::size_t i = 0;
    while (i < m) {
      x[i] = k.add(x[i], k.one());
      if (!k.is_zero(x[i])) break;
      ++i;
    }
    if (i == m) return true;
  }
}

/// Largest |A| for which pointwise comparison is used on small base fields.
inline constexpr std::uint64_t pointwise_limit = 625;

/// a·f(a) = φ(a)·h(φ(a)) as functions on A. Over a base field with at least
/// five elements (or infinite) both sides are compared as quadratic forms in
/// the coordinates of a; below that, pointwise if A is small enough.
template <FieldTower T>
bool quad_map_equal(const T& t, const LinearMap<typename T::scalar_field>& f,
                    const LinearMap<typename T::scalar_field>& phi, const LinearMap<typename T::scalar_field>& h) {
  if (!(f.domain == phi.domain) || !(phi.codomain == f.domain) || !(h.domain == f.domain))
    throw Error(ErrorCode::invalid_argument, "f, phi and h must share the domain A, with phi: A -> A");
  const auto q = t.scalars().size();
  if (!q || *q >= 5) return quadratic_coefficients(t, f, nullptr) == quadratic_coefficients(t, h, &phi);
  long double points = 1;
  for (std::size_t i = 0; i < f.domain.dim(); ++i) points *= static_cast<long double>(*q);
  if (points > static_cast<long double>(pointwise_limit))
    throw Error(ErrorCode::unsupported_field, "base field has fewer than 5 elements and A is too large to enumerate");
  return quad_map_equal_pointwise(t, f, phi, h);
}

// ---------------------------------------------------------------------------
// Witnesses of failing linear acyclicity

template <ScalarField F>
struct LinearClaims {
  bool strong_f = false;
  bool strong_h = false;
  bool equivalent = false;
  bool distinct = false;
  bool scalar_multiple = false;  // h ∈ K·f; recorded, not required

  bool all() const { return strong_f && strong_h && equivalent && distinct; }
  friend bool operator==(const LinearClaims&, const LinearClaims&) = default;
};

template <FieldTower T>
struct LinearWitness {
  using F = typename T::scalar_field;
  T tower;
  unsigned m = 0;
  Subspace<F> A;
  LinearMap<F> f, h, phi;
  typename F::value_type c{};
  std::string branch;  // "inverse" or "scaled"
  LinearClaims<F> claims;
};

/// Recomputes every claim from the maps alone.
template <FieldTower T>
LinearClaims<typename T::scalar_field> derive_linear_claims(const T& t, const LinearMap<typename T::scalar_field>& f,
                                                            const LinearMap<typename T::scalar_field>& h,
                                                            const LinearMap<typename T::scalar_field>& phi) {
  const auto& k = t.scalars();
  LinearClaims<typename T::scalar_field> cl;
  auto strong = [&](const LinearMap<typename T::scalar_field>& g) {
    return g.domain.dim() > 0 && is_isomorphism(k, g) && strong_matching_exists(t, g.domain, g.codomain);
  };
  cl.strong_f = strong(f);
  cl.strong_h = strong(h) && h.domain == f.domain && h.codomain == f.codomain;
  cl.equivalent = phi.domain == f.domain && phi.codomain == f.domain && is_isomorphism(k, phi) &&
                  cl.strong_h && quad_map_equal(t, f, phi, h);
  cl.distinct = !(f == h);
  cl.scalar_multiple = scalar_ratio(k, h, f).has_value();
  return cl;
}

/// From a strong matching f: A → A, builds h ~ f with h ≠ f. If f∘f ≠ id
/// then h = f⁻¹ with φ = f; otherwise h = c⁻²·f⁻¹ with φ = c·f for the
/// smallest c with c² ∉ {0, 1}.
template <FieldTower T>
LinearWitness<T> witness_from_strong(const T& t, unsigned m, const SubspaceOf<T>& A,
                                     const LinearMap<typename T::scalar_field>& f) {
  const auto& k = t.scalars();
  LinearWitness<T> w{t, m, A, f, f, f, k.zero(), "", {}};
  const auto finv = inverse(k, f);
  if (!(compose(k, f, f) == identity_map(A))) {
    w.branch = "inverse";
    w.h = finv;
    w.phi = f;
    w.c = k.one();
  } else {
    w.branch = "scaled";
    std::int64_t i = 0;
    while (true) {
      const auto c = k.from_int(i++);
      const auto c2 = k.mul(c, c);
      if (!k.is_zero(c2) && c2 != k.one()) {
        w.c = c;
        break;
      }
      if (i > 64) throw Error(ErrorCode::unsupported_field, "no scalar with c^2 outside {0, 1}");
    }
    const auto cinv = k.inv(w.c);
    w.h = scale(k, k.mul(cinv, cinv), finv);
    w.phi = scale(k, w.c, f);
  }
  w.claims = derive_linear_claims(t, w.f, w.h, w.phi);
  return w;
}

/// ⟨a, a³, …, a^(2m−1)⟩.
template <FieldTower T>
SubspaceOf<T> odd_power_span(const T& t, const typename T::element& a, unsigned m) {
  std::vector<typename T::element> gens;
  for (unsigned i = 0; i < m; ++i) gens.push_back(t.pow(a, 2 * i + 1));
  return span_elements(t, gens);
}

/// Witness in GF(p^n) with n prime, for 1 ≤ m ≤ (n+1)/4, built on
/// A_m = ⟨a, a³, …, a^(2m−1)⟩ with a the class of x.
inline LinearWitness<FiniteTower> linear_witness(const FiniteTower& t, unsigned m) {
  if (!intermediate_fields(t).empty())
    throw Error(ErrorCode::invalid_tower, "extension degree " + std::to_string(t.n()) + " has intermediate fields");
  if (m < 1 || 4 * m > t.n() + 1) throw Error(ErrorCode::invalid_order, "need 1 <= m <= (n+1)/4");
  if (t.p() < 5) throw Error(ErrorCode::unsupported_field, "base field needs at least 5 elements");
  const auto A = odd_power_span(t, t.generator(), m);
  if (A.dim() != m) throw Error(ErrorCode::invalid_order, "odd powers are dependent");
  auto w = witness_from_strong(t, m, A, identity_map(A));
  if (!w.claims.all()) throw Error(ErrorCode::construction_unavailable, "witness failed validation");
  return w;
}

/// Witness in Q(t) on A_m = ⟨t, t³, …, t^(2m−1)⟩.
inline LinearWitness<RationalFunctionTower> transcendental_witness(
    unsigned m, unsigned degree_cap = RationalFunctionTower::default_degree_cap) {
  if (m < 1) throw Error(ErrorCode::invalid_order, "m must be positive");
  RationalFunctionTower t(degree_cap);
  const auto A = odd_power_span(t, t.indeterminate(), m);
  auto w = witness_from_strong(t, m, A, identity_map(A));
  if (!w.claims.all()) throw Error(ErrorCode::construction_unavailable, "witness failed validation");
  return w;
}

// ---------------------------------------------------------------------------
// Subfields and the linear matching property

/// GF(p^d) inside GF(p^n): the kernel of x ↦ x^(p^d) − x.
inline Subspace<PrimeField> subfield_subspace(const FiniteTower& t, unsigned d) {
  if (d == 0 || t.n() % d != 0) throw Error(ErrorCode::invalid_argument, "d must divide n");
  const auto& k = t.scalars();
  std::vector<Vec<PrimeField>> columns;
  for (unsigned i = 0; i < t.n(); ++i) {
    FiniteTower::element e(t.n(), 0);
    e[i] = 1;
    columns.push_back(t.sub(t.frobenius(e, d), e));
  }
  return Subspace<PrimeField>::span(k, t.n(), linalg::kernel(k, columns));
}

/// Every d-dimensional subspace of GF(p)^n, in order of pivot sets and then
/// free entries.
inline bool for_each_subspace(const PrimeField& k, std::size_t n, std::size_t d,
                              const std::function<bool(const Subspace<PrimeField>&)>& visit) {
  const auto q = k.characteristic();
  std::vector<std::size_t> piv(d);
  std::iota(piv.begin(), piv.end(), 0);
  if (d > n) return true;
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, column)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = piv[r] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(r, c);
    std::vector<std::uint64_t> vals(free.size(), 0);
    while (true) {
      std::vector<Vec<PrimeField>> rows(d, Vec<PrimeField>(n, 0));
      for (std::size_t r = 0; r < d; ++r) rows[r][piv[r]] = 1;
      for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = vals[f];
      if (!visit(Subspace<PrimeField>::span(k, n, rows))) return false;
      std::size_t f = free.size();
      while (f > 0) {
        --f;
        if (++vals[f] < q) break;
        vals[f] = 0;
        if (f == 0) {
          f = free.size();
          break;
        }
      }
      if (f == free.size()) break;
    }
    // next pivot combination
    std::size_t i = d;
    while (i > 0 && piv[i - 1] == n - d + i - 1) --i;
    if (i == 0) return true;
    ++piv[i - 1];
    for (std::size_t j = i; j < d; ++j) piv[j] = piv[j - 1] + 1;
  }
}

struct LmpCounterexample {
  SearchStatus status = SearchStatus::unknown;
  Subspace<PrimeField> A, B;
  std::vector<Vec<PrimeField>> failing_basis;
  std::uint64_t pairs_checked = 0;
  std::uint64_t nodes = 0;
};

/// Looks for equal-dimensional A, B with 1 ∉ B and a basis of A matched to
/// no basis of B. Intermediate subfields are tried first as A, against B
/// meeting them nontrivially; otherwise all pairs up to max_dim are scanned.
inline LmpCounterexample lmp_counterexample_search(const FiniteTower& t, Budget budget, std::size_t max_dim = 2) {
  const auto& k = t.scalars();
  const auto one = t.coords(t.one());
  LmpCounterexample res;
  res.A = res.B = Subspace<PrimeField>(t.n());
  bool found = false;

  auto try_pair = [&](const Subspace<PrimeField>& A, const Subspace<PrimeField>& B) {
    if (contains(k, B, one)) return true;
    ++res.pairs_checked;
    bool keep_going = true;
    detail::for_each_basis(k, A, MatchMode::exhaustive(), [&](const std::vector<Vec<PrimeField>>& basisA) {
      if (find_matched_basis(t, basisA, B, budget)) return true;
      if (budget.exhausted()) {
        keep_going = false;
        return false;
      }
      res.A = A;
      res.B = B;
      res.failing_basis = basisA;
      found = true;
      keep_going = false;
      return false;
    });
    return keep_going;
  };

  for (unsigned d : intermediate_fields(t)) {
    const auto F = subfield_subspace(t, d);
    const bool done = !for_each_subspace(k, t.n(), d, [&](const Subspace<PrimeField>& B) {
      if (intersect(k, B, F).dim() == 0) return true;
      return try_pair(F, B);
    });
    if (done) break;
  }
  if (!found && !budget.exhausted()) {
    for (std::size_t d = 1; d <= max_dim && d < t.n() && !found && !budget.exhausted(); ++d) {
      for_each_subspace(k, t.n(), d, [&](const Subspace<PrimeField>& A) {
        return for_each_subspace(k, t.n(), d, [&](const Subspace<PrimeField>& B) { return try_pair(A, B); });
      });
    }
  }
  res.nodes = budget.spent();
  res.status = found ? SearchStatus::found : (budget.exhausted() ? SearchStatus::unknown : SearchStatus::absent);
  return res;
}

// ---------------------------------------------------------------------------
// Linear acyclicity by enumeration

struct LinearAcyclicity {
  Decision acyclic = Decision::unknown;
  // first g with g ≠ f and f ~ g, with its φ; g may still be a scalar multiple of f
  std::optional<LinearMap<PrimeField>> equivalent_g, equivalent_phi;
  bool equivalent_g_is_scalar = false;
  std::uint64_t strong_matchings = 0;
  std::uint64_t nodes = 0;
};

/// f is linear acyclic iff every strong g with f ~ g lies in K·f. All
/// isomorphisms A → B are enumerated as candidates g, and all automorphisms
/// of A as candidates φ.
inline LinearAcyclicity is_linear_acyclic(const FiniteTower& t, const LinearMap<PrimeField>& f, Budget budget) {
  const auto& k = t.scalars();
  if (!is_isomorphism(k, f)) throw Error(ErrorCode::invalid_argument, "f is not an isomorphism");
  LinearAcyclicity res;
  const auto& A = f.domain;
  const auto& B = f.codomain;
  const bool all_strong = strong_matching_exists(t, A, B);
  const auto qf = quadratic_coefficients(t, f, nullptr);
  const auto q = k.size().value_or(0);
  const bool by_coefficients = q >= 5;
  std::vector<LinearMap<PrimeField>> phis;
  for_each_invertible_matrix(k, A.dim(), [&](const std::vector<Vec<PrimeField>>& M) {
    phis.push_back(map_from_matrix(k, A, A, M));
    return true;
  });
  bool acyclic = true;
  const bool complete = for_each_invertible_matrix(k, A.dim(), [&](const std::vector<Vec<PrimeField>>& M) {
    if (!budget.spend()) return false;
    const auto g = map_from_matrix(k, A, B, M);
    if (!all_strong && is_strong_matching(t, g, MatchMode::exhaustive(), Budget(budget)).strong != Decision::yes)
      return true;
    ++res.strong_matchings;
    for (const auto& phi : phis) {
      if (!budget.spend()) return false;
      const bool eq = by_coefficients ? quadratic_coefficients(t, g, &phi) == qf : quad_map_equal(t, f, phi, g);
      if (!eq) continue;
      const bool scalar = scalar_ratio(k, g, f).has_value();
      if (!(g == f) && (!res.equivalent_g || (res.equivalent_g_is_scalar && !scalar))) {
        res.equivalent_g = g;
        res.equivalent_phi = phi;
        res.equivalent_g_is_scalar = scalar;
      }
      if (!scalar) acyclic = false;
      break;
    }
    return true;
  });
  res.nodes = budget.spent();
  if (!acyclic)
    res.acyclic = Decision::no;
  else
    res.acyclic = complete ? Decision::yes : Decision::unknown;
  return res;
}

}  // namespace amatch
