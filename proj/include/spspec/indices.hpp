#pragma once

/**
 * @file indices.hpp
 * @brief Multi-indices, size functions and hyperbolic-cross index sets.
 *
 * A sparse set is the collection of p-tuples (j_1,...,j_p) of lattice points
 * with size(l)^alpha * size(j_1) * ... * size(j_p) <= N for a fixed output
 * index l.  Enumeration walks the set by budgeted descent (each chosen index
 * divides the remaining budget), so the cost is proportional to the set and
 * not to the enclosing p-fold box.  Counting uses the same recursion on
 * cumulative shell counts and never enumerates.
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace spspec {

using Coord = std::int64_t;

/// Z^d or N^d.
enum class Lattice { Integers, Naturals };

enum class SizeKind { MaxNorm, ProdNorm };

class MultiIndex
{
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<Coord> coords)
      : coords_(std::move(coords))
  {
  }
  MultiIndex(std::initializer_list<Coord> coords)
      : coords_(coords)
  {
  }
  explicit MultiIndex(std::span<const Coord> coords)
      : coords_(coords.begin(), coords.end())
  {
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  Coord operator[](std::size_t n) const { return coords_[n]; }
  std::span<const Coord> coords() const noexcept { return coords_; }

  /// Lexicographic.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const
  {
    std::string s = "(";
    for (std::size_t n = 0; n < coords_.size(); ++n) {
      if (n)
        s += ',';
      s += std::to_string(coords_[n]);
    }
    return s + ")";
  }

 private:
  std::vector<Coord> coords_;
};

struct MultiIndexHash
{
  std::size_t operator()(const MultiIndex& j) const noexcept
  {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (Coord c : j.coords())
      h ^= std::hash<Coord>{}(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

inline bool in_lattice(std::span<const Coord> j, Lattice lattice)
{
  return lattice == Lattice::Integers
         || std::all_of(j.begin(), j.end(), [](Coord c) { return c >= 0; });
}

/// max(1, |j^1|, ..., |j^d|)
inline Coord max_norm(std::span<const Coord> j)
{
  Coord m = 1;
  for (Coord c : j)
    m = std::max(m, c < 0 ? -c : c);
  return m;
}
inline Coord max_norm(const MultiIndex& j) { return max_norm(j.coords()); }

/// prod_n (1 + |j^n|); throws CountOverflow if the product leaves int64.
inline Coord prod_norm(std::span<const Coord> j)
{
  Coord m = 1;
  for (Coord c : j) {
    Coord f = 1 + (c < 0 ? -c : c);
    if (__builtin_mul_overflow(m, f, &m))
      throw CountOverflow("prod_norm overflows int64");
  }
  return m;
}
inline Coord prod_norm(const MultiIndex& j) { return prod_norm(j.coords()); }

inline Coord size_of(SizeKind kind, std::span<const Coord> j)
{
  return kind == SizeKind::MaxNorm ? max_norm(j) : prod_norm(j);
}
inline Coord size_of(SizeKind kind, const MultiIndex& j) { return size_of(kind, j.coords()); }

/// l - j_1 - ... - j_p, always computed in Z^d.
inline MultiIndex momentum(const MultiIndex& ell, std::span<const MultiIndex> js)
{
  std::vector<Coord> m(ell.coords().begin(), ell.coords().end());
  for (const auto& j : js) {
    if (j.dim() != ell.dim())
      throw ValidationError("momentum: dimension mismatch " + ell.str() + " vs " + j.str());
    for (std::size_t n = 0; n < m.size(); ++n)
      m[n] -= j[n];
  }
  return MultiIndex(std::move(m));
}

/**
 * @brief Read-only view of a p-tuple of d-dimensional indices stored flat.
 */
class IndexTuple
{
 public:
  IndexTuple(std::span<const Coord> flat, std::size_t dim)
      : flat_(flat)
      , dim_(dim)
  {
  }

  std::size_t arity() const noexcept { return dim_ ? flat_.size() / dim_ : 0; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const Coord> operator[](std::size_t i) const { return flat_.subspan(i * dim_, dim_); }
  std::span<const Coord> flat() const noexcept { return flat_; }

  std::vector<MultiIndex> materialize() const
  {
    std::vector<MultiIndex> out;
    out.reserve(arity());
    for (std::size_t i = 0; i < arity(); ++i)
      out.emplace_back((*this)[i]);
    return out;
  }

 private:
  std::span<const Coord> flat_;
  std::size_t dim_;
};

struct SparseSetSpec
{
  int p = 2;
  Coord N = 1;
  int alpha = 0;
  SizeKind size = SizeKind::MaxNorm;
  Lattice lattice = Lattice::Integers;
  std::size_t dim = 1;
  /// Per-index cap size(j) <= M; absent means unbounded.
  std::optional<Coord> boxM;

  void validate() const
  {
    if (p < 1)
      throw ValidationError("sparse set: p must be >= 1");
    if (N < 1)
      throw ValidationError("sparse set: N must be >= 1");
    if (alpha != 0 && alpha != 1)
      throw ValidationError("sparse set: alpha must be 0 or 1");
    if (dim < 1)
      throw ValidationError("sparse set: dimension must be >= 1");
    if (boxM && *boxM < 1)
      throw ValidationError("sparse set: box cap M must be >= 1");
  }

  /// Budget left for the tuple once l is fixed, or nullopt when l admits no tuple.
  std::optional<Coord> tuple_budget(std::span<const Coord> ell) const
  {
    if (ell.size() != dim)
      throw ValidationError("sparse set: output index has wrong dimension");
    if (!in_lattice(ell, lattice))
      return std::nullopt;
    Coord s = size_of(size, ell);
    if (boxM && s > *boxM)
      return std::nullopt;
    if (alpha == 0)
      return N;
    if (s > N)
      return std::nullopt;
    return N / s;
  }

  bool contains(std::span<const Coord> ell, const IndexTuple& js) const
  {
    auto budget = tuple_budget(ell);
    if (!budget || js.arity() != static_cast<std::size_t>(p))
      return false;
    Coord prod = 1;
    for (std::size_t i = 0; i < js.arity(); ++i) {
      if (!in_lattice(js[i], lattice))
        return false;
      Coord s = size_of(size, js[i]);
      if (boxM && s > *boxM)
        return false;
      if (__builtin_mul_overflow(prod, s, &prod) || prod > *budget)
        return false;
    }
    return true;
  }
};

namespace detail {

/// Inclusive coordinate box restricting one index during a walk.
struct CoordBox
{
  std::vector<Coord> lo, hi;
};

/**
 * Budgeted lexicographic descent over `count` consecutive d-dimensional
 * indices.  `accept(i, j_i)` may prune a subtree once index i is complete;
 * `leaf(budget)` receives the budget left after all indices are chosen.
 */
template <class Accept, class Leaf>
class SparseWalker
{
 public:
  SparseWalker(const SparseSetSpec& spec, std::size_t count, std::span<const CoordBox> boxes,
               std::vector<Coord>& flat, Accept& accept, Leaf& leaf)
      : spec_(spec)
      , count_(count)
      , boxes_(boxes)
      , flat_(flat)
      , accept_(accept)
      , leaf_(leaf)
  {
    flat_.assign(count_ * spec_.dim, 0);
  }

  void run(Coord budget) { index(0, budget); }

 private:
  void index(std::size_t i, Coord budget)
  {
    if (i == count_) {
      leaf_(budget);
      return;
    }
    Coord cap = spec_.boxM ? std::min(budget, *spec_.boxM) : budget;
    coord(i, 0, cap, 1, budget);
  }

  void coord(std::size_t i, std::size_t n, Coord cap, Coord partial, Coord budget)
  {
    const std::size_t d = spec_.dim;
    if (n == d) {
      if (!accept_(i, std::span<const Coord>(flat_.data() + i * d, d)))
        return;
      index(i + 1, budget / partial);
      return;
    }
    // partial <= cap holds on entry; reach is the largest |c| allowed here.
    const bool maxn = spec_.size == SizeKind::MaxNorm;
    Coord reach = maxn ? cap : cap / partial - 1;
    Coord lo = spec_.lattice == Lattice::Naturals ? 0 : -reach;
    Coord hi = reach;
    if (!boxes_.empty()) {
      lo = std::max(lo, boxes_[i].lo[n]);
      hi = std::min(hi, boxes_[i].hi[n]);
    }
    Coord* slot = flat_.data() + i * d + n;
    for (Coord c = lo; c <= hi; ++c) {
      *slot = c;
      Coord a = c < 0 ? -c : c;
      coord(i, n + 1, cap, maxn ? std::max(partial, a) : partial * (1 + a), budget);
    }
  }

  const SparseSetSpec& spec_;
  std::size_t count_;
  std::span<const CoordBox> boxes_;
  std::vector<Coord>& flat_;
  Accept& accept_;
  Leaf& leaf_;
};

template <class Accept, class Leaf>
void walk_sparse(const SparseSetSpec& spec, std::size_t count, Coord budget,
                 std::span<const CoordBox> boxes, std::vector<Coord>& flat, Accept& accept,
                 Leaf& leaf)
{
  SparseWalker<Accept, Leaf>(spec, count, boxes, flat, accept, leaf).run(budget);
}

}  // namespace detail

/**
 * @brief Calls f(IndexTuple) for every tuple of the sparse set attached to `ell`,
 * in lexicographic order of (j_1, ..., j_p).
 */
template <class F>
void for_each_sparse(const SparseSetSpec& spec, std::span<const Coord> ell, F&& f)
{
  spec.validate();
  auto budget = spec.tuple_budget(ell);
  if (!budget)
    return;
  std::vector<Coord> flat;
  auto accept = [](std::size_t, std::span<const Coord>) { return true; };
  auto leaf = [&](Coord) { f(IndexTuple(flat, spec.dim)); };
  detail::walk_sparse(spec, static_cast<std::size_t>(spec.p), *budget, {}, flat, accept, leaf);
}

template <class F>
void for_each_sparse(const SparseSetSpec& spec, const MultiIndex& ell, F&& f)
{
  for_each_sparse(spec, ell.coords(), std::forward<F>(f));
}

inline std::vector<std::vector<MultiIndex>> enumerate_sparse(const SparseSetSpec& spec,
                                                             const MultiIndex& ell)
{
  std::vector<std::vector<MultiIndex>> out;
  for_each_sparse(spec, ell, [&](const IndexTuple& t) { out.push_back(t.materialize()); });
  return out;
}

/// All lattice points with size(j) <= bound (and <= boxM), lexicographic.
inline std::vector<MultiIndex> size_ball(const SparseSetSpec& spec, Coord bound)
{
  SparseSetSpec one = spec;
  one.p = 1;
  one.alpha = 0;
  one.N = bound;
  std::vector<MultiIndex> out;
  std::vector<Coord> flat;
  auto accept = [](std::size_t, std::span<const Coord>) { return true; };
  auto leaf = [&](Coord) { out.emplace_back(std::span<const Coord>(flat)); };
  if (bound >= 1)
    detail::walk_sparse(one, 1, bound, {}, flat, accept, leaf);
  return out;
}

// --- counting -------------------------------------------------------------

using Count = unsigned __int128;

inline Count checked_mul(Count a, Count b)
{
  Count r;
  if (__builtin_mul_overflow(a, b, &r))
    throw CountOverflow("sparse count exceeds 128 bits");
  return r;
}
inline Count checked_add(Count a, Count b)
{
  Count r;
  if (__builtin_add_overflow(a, b, &r))
    throw CountOverflow("sparse count exceeds 128 bits");
  return r;
}

inline std::string to_string(Count c)
{
  if (c == 0)
    return "0";
  std::string s;
  while (c) {
    s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  return {s.rbegin(), s.rend()};
}

inline double to_double(Count c) { return static_cast<double>(c); }

namespace detail {

class SparseCounter
{
 public:
  explicit SparseCounter(const SparseSetSpec& spec)
      : spec_(spec)
  {
  }

  /// Number of single indices with size <= s.
  Count shell_cumulative(Coord s)
  {
    if (s < 1)
      return 0;
    if (spec_.boxM)
      s = std::min(s, *spec_.boxM);
    const bool z = spec_.lattice == Lattice::Integers;
    if (spec_.size == SizeKind::MaxNorm) {
      Count side = z ? Count(2 * s + 1) : Count(s + 1);
      Count r = 1;
      for (std::size_t n = 0; n < spec_.dim; ++n)
        r = checked_mul(r, side);
      return r;
    }
    return prod_cumulative(spec_.dim, s);
  }

  /// Number of k-tuples with product of sizes <= budget.
  Count tuples(std::size_t k, Coord budget)
  {
    if (budget < 1)
      return 0;
    if (k == 0)
      return 1;
    auto key = std::make_pair(k, budget);
    if (auto it = memo_.find(key); it != memo_.end())
      return it->second;
    Count total = 0;
    Coord top = spec_.boxM ? std::min(budget, *spec_.boxM) : budget;
    for (Coord s = 1; s <= top;) {
      Coord q = budget / s;
      Coord s_hi = std::min(top, budget / q);
      Count shell = shell_cumulative(s_hi) - shell_cumulative(s - 1);
      total = checked_add(total, checked_mul(shell, tuples(k - 1, q)));
      s = s_hi + 1;
    }
    memo_.emplace(key, total);
    return total;
  }

 private:
  // #{c in lattice^dims : prod (1+|c^n|) <= s}; one coordinate has 1 point of
  // factor 1 and 2 (Z) or 1 (N) points of each factor f >= 2.
  Count prod_cumulative(std::size_t dims, Coord s)
  {
    if (s < 1)
      return 0;
    if (dims == 0)
      return 1;
    auto key = std::make_pair(dims, s);
    if (auto it = prod_memo_.find(key); it != prod_memo_.end())
      return it->second;
    const bool z = spec_.lattice == Lattice::Integers;
    auto mult_cum = [z](Coord f) -> Count { return f < 1 ? 0 : (z ? Count(2 * f - 1) : Count(f)); };
    Count total = 0;
    for (Coord f = 1; f <= s;) {
      Coord q = s / f;
      Coord f_hi = s / q;
      total = checked_add(total,
                          checked_mul(mult_cum(f_hi) - mult_cum(f - 1), prod_cumulative(dims - 1, q)));
      f = f_hi + 1;
    }
    prod_memo_.emplace(key, total);
    return total;
  }

  SparseSetSpec spec_;
  std::map<std::pair<std::size_t, Coord>, Count> memo_;
  std::map<std::pair<std::size_t, Coord>, Count> prod_memo_;
};

}  // namespace detail

/**
 * @brief Exact cardinality of the sparse set.
 *
 * include_ell == false counts tuples attached to one output index of size 1.
 * include_ell == true counts pairs (l, tuple); with alpha == 0 this requires
 * boxM since l is otherwise unconstrained.
 */
inline Count count_sparse(const SparseSetSpec& spec, bool include_ell)
{
  spec.validate();
  detail::SparseCounter counter(spec);
  const auto p = static_cast<std::size_t>(spec.p);
  if (!include_ell)
    return counter.tuples(p, spec.N);
  if (spec.alpha == 1)
    return counter.tuples(p + 1, spec.N);
  if (!spec.boxM)
    throw ValidationError("count_sparse: alpha = 0 with free output index needs a box cap M");
  return checked_mul(counter.shell_cumulative(*spec.boxM), counter.tuples(p, spec.N));
}

/**
 * @brief Pairs (l, tuple) with alpha = 0 whose momentum satisfies ||M(l,j)|| <= q (Z^d).
 * Each tuple admits exactly (2q+1)^d output indices.
 */
inline Count count_momentum_restricted(const SparseSetSpec& spec, Coord q)
{
  spec.validate();
  if (spec.lattice != Lattice::Integers)
    throw ValidationError("momentum-restricted count is defined on Z^d");
  if (q < 0)
    throw ValidationError("momentum radius must be >= 0");
  SparseSetSpec s = spec;
  s.alpha = 0;
  Count per_tuple = 1;
  for (std::size_t n = 0; n < spec.dim; ++n)
    per_tuple = checked_mul(per_tuple, Count(2 * q + 1));
  return checked_mul(per_tuple, detail::SparseCounter(s).tuples(static_cast<std::size_t>(s.p), s.N));
}

}  // namespace spspec
