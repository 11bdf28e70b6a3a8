#pragma once

/**
 * @file coeffs.hpp
 * @brief Coefficient providers a_{l; j_1 ... j_p} for the Fourier and Hermite bases.
 *
 * A provider hands out a kernel for a given arity p.  Kernels answer
 * coefficient(l, js); Fourier kernels also expose the finite momentum support
 * of the symbol b so evaluators can solve for the last index instead of
 * scanning for it, and Hermite kernels flag parity zeros.
 */

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <concepts>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "indices.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace spspec {

// --- Fourier ------------------------------------------------------------------

/// Fourier coefficients b_k of the multiplier b(x) on T^d.
struct FourierSymbol
{
  std::size_t dim = 1;
  std::map<MultiIndex, Scalar> b;
  /// Largest max-norm of k with b_k != 0 (0 for b = const).
  Coord q = 0;
  /// |b_k| <= D e^{-rho |k|} when known.
  std::optional<double> decay_D;
  std::optional<double> decay_rho;

  /// b(x) = 1.
  static FourierSymbol unit(std::size_t d = 1)
  {
    FourierSymbol s;
    s.dim = d;
    s.b.emplace(MultiIndex(std::vector<Coord>(d, 0)), Scalar(1.0));
    s.q = 0;
    s.decay_D = 1.0;
    s.decay_rho = 0.0;
    return s;
  }

  /**
   * @brief b(x) = prod_n 1/(2 - cos x^n).
   *
   * In one variable b_k = r^{|k|}/sqrt(3) with r = 2 - sqrt(3); the table keeps
   * entries with |b_k| >= cutoff.
   */
  static FourierSymbol analytic_example(std::size_t d = 1, double cutoff = 1e-16)
  {
    const double r = 2.0 - std::sqrt(3.0);
    const double b0 = 1.0 / std::sqrt(3.0);
    double b0d = std::pow(b0, static_cast<double>(d));
    FourierSymbol s;
    s.dim = d;
    // max |k| along one axis with the others at 0
    Coord reach = 0;
    while (b0d * std::pow(r, static_cast<double>(reach + 1)) >= cutoff)
      ++reach;
    SparseSetSpec box;
    box.dim = d;
    for (const auto& k : size_ball(box, std::max<Coord>(reach, 1))) {
      Coord l1 = 0;
      for (Coord c : k.coords())
        l1 += c < 0 ? -c : c;
      double v = b0d * std::pow(r, static_cast<double>(l1));
      if (v >= cutoff) {
        s.b.emplace(k, Scalar(v));
        for (Coord c : k.coords())
          s.q = std::max(s.q, c < 0 ? -c : c);
      }
    }
    s.decay_D = b0d;
    s.decay_rho = -std::log(r);
    return s;
  }

  Scalar at(const MultiIndex& m) const
  {
    auto it = b.find(m);
    return it == b.end() ? Scalar{} : it->second;
  }
};

/// a_{l;j} = b_{M(l,j)}
inline Scalar fourier_coefficient(const FourierSymbol& sym, const MultiIndex& ell,
                                  std::span<const MultiIndex> js)
{
  if (ell.dim() != sym.dim)
    throw ValidationError("fourier_coefficient: symbol dimension mismatch");
  return sym.at(momentum(ell, js));
}

struct MomentumEntry
{
  std::vector<Coord> m;
  Scalar b;
};

class FourierKernel
{
 public:
  explicit FourierKernel(std::shared_ptr<const FourierSymbol> sym)
      : sym_(std::move(sym))
  {
    for (const auto& [m, v] : sym_->b)
      if (v != Scalar{})
        support_.push_back({std::vector<Coord>(m.coords().begin(), m.coords().end()), v});
    // Descending m makes the solved last index ascend lexicographically.
    std::reverse(support_.begin(), support_.end());
  }

  Scalar coefficient(std::span<const Coord> ell, const IndexTuple& js) const
  {
    std::vector<Coord> m(ell.begin(), ell.end());
    for (std::size_t i = 0; i < js.arity(); ++i)
      for (std::size_t n = 0; n < m.size(); ++n)
        m[n] -= js[i][n];
    return sym_->at(MultiIndex(std::move(m)));
  }

  const std::vector<MomentumEntry>& momentum_support() const noexcept { return support_; }

 private:
  std::shared_ptr<const FourierSymbol> sym_;
  std::vector<MomentumEntry> support_;
};

class FourierProvider
{
 public:
  explicit FourierProvider(FourierSymbol sym = FourierSymbol::unit())
      : sym_(std::make_shared<const FourierSymbol>(std::move(sym)))
  {
  }

  BasisTag basis() const { return BasisTag::fourier(sym_->dim); }
  const FourierSymbol& symbol() const noexcept { return *sym_; }

  FourierKernel kernel(int /*p*/) const { return FourierKernel(sym_); }

  /// Plain products for the inner folds of the iterative evaluator.
  FourierProvider intermediate() const { return FourierProvider(FourierSymbol::unit(sym_->dim)); }

 private:
  std::shared_ptr<const FourierSymbol> sym_;
};

// --- Hermite --------------------------------------------------------------------

class CacheBuildError : public std::runtime_error
{
 public:
  CacheBuildError(const std::string& what, std::size_t partial)
      : std::runtime_error(what + " (" + std::to_string(partial) + " coefficients computed)")
      , partial_(partial)
  {
  }
  std::size_t partial_count() const noexcept { return partial_; }

 private:
  std::size_t partial_;
};

namespace detail {

/// Values chi_k(x_i / sqrt(c)) for k <= D at the nodes of one rule.
class ProductTable
{
 public:
  ProductTable(NodePolicy policy, std::size_t factors, std::size_t max_degree)
      : rule_(cached_rule(node_count(policy, factors, max_degree)))
      , width_(max_degree + 1)
      , inv_sqrt_c_(1.0 / std::sqrt(static_cast<double>(factors) / 2.0))
      , values_(rule_->size() * width_)
  {
    for (std::size_t i = 0; i < rule_->size(); ++i)
      hermite_batch(rule_->nodes[i] * inv_sqrt_c_, std::span<double>(values_.data() + i * width_, width_));
  }

  double integrate(std::span<const std::size_t> degrees) const
  {
    double total = 0.0;
    for (std::size_t i = 0; i < rule_->size(); ++i) {
      const double* row = values_.data() + i * width_;
      double prod = rule_->scaled_weights[i];
      for (std::size_t d : degrees)
        prod *= row[d];
      total += prod;
    }
    return total * inv_sqrt_c_;
  }

 private:
  std::shared_ptr<const QuadratureRule> rule_;
  std::size_t width_;
  double inv_sqrt_c_;
  std::vector<double> values_;
};

/// Sorted index tuple packed 16 bits per slot, first index most significant.
struct PackedKey
{
  unsigned __int128 bits = 0;
  friend bool operator==(const PackedKey&, const PackedKey&) = default;
  friend auto operator<=>(const PackedKey& a, const PackedKey& b)
  {
    return a.bits < b.bits ? std::strong_ordering::less
                           : (a.bits == b.bits ? std::strong_ordering::equal : std::strong_ordering::greater);
  }
};

struct PackedKeyHash
{
  std::size_t operator()(const PackedKey& k) const noexcept
  {
    auto lo = static_cast<std::uint64_t>(k.bits);
    auto hi = static_cast<std::uint64_t>(k.bits >> 64);
    std::uint64_t h = lo * 0x9e3779b97f4a7c15ull ^ (hi + 0x632be59bd9b4e019ull + (lo << 6) + (lo >> 2));
    h ^= h >> 29;
    return static_cast<std::size_t>(h * 0xbf58476d1ce4e5b9ull);
  }
};

}  // namespace detail

/**
 * @brief Memo table of a_{l;j_1..j_p} = \int chi_l chi_{j_1} ... chi_{j_p} dx.
 *
 * Stored under the sorted (p+1)-tuple; odd-parity tuples are exact zeros and
 * never stored.  Missing entries are computed on first request.  Lookups may
 * run concurrently; insertion takes an exclusive lock and recomputation of the
 * same key by two threads yields the same bits.
 */
class HermiteCache
{
 public:
  static constexpr int kMaxArity = 7;
  static constexpr Coord kMaxIndex = 0xffff;

  explicit HermiteCache(int p, NodePolicy policy = NodePolicy::Standard)
      : p_(p)
      , policy_(policy)
      , mutex_(std::make_unique<std::shared_mutex>())
  {
    if (p < 1 || p > kMaxArity)
      throw ValidationError("Hermite cache arity must be in [1, " + std::to_string(kMaxArity) + "]");
  }

  HermiteCache(const HermiteCache& o)
      : p_(o.p_)
      , policy_(o.policy_)
      , mutex_(std::make_unique<std::shared_mutex>())
  {
    std::shared_lock lock(*o.mutex_);
    jmax_ = o.jmax_;
    table_ = o.table_;
  }
  HermiteCache& operator=(const HermiteCache& o)
  {
    if (this != &o) {
      HermiteCache tmp(o);
      *this = std::move(tmp);
    }
    return *this;
  }
  HermiteCache(HermiteCache&&) noexcept = default;
  HermiteCache& operator=(HermiteCache&&) noexcept = default;

  int arity() const noexcept { return p_; }
  NodePolicy policy() const noexcept { return policy_; }
  /// Largest index present, -1 when empty.
  Coord jmax() const
  {
    std::shared_lock lock(*mutex_);
    return jmax_;
  }
  std::size_t size() const
  {
    std::shared_lock lock(*mutex_);
    return table_.size();
  }

  /// Coefficient for p+1 indices in any order.
  double coefficient(std::span<const Coord> indices) const
  {
    std::array<Coord, kMaxArity + 1> sorted{};
    const std::size_t len = sort_key(indices, sorted);
    if (parity_odd(sorted, len))
      return 0.0;
    detail::PackedKey key = pack(sorted, len);
    {
      std::shared_lock lock(*mutex_);
      if (auto it = table_.find(key); it != table_.end())
        return it->second;
    }
    std::array<std::size_t, kMaxArity + 1> degrees{};
    for (std::size_t i = 0; i < len; ++i)
      degrees[i] = static_cast<std::size_t>(sorted[i]);
    double v = hermite_product_integral(std::span<const std::size_t>(degrees.data(), len), policy_);
    insert_packed(key, sorted[len - 1], v);
    return v;
  }

  bool contains(std::span<const Coord> indices) const
  {
    std::array<Coord, kMaxArity + 1> sorted{};
    const std::size_t len = sort_key(indices, sorted);
    std::shared_lock lock(*mutex_);
    return table_.count(pack(sorted, len)) > 0;
  }

  /// Stores a value for the tuple (any order); odd parity is rejected.
  void insert(std::span<const Coord> indices, double value)
  {
    std::array<Coord, kMaxArity + 1> sorted{};
    const std::size_t len = sort_key(indices, sorted);
    if (parity_odd(sorted, len))
      throw ValidationError("Hermite cache: odd-parity tuples are exact zeros and not stored");
    insert_packed(pack(sorted, len), sorted[len - 1], value);
  }

  /// Packed sorted key of p+1 indices, nullopt for odd parity.
  std::optional<detail::PackedKey> key_of(std::span<const Coord> indices) const
  {
    std::array<Coord, kMaxArity + 1> sorted{};
    const std::size_t len = sort_key(indices, sorted);
    if (parity_odd(sorted, len))
      return std::nullopt;
    return pack(sorted, len);
  }

  bool contains_key(detail::PackedKey key) const
  {
    std::shared_lock lock(*mutex_);
    return table_.count(key) > 0;
  }

  /**
   * @brief Computes the given keys that are not stored yet, one shared table of
   * Hermite values per largest index.  Returns the number computed.
   */
  std::size_t compute_missing(std::vector<detail::PackedKey> keys) const
  {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    const std::size_t len = static_cast<std::size_t>(p_) + 1;
    std::map<Coord, std::vector<detail::PackedKey>> by_top;
    for (const auto& k : keys)
      if (!contains_key(k))
        by_top[static_cast<Coord>(k.bits & 0xffff)].push_back(k);
    std::size_t done = 0;
    std::vector<std::size_t> degrees(len);
    for (const auto& [top, group] : by_top) {
      detail::ProductTable table(policy_, len, static_cast<std::size_t>(top));
      for (const auto& k : group) {
        auto coords = unpack(k, len);
        for (std::size_t i = 0; i < len; ++i)
          degrees[i] = static_cast<std::size_t>(coords[i]);
        insert_packed(k, top, table.integrate(degrees));
        ++done;
      }
    }
    return done;
  }

  /// Entries as (sorted tuple, value), keys in lexicographic order.
  std::vector<std::pair<std::vector<Coord>, double>> sorted_entries() const
  {
    std::vector<std::pair<detail::PackedKey, double>> raw;
    {
      std::shared_lock lock(*mutex_);
      raw.assign(table_.begin(), table_.end());
    }
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::vector<Coord>, double>> out;
    out.reserve(raw.size());
    const std::size_t len = static_cast<std::size_t>(p_) + 1;
    for (const auto& [k, v] : raw)
      out.emplace_back(unpack(k, len), v);
    return out;
  }

  friend bool operator==(const HermiteCache& a, const HermiteCache& b)
  {
    if (a.p_ != b.p_ || a.policy_ != b.policy_ || a.jmax() != b.jmax())
      return false;
    auto ea = a.sorted_entries();
    auto eb = b.sorted_entries();
    if (ea.size() != eb.size())
      return false;
    for (std::size_t i = 0; i < ea.size(); ++i)
      if (ea[i].first != eb[i].first
          || std::bit_cast<std::uint64_t>(ea[i].second) != std::bit_cast<std::uint64_t>(eb[i].second))
        return false;
    return true;
  }

 private:
  std::size_t sort_key(std::span<const Coord> indices, std::array<Coord, kMaxArity + 1>& out) const
  {
    const std::size_t len = static_cast<std::size_t>(p_) + 1;
    if (indices.size() != len)
      throw ValidationError("Hermite cache of arity " + std::to_string(p_) + " expects "
                            + std::to_string(len) + " indices");
    for (std::size_t i = 0; i < len; ++i) {
      if (indices[i] < 0 || indices[i] > kMaxIndex)
        throw ValidationError("Hermite index " + std::to_string(indices[i]) + " out of range");
      out[i] = indices[i];
    }
    // insertion sort: len <= 8
    for (std::size_t i = 1; i < len; ++i)
      for (std::size_t k = i; k > 0 && out[k - 1] > out[k]; --k)
        std::swap(out[k - 1], out[k]);
    return len;
  }

  static bool parity_odd(const std::array<Coord, kMaxArity + 1>& s, std::size_t len)
  {
    Coord sum = 0;
    for (std::size_t i = 0; i < len; ++i)
      sum += s[i];
    return (sum & 1) != 0;
  }

  static detail::PackedKey pack(const std::array<Coord, kMaxArity + 1>& s, std::size_t len)
  {
    detail::PackedKey k;
    for (std::size_t i = 0; i < len; ++i)
      k.bits = (k.bits << 16) | static_cast<unsigned __int128>(s[i]);
    return k;
  }

  static std::vector<Coord> unpack(detail::PackedKey k, std::size_t len)
  {
    std::vector<Coord> out(len);
    for (std::size_t i = len; i-- > 0;) {
      out[i] = static_cast<Coord>(k.bits & 0xffff);
      k.bits >>= 16;
    }
    return out;
  }

  void insert_packed(detail::PackedKey key, Coord top, double v) const
  {
    std::unique_lock lock(*mutex_);
    table_.emplace(key, v);
    jmax_ = std::max(jmax_, top);
  }

  int p_;
  NodePolicy policy_;
  std::unique_ptr<std::shared_mutex> mutex_;
  mutable Coord jmax_ = -1;
  mutable std::unordered_map<detail::PackedKey, double, detail::PackedKeyHash> table_;

  friend HermiteCache build_cache(int, Coord, NodePolicy, std::size_t);
};

/// a_{l; j_1..j_p}; the cache arity must equal js.size().
inline double hermite_coefficient(const HermiteCache& cache, Coord ell, std::span<const Coord> js)
{
  std::array<Coord, HermiteCache::kMaxArity + 1> all{};
  if (js.size() + 1 > all.size())
    throw ValidationError("hermite_coefficient: too many indices");
  all[0] = ell;
  std::copy(js.begin(), js.end(), all.begin() + 1);
  return cache.coefficient(std::span<const Coord>(all.data(), js.size() + 1));
}

/**
 * @brief Computes every even-parity sorted tuple with indices <= jmax.
 *
 * Tuples sharing the same largest index share one table of Hermite values at
 * the policy's nodes, so the bulk values are bit-identical to on-demand ones.
 */
inline HermiteCache build_cache(int p, Coord jmax, NodePolicy policy = NodePolicy::Standard,
                                std::size_t max_entries = static_cast<std::size_t>(-1))
{
  if (p < 2)
    throw ValidationError("build_cache: p must be >= 2");
  if (jmax < 0 || jmax > HermiteCache::kMaxIndex)
    throw ValidationError("build_cache: jmax out of range");
  HermiteCache cache(p, policy);
  const std::size_t len = static_cast<std::size_t>(p) + 1;
  std::vector<std::size_t> tuple(len);
  std::vector<Coord> coords(len);
  std::size_t count = 0;
  try {
    for (Coord top = 0; top <= jmax; ++top) {
      detail::ProductTable table(policy, len, static_cast<std::size_t>(top));
      tuple[len - 1] = static_cast<std::size_t>(top);
      // nondecreasing prefixes of length len-1 bounded by top
      auto rec = [&](auto&& self, std::size_t i, std::size_t lo) -> void {
        if (i == len - 1) {
          std::size_t sum = 0;
          for (std::size_t v : tuple)
            sum += v;
          if (sum % 2)
            return;
          if (count >= max_entries)
            throw CacheBuildError("Hermite cache entry limit reached", count);
          for (std::size_t k = 0; k < len; ++k)
            coords[k] = static_cast<Coord>(tuple[k]);
          cache.insert(coords, table.integrate(tuple));
          ++count;
          return;
        }
        for (std::size_t v = lo; v <= static_cast<std::size_t>(top); ++v) {
          tuple[i] = v;
          self(self, i + 1, v);
        }
      };
      rec(rec, 0, 0);
    }
  } catch (const std::bad_alloc&) {
    throw CacheBuildError("out of memory while building Hermite cache", count);
  } catch (const QuadratureError& e) {
    throw CacheBuildError(e.what(), count);
  }
  return cache;
}

// --- cache file -------------------------------------------------------------------

inline constexpr const char* kCacheMagic = "SPSPEC-HERMITE";

inline void save_cache(const HermiteCache& cache, std::ostream& os)
{
  os << kCacheMagic << " v1 p=" << cache.arity() << " jmax=" << cache.jmax()
     << " policy=" << policy_id(cache.policy()) << '\n';
  for (const auto& [key, v] : cache.sorted_entries()) {
    for (std::size_t i = 0; i < key.size(); ++i)
      os << (i ? " " : "") << key[i];
    os << '\t' << format_double(v) << '\n';
  }
}

inline void save_cache(const HermiteCache& cache, const std::filesystem::path& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::runtime_error("cannot write " + path.string());
  save_cache(cache, os);
  if (!os)
    throw std::runtime_error("write failed for " + path.string());
}

namespace detail {

inline std::string header_field(std::string_view tok, std::string_view name, std::size_t line)
{
  if (tok.substr(0, name.size()) != name || tok.size() <= name.size() || tok[name.size()] != '=')
    throw FormatError("cache header: expected " + std::string(name) + "=...", line);
  return std::string(tok.substr(name.size() + 1));
}

inline Coord parse_int(const std::string& s, std::size_t line)
{
  Coord v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("bad integer '" + s + "'", line);
  return v;
}

}  // namespace detail

inline HermiteCache load_cache(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
    throw FormatError("empty cache file", 1);
  auto head = detail::split(line, ' ');
  if (head.size() != 5 || head[0] != kCacheMagic)
    throw FormatError("not a Hermite cache file (bad magic)", 1);
  if (head[1] != "v1")
    throw FormatError("unsupported cache version '" + std::string(head[1]) + "'", 1);
  Coord p = detail::parse_int(detail::header_field(head[2], "p", 1), 1);
  Coord jmax = detail::parse_int(detail::header_field(head[3], "jmax", 1), 1);
  NodePolicy policy;
  try {
    policy = parse_policy_id(detail::header_field(head[4], "policy", 1));
  } catch (const ValidationError& e) {
    throw FormatError(e.what(), 1);
  }
  if (p < 1 || p > HermiteCache::kMaxArity)
    throw FormatError("cache header: arity out of range", 1);
  HermiteCache cache(static_cast<int>(p), policy);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty())
      continue;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 2)
      throw FormatError("expected key<TAB>value", lineno);
    auto key = detail::parse_coords(fields[0], lineno);
    if (key.size() != static_cast<std::size_t>(p) + 1)
      throw FormatError("key has " + std::to_string(key.size()) + " indices, expected "
                            + std::to_string(p + 1),
                        lineno);
    if (!std::is_sorted(key.begin(), key.end()))
      throw FormatError("key is not sorted", lineno);
    double v = detail::parse_double(fields[1], lineno);
    try {
      cache.insert(key, v);
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  if (cache.jmax() != jmax && !(cache.size() == 0))
    throw FormatError("cache header jmax=" + std::to_string(jmax) + " disagrees with data", 1);
  return cache;
}

inline HermiteCache load_cache(const std::filesystem::path& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot read " + path.string());
  return load_cache(is);
}

class HermiteKernel
{
 public:
  explicit HermiteKernel(std::shared_ptr<const HermiteCache> cache)
      : cache_(std::move(cache))
  {
  }

  bool structural_zero(std::span<const Coord> ell, const IndexTuple& js) const
  {
    Coord sum = ell[0];
    for (Coord c : js.flat())
      sum += c;
    return (sum & 1) != 0;
  }

  Scalar coefficient(std::span<const Coord> ell, const IndexTuple& js) const
  {
    return Scalar(hermite_coefficient(*cache_, ell[0], js.flat()));
  }

  const HermiteCache& cache() const noexcept { return *cache_; }

 private:
  std::shared_ptr<const HermiteCache> cache_;
};

/**
 * @brief Hermite coefficients of any arity, computed on demand.
 * Copies share the same memo tables.
 */
class HermiteProvider
{
 public:
  explicit HermiteProvider(NodePolicy policy = NodePolicy::Standard)
      : state_(std::make_shared<State>())
  {
    state_->policy = policy;
  }

  /// Seeds the memo for cache.arity() with precomputed values.
  explicit HermiteProvider(HermiteCache cache)
      : HermiteProvider(cache.policy())
  {
    int p = cache.arity();
    state_->caches.emplace(p, std::make_shared<HermiteCache>(std::move(cache)));
  }

  BasisTag basis() const { return BasisTag::hermite(); }
  NodePolicy policy() const { return state_->policy; }

  HermiteKernel kernel(int p) const { return HermiteKernel(cache_for(p)); }
  HermiteProvider intermediate() const { return *this; }

  std::shared_ptr<const HermiteCache> cache_for(int p) const
  {
    std::lock_guard lock(state_->mutex);
    auto& slot = state_->caches[p];
    if (!slot)
      slot = std::make_shared<HermiteCache>(p, state_->policy);
    return slot;
  }

 private:
  struct State
  {
    NodePolicy policy = NodePolicy::Standard;
    std::mutex mutex;
    std::map<int, std::shared_ptr<HermiteCache>> caches;
  };
  std::shared_ptr<State> state_;
};

// --- provider concepts --------------------------------------------------------------

template <class K>
concept CoefficientKernel = requires(const K& k, std::span<const Coord> ell, const IndexTuple& js) {
  { k.coefficient(ell, js) } -> std::convertible_to<Scalar>;
};

template <class K>
concept MomentumKernel = CoefficientKernel<K> && requires(const K& k) {
  { k.momentum_support() } -> std::convertible_to<const std::vector<MomentumEntry>&>;
};

template <class K>
concept ParityKernel = CoefficientKernel<K> && requires(const K& k, std::span<const Coord> ell,
                                                        const IndexTuple& js) {
  { k.structural_zero(ell, js) } -> std::convertible_to<bool>;
};

template <class P>
concept CoefficientProvider = requires(const P& p, int arity) {
  { p.basis() } -> std::convertible_to<BasisTag>;
  { p.kernel(arity) } -> CoefficientKernel;
  { p.intermediate() };
};

}  // namespace spspec
