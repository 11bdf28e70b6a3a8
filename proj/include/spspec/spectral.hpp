#pragma once

/**
 * @file spectral.hpp
 * @brief Basis-tagged sparse coefficient vectors and weighted l^1 / l^2 norms.
 */

#include <charconv>
#include <cmath>
#include <complex>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"
#include "indices.hpp"

namespace spspec {

using Scalar = std::complex<double>;

/// Entries below this magnitude are not stored.
inline constexpr double kPruneTolerance = 1e-300;

enum class BasisKind { Fourier, Hermite };

struct BasisTag
{
  BasisKind kind = BasisKind::Fourier;
  std::size_t dim = 1;

  static BasisTag fourier(std::size_t d = 1) { return {BasisKind::Fourier, d}; }
  static BasisTag hermite() { return {BasisKind::Hermite, 1}; }

  Lattice lattice() const { return kind == BasisKind::Fourier ? Lattice::Integers : Lattice::Naturals; }
  std::string name() const { return kind == BasisKind::Fourier ? "fourier" : "hermite"; }
  std::string str() const { return kind == BasisKind::Fourier ? "fourier(d=" + std::to_string(dim) + ")" : "hermite"; }

  friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

class SpectralVector
{
 public:
  using Map = std::map<MultiIndex, Scalar>;

  explicit SpectralVector(BasisTag basis = BasisTag::fourier())
      : basis_(basis)
  {
  }

  SpectralVector(BasisTag basis, const Map& entries)
      : basis_(basis)
  {
    for (const auto& [j, v] : entries)
      set(j, v);
  }

  const BasisTag& basis() const noexcept { return basis_; }
  const Map& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  Scalar at(const MultiIndex& j) const
  {
    auto it = entries_.find(j);
    return it == entries_.end() ? Scalar{} : it->second;
  }

  /// Stores v at j, or erases j when |v| is under the pruning tolerance.
  void set(const MultiIndex& j, Scalar v)
  {
    check_index(j);
    if (std::abs(v) < kPruneTolerance)
      entries_.erase(j);
    else
      entries_[j] = v;
  }

  SpectralVector scaled(Scalar c) const
  {
    SpectralVector out(basis_);
    for (const auto& [j, v] : entries_)
      out.set(j, c * v);
    return out;
  }

  /// Entries with size(j) <= bound.
  SpectralVector truncated(Coord bound, SizeKind kind = SizeKind::MaxNorm) const
  {
    SpectralVector out(basis_);
    for (const auto& [j, v] : entries_)
      if (size_of(kind, j) <= bound)
        out.entries_.emplace(j, v);
    return out;
  }

  friend bool operator==(const SpectralVector&, const SpectralVector&) = default;

 private:
  void check_index(const MultiIndex& j) const
  {
    if (j.dim() != basis_.dim)
      throw ValidationError("index " + j.str() + " has wrong dimension for " + basis_.name() + " basis");
    if (!in_lattice(j.coords(), basis_.lattice()))
      throw ValidationError("index " + j.str() + " is not in N^d");
  }

  BasisTag basis_;
  Map entries_;
};

/// sum_j size(j)^s |u_j|
inline double l1s_norm(const SpectralVector& u, double s, SizeKind size = SizeKind::MaxNorm)
{
  double total = 0.0;
  for (const auto& [j, v] : u.entries())
    total += std::pow(static_cast<double>(size_of(size, j)), s) * std::abs(v);
  return total;
}

/// (sum_j ||j||^{2s} |u_j|^2)^{1/2} with max-norm weights.
inline double l2s_norm(const SpectralVector& u, double s)
{
  double total = 0.0;
  for (const auto& [j, v] : u.entries())
    total += std::pow(static_cast<double>(max_norm(j)), 2 * s) * std::norm(v);
  return std::sqrt(total);
}

/// Entry-wise difference a - b (missing entries are zero).
inline SpectralVector difference(const SpectralVector& a, const SpectralVector& b)
{
  if (!(a.basis() == b.basis()))
    throw ValidationError("difference: basis mismatch");
  SpectralVector out = a;
  for (const auto& [j, v] : b.entries())
    out.set(j, a.at(j) - v);
  return out;
}

/**
 * @brief u_k = (1 + |k|)^{-sigma} for |k| <= K, |k| the largest coordinate magnitude.
 *
 * Fourier: all k in Z^d with max_n |k^n| <= K.  Hermite: 0 <= k <= K.
 */
inline SpectralVector power_law_test_function(double sigma, Coord K, BasisTag basis)
{
  if (!(sigma > 1.0))
    throw ValidationError("power law exponent sigma must be > 1");
  if (K < 0)
    throw ValidationError("power law cutoff K must be >= 0");
  SparseSetSpec ball;
  ball.lattice = basis.lattice();
  ball.dim = basis.dim;
  SpectralVector u(basis);
  for (const auto& k : size_ball(ball, std::max<Coord>(K, 1))) {
    Coord r = 0;
    for (Coord c : k.coords())
      r = std::max(r, c < 0 ? -c : c);
    if (r <= K)
      u.set(k, std::pow(1.0 + static_cast<double>(r), -sigma));
  }
  return u;
}

// --- text serialization -----------------------------------------------------

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double x)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view s, std::size_t line)
{
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw FormatError("bad number '" + std::string(s) + "'", line);
  return v;
}

inline std::vector<Coord> parse_coords(std::string_view s, std::size_t line)
{
  std::vector<Coord> out;
  for (auto tok : split(s, ' ')) {
    if (tok.empty())
      continue;
    Coord v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw FormatError("bad index '" + std::string(tok) + "'", line);
    out.push_back(v);
  }
  if (out.empty())
    throw FormatError("missing index", line);
  return out;
}

}  // namespace detail

/// One line per entry: `c1 c2 ...<TAB>re<TAB>im`, lexicographic in the index.
inline void write_text(std::ostream& os, const SpectralVector& u)
{
  for (const auto& [j, v] : u.entries()) {
    for (std::size_t n = 0; n < j.dim(); ++n) {
      if (n)
        os << ' ';
      os << j[n];
    }
    os << '\t' << format_double(v.real()) << '\t' << format_double(v.imag()) << '\n';
  }
}

inline SpectralVector read_text(std::istream& is, BasisTag basis)
{
  SpectralVector u(basis);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty())
      continue;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 3)
      throw FormatError("expected 3 tab-separated fields", lineno);
    MultiIndex j(detail::parse_coords(fields[0], lineno));
    Scalar v(detail::parse_double(fields[1], lineno), detail::parse_double(fields[2], lineno));
    try {
      u.set(j, v);
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  return u;
}

inline std::string to_text(const SpectralVector& u)
{
  std::ostringstream os;
  write_text(os, u);
  return os.str();
}

}  // namespace spspec
