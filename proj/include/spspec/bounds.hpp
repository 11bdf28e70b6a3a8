#pragma once

/**
 * @file bounds.hpp
 * @brief mu-profiles, the decay kernel A_theta, the ||l|| A_theta <= 2 mu_1(j)
 * sweep and the predicted convergence rates.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "coeffs.hpp"
#include "error.hpp"
#include "indices.hpp"
#include "spectral.hpp"

namespace spspec {

/// Max-norms of a tuple, non-increasing.
struct MuProfile
{
  std::vector<Coord> sorted;

  std::size_t size() const noexcept { return sorted.size(); }
  /// mu_n, 1-based.
  Coord operator()(std::size_t n) const { return sorted.at(n - 1); }
};

inline MuProfile mu_of_flat(std::span<const Coord> flat, std::size_t dim)
{
  if (flat.empty() || dim == 0)
    throw ValidationError("mu: empty tuple");
  MuProfile m;
  for (std::size_t i = 0; i < flat.size() / dim; ++i)
    m.sorted.push_back(max_norm(flat.subspan(i * dim, dim)));
  std::sort(m.sorted.begin(), m.sorted.end(), std::greater<>());
  return m;
}

inline MuProfile mu(std::span<const MultiIndex> tuple)
{
  if (tuple.empty())
    throw ValidationError("mu: empty tuple");
  MuProfile m;
  for (const auto& k : tuple)
    m.sorted.push_back(max_norm(k));
  std::sort(m.sorted.begin(), m.sorted.end(), std::greater<>());
  return m;
}

inline MuProfile mu(std::initializer_list<MultiIndex> tuple)
{
  return mu(std::span<const MultiIndex>(tuple.begin(), tuple.size()));
}

/// mu_2^t mu_3^{1-t} / (mu_2^t mu_3^{1-t} + mu_1 - mu_2)
inline double a_theta(const MuProfile& m, double theta)
{
  if (m.size() < 3)
    throw ValidationError("a_theta: needs l and at least two indices");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ValidationError("a_theta: theta must lie in [0, 1]");
  double m1 = static_cast<double>(m.sorted[0]);
  double m2 = static_cast<double>(m.sorted[1]);
  double m3 = static_cast<double>(m.sorted[2]);
  double g = std::pow(m2, theta) * std::pow(m3, 1.0 - theta);
  return g / (g + (m1 - m2));
}

inline double a_theta(const MultiIndex& ell, std::span<const MultiIndex> js, double theta)
{
  if (js.size() < 2)
    throw ValidationError("a_theta: p must be >= 2");
  std::vector<MultiIndex> all{ell};
  all.insert(all.end(), js.begin(), js.end());
  return a_theta(mu(all), theta);
}

inline double a_theta(const MultiIndex& ell, std::initializer_list<MultiIndex> js, double theta)
{
  return a_theta(ell, std::span<const MultiIndex>(js.begin(), js.size()), theta);
}

// --- the appendix inequality ----------------------------------------------------------

struct InequalityDomain
{
  Lattice lattice = Lattice::Integers;
  std::size_t dim = 1;
  int p = 2;
  /// Every coordinate of l and of each j ranges over [-max_coord, max_coord] (or [0, max_coord]).
  Coord max_coord = 30;
};

struct InequalityRow
{
  MultiIndex ell;
  std::vector<MultiIndex> js;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct InequalityReport
{
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;
  InequalityRow argmax;
  /// Violating rows, or every row when requested.
  std::vector<InequalityRow> rows;
};

inline constexpr double kInequalityTolerance = 1e-12;

namespace detail {

inline InequalityRow make_row(std::span<const Coord> flat, std::size_t dim, double lhs, double rhs)
{
  InequalityRow r;
  r.ell = MultiIndex(flat.subspan(0, dim));
  for (std::size_t i = 1; i < flat.size() / dim; ++i)
    r.js.emplace_back(flat.subspan(i * dim, dim));
  r.lhs = lhs;
  r.rhs = rhs;
  return r;
}

}  // namespace detail

/**
 * @brief Checks ||l|| A_theta(l, j) <= 2 mu_1(j) for every (l, j_1..j_p) in the box.
 */
inline InequalityReport check_appendix_inequality(const InequalityDomain& dom, double theta,
                                                  bool record_all = false)
{
  if (dom.p < 2)
    throw ValidationError("appendix inequality: p must be >= 2");
  if (dom.dim < 1 || dom.max_coord < 0)
    throw ValidationError("appendix inequality: empty domain");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ValidationError("appendix inequality: theta must lie in [0, 1]");
  const std::size_t slots = (static_cast<std::size_t>(dom.p) + 1) * dom.dim;
  const Coord lo = dom.lattice == Lattice::Naturals ? 0 : -dom.max_coord;
  const Coord hi = dom.max_coord;
  std::vector<Coord> flat(slots, lo);
  std::vector<Coord> norms(static_cast<std::size_t>(dom.p) + 1);
  InequalityReport rep;
  rep.max_ratio = -1.0;
  while (true) {
    for (std::size_t i = 0; i < norms.size(); ++i)
      norms[i] = max_norm(std::span<const Coord>(flat.data() + i * dom.dim, dom.dim));
    Coord mu1_js = *std::max_element(norms.begin() + 1, norms.end());
    MuProfile m{norms};
    std::sort(m.sorted.begin(), m.sorted.end(), std::greater<>());
    double lhs = static_cast<double>(norms[0]) * a_theta(m, theta);
    double rhs = 2.0 * static_cast<double>(mu1_js);
    double ratio = lhs / rhs;
    ++rep.checked;
    bool bad = lhs > rhs * (1.0 + kInequalityTolerance);
    if (bad)
      ++rep.violations;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = detail::make_row(flat, dom.dim, lhs, rhs);
    }
    if (bad || record_all)
      rep.rows.push_back(detail::make_row(flat, dom.dim, lhs, rhs));

    std::size_t n = slots;
    while (n-- > 0) {
      if (++flat[n] <= hi)
        break;
      flat[n] = lo;
    }
    if (n == static_cast<std::size_t>(-1))
      break;
  }
  return rep;
}

inline void write_inequality_csv(std::ostream& os, const InequalityReport& rep)
{
  auto join = [](const MultiIndex& j) {
    std::string s;
    for (std::size_t n = 0; n < j.dim(); ++n)
      s += (n ? " " : "") + std::to_string(j[n]);
    return s;
  };
  os << "ell,js,lhs,rhs\n";
  for (const auto& r : rep.rows) {
    os << join(r.ell) << ',';
    for (std::size_t i = 0; i < r.js.size(); ++i)
      os << (i ? ";" : "") << join(r.js[i]);
    os << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << '\n';
  }
}

// --- predicted rates ----------------------------------------------------------------

struct RatePrediction
{
  double value = 0.0;
  /// s' is below the range where the estimate is proven.
  bool below_validity = false;
};

/// beta(s, s') = min((s' - sigma s - theta kappa) / (sigma alpha + 1), s' - (1 - theta) kappa - nu)
inline RatePrediction predicted_rate(double s, double s_prime, double sigma_embed, double theta, double nu,
                                     double kappa, int alpha)
{
  RatePrediction r;
  double a = (s_prime - sigma_embed * s - theta * kappa) / (sigma_embed * alpha + 1.0);
  double b = s_prime - (1.0 - theta) * kappa - nu;
  r.value = std::min(a, b);
  r.below_validity = s_prime < std::max(sigma_embed * s + theta * kappa, (1.0 - theta) * kappa + nu);
  return r;
}

/// beta_p(s, s') = min((s' - s - (p-1) theta kappa) / (alpha + 1), s' - (p-3) theta kappa - kappa - nu)
inline RatePrediction predicted_rate_iterative(int p, double s, double s_prime, double theta, double nu,
                                               double kappa, int alpha)
{
  if (p < 2)
    throw ValidationError("predicted_rate_iterative: p must be >= 2");
  RatePrediction r;
  double pm = static_cast<double>(p);
  double a = (s_prime - s - (pm - 1.0) * theta * kappa) / (alpha + 1.0);
  double b = s_prime - (pm - 3.0) * theta * kappa - kappa - nu;
  r.value = std::min(a, b);
  r.below_validity = s_prime < std::max(s + (pm - 1.0) * theta * kappa, (1.0 - theta) * kappa + nu);
  return r;
}

// --- decay diagnostic ------------------------------------------------------------------

/**
 * @brief max over 0 <= l, j_1, j_2 <= jmax of |a_{l;j}| A_theta^{-R} mu_3^{-nu}.
 *
 * A finite value that stays put as jmax grows is the empirical c_R.
 */
inline double hermite_decay_envelope(const HermiteCache& cache, Coord jmax, double R, double nu,
                                     double theta = 0.5)
{
  if (cache.arity() != 2)
    throw ValidationError("decay envelope: needs a p = 2 cache");
  double best = 0.0;
  std::vector<Coord> flat(3);
  for (Coord l = 0; l <= jmax; ++l)
    for (Coord a = 0; a <= jmax; ++a)
      for (Coord b = a; b <= jmax; ++b) {
        if ((l + a + b) % 2 != 0)
          continue;
        const Coord js[2] = {a, b};
        double v = std::abs(hermite_coefficient(cache, l, js));
        flat = {l, a, b};
        MuProfile m = mu_of_flat(flat, 1);
        double env = v * std::pow(a_theta(m, theta), -R) * std::pow(static_cast<double>(m(3)), -nu);
        best = std::max(best, env);
      }
  return best;
}

}  // namespace spspec
