#pragma once

/**
 * @file experiments.hpp
 * @brief Convergence, cardinality and timing experiments behind the command line tool.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "indices.hpp"
#include "spectral.hpp"

namespace spspec {

enum class Method { Direct, Iterative, Transform };

inline std::string method_name(Method m)
{
  switch (m) {
    case Method::Direct:
      return "direct";
    case Method::Iterative:
      return "iterative";
    case Method::Transform:
      return "transform";
  }
  return "?";
}

inline Method parse_method(const std::string& s)
{
  if (s == "direct")
    return Method::Direct;
  if (s == "iterative")
    return Method::Iterative;
  if (s == "transform")
    return Method::Transform;
  throw ValidationError("unknown method '" + s + "'");
}

struct ConvergenceRecord
{
  Method method = Method::Direct;
  BasisKind basis = BasisKind::Fourier;
  int p = 3;
  double sigma = 3.0;
  int alpha = 0;
  Coord N = 1;
  std::uint64_t terms = 0;
  double error_l1 = 0.0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kCsvHeader = "method,basis,p,sigma,alpha,N,terms,error_l1,wall_time_s";

inline void write_csv_row(std::ostream& os, const ConvergenceRecord& r)
{
  os << method_name(r.method) << ',' << (r.basis == BasisKind::Fourier ? "fourier" : "hermite") << ','
     << r.p << ',' << format_double(r.sigma) << ',' << r.alpha << ',' << r.N << ',' << r.terms << ','
     << format_double(r.error_l1) << ',' << format_double(r.wall_time_s) << '\n';
}

inline void write_csv(std::ostream& os, std::span<const ConvergenceRecord> rows)
{
  os << kCsvHeader << '\n';
  for (const auto& r : rows)
    write_csv_row(os, r);
}

// --- slope fit ------------------------------------------------------------------------

inline constexpr double kErrorFloor = 1e-13;

struct SlopeFit
{
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;

  bool valid() const { return points >= 2 && std::isfinite(slope); }
};

/// Least squares slope of log(error) against log(N) for lo <= N <= hi, errors below the floor dropped.
inline SlopeFit fit_slope(std::span<const ConvergenceRecord> rows, Coord lo = 1,
                          Coord hi = std::numeric_limits<Coord>::max(), double floor = kErrorFloor)
{
  std::vector<double> xs, ys;
  for (const auto& r : rows)
    if (r.N >= lo && r.N <= hi && r.error_l1 >= floor) {
      xs.push_back(std::log(static_cast<double>(r.N)));
      ys.push_back(std::log(r.error_l1));
    }
  SlopeFit fit;
  fit.points = xs.size();
  if (xs.size() < 2)
    return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx > 0)
    fit.slope = sxy / sxx;
  return fit;
}

inline std::string format_slope(const SlopeFit& f) { return f.valid() ? format_double(f.slope) : "nan"; }

// --- convergence ------------------------------------------------------------------------

struct ConvergeConfig
{
  BasisKind basis = BasisKind::Fourier;
  std::size_t dim = 1;
  int p = 3;
  double sigma = 3.0;
  int alpha = 0;
  SizeKind size = SizeKind::MaxNorm;
  std::vector<Coord> Ns;
  Method method = Method::Direct;
  unsigned threads = 1;
  bool compensated = false;
  /// Fourier: b(x) = 1/(2 - cos x) instead of b = 1.
  bool analytic_symbol = false;
  /// Input truncation; default 4 N_max (Fourier) or the first K with (1+K)^-sigma < 1e-17 (Hermite).
  std::optional<Coord> reference_K;
  /// Quadrature nodes of the Hermite reference transform.
  std::size_t reference_nodes = 500;
  /// Output cap for Hermite with alpha = 0.
  std::optional<Coord> ell_cap;
  NodePolicy policy = NodePolicy::Standard;
};

struct ConvergeResult
{
  std::vector<ConvergenceRecord> rows;
  Coord reference_K = 0;
  /// Fourier: bound on the l^1 effect of truncating u at K.  Hermite: l^1 mass of the dropped input tail.
  double reference_tail = 0.0;
  std::string reference_note;
};

namespace detail {

/// sum_{r > K} of the shell mass of (1 + r)^-sigma in d dimensions, bounded by an integral.
inline double power_law_tail(double sigma, Coord K, std::size_t d, bool integers)
{
  double dd = static_cast<double>(d);
  if (!(sigma > dd))
    return std::numeric_limits<double>::infinity();
  // shell r holds at most d 2^d (1+r)^{d-1} lattice points on Z^d, d (1+r)^{d-1} on N^d
  double shell = integers ? dd * std::pow(2.0, dd) : dd;
  return shell * std::pow(1.0 + static_cast<double>(K), dd - sigma) / (sigma - dd);
}

inline Coord hermite_reference_K(double sigma)
{
  Coord K = 0;
  while (std::pow(1.0 + static_cast<double>(K), -sigma) >= 1e-17)
    ++K;
  return K;
}

template <class F>
double seconds(F&& f)
{
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Problem
{
  ConvergeConfig cfg;
  BasisTag basis;
  std::vector<SpectralVector> inputs;
  SpectralVector reference;
  Coord K = 0;
  double tail = 0.0;
  std::string note;
  std::optional<FourierSymbol> symbol;
};

inline SparseSetSpec spec_for(const ConvergeConfig& cfg, const BasisTag& basis, Coord N)
{
  SparseSetSpec s;
  s.p = cfg.p;
  s.N = N;
  s.alpha = cfg.alpha;
  s.size = cfg.size;
  s.lattice = basis.lattice();
  s.dim = basis.dim;
  return s;
}

inline Problem make_problem(const ConvergeConfig& cfg)
{
  if (cfg.Ns.empty())
    throw ValidationError("no N values given");
  if (cfg.p < 1)
    throw ValidationError("p must be >= 1");
  for (Coord N : cfg.Ns)
    if (N < 1)
      throw ValidationError("N values must be >= 1");
  if (cfg.alpha != 0 && cfg.alpha != 1)
    throw ValidationError("alpha must be 0 or 1");
  const Coord nmax = *std::max_element(cfg.Ns.begin(), cfg.Ns.end());
  Problem pr;
  pr.cfg = cfg;
  if (cfg.basis == BasisKind::Fourier) {
    if (cfg.method == Method::Transform)
      throw ValidationError("the transform method is only available for the Hermite basis");
    pr.basis = BasisTag::fourier(cfg.dim);
    pr.K = cfg.reference_K.value_or(4 * nmax);
    if (pr.K < nmax)
      throw ValidationError("reference truncation K = " + std::to_string(pr.K)
                            + " is weaker than the largest tested N = " + std::to_string(nmax));
    auto u = power_law_test_function(cfg.sigma, pr.K, pr.basis);
    pr.inputs.assign(static_cast<std::size_t>(cfg.p), u);
    double bnorm = 1.0;
    if (cfg.analytic_symbol) {
      pr.symbol = FourierSymbol::analytic_example(cfg.dim);
      bnorm = 0.0;
      for (const auto& [k, v] : pr.symbol->b)
        bnorm += std::abs(v);
    }
    pr.reference = dense_oracle_fourier(pr.inputs, pr.K, pr.symbol ? &*pr.symbol : nullptr);
    double a = l1s_norm(u, 0.0);
    double t = power_law_tail(cfg.sigma, pr.K, cfg.dim, true);
    pr.tail = bnorm * (std::pow(a + t, cfg.p) - std::pow(a, cfg.p));
    pr.note = "dense convolution of u truncated at max-norm " + std::to_string(pr.K);
  } else {
    if (cfg.dim != 1)
      throw ValidationError("the Hermite basis is one-dimensional");
    pr.basis = BasisTag::hermite();
    pr.K = cfg.reference_K.value_or(hermite_reference_K(cfg.sigma));
    auto u = power_law_test_function(cfg.sigma, pr.K, pr.basis);
    pr.inputs.assign(static_cast<std::size_t>(cfg.p), u);
    const Coord n = static_cast<Coord>(cfg.reference_nodes);
    const Coord jout = 2 * n - 1 - static_cast<Coord>(cfg.p) * pr.K;
    Coord need = nmax;
    if (cfg.alpha == 0) {
      if (cfg.method != Method::Transform && !cfg.ell_cap)
        throw ValidationError("Hermite with alpha = 0 needs an output cap (--ell-cap)");
      if (cfg.ell_cap)
        need = std::max(need, *cfg.ell_cap);
    }
    if (cfg.method == Method::Transform)
      need = std::max(need, nmax - 1);
    if (jout < need)
      throw ValidationError("reference transform with " + std::to_string(n)
                            + " nodes resolves outputs only up to " + std::to_string(std::max<Coord>(jout, -1))
                            + ", below the tested range " + std::to_string(need));
    pr.reference = dense_oracle_hermite(pr.inputs, cfg.reference_nodes, jout);
    pr.tail = power_law_tail(cfg.sigma, pr.K, 1, false);
    pr.note = "Hermite transform with " + std::to_string(n) + " nodes of u truncated at "
              + std::to_string(pr.K) + ", outputs up to " + std::to_string(jout);
  }
  return pr;
}

/// One approximation at level N with the given options.
inline EvalResult approximate(const Problem& pr, Coord N, const HermiteProvider* hermite,
                              const EvalOptions& opts)
{
  const auto& cfg = pr.cfg;
  if (cfg.method == Method::Transform) {
    std::vector<SpectralVector> cut;
    std::uint64_t work = 0;
    for (const auto& u : pr.inputs) {
      cut.push_back(u.truncated(N - 1));
      work += cut.back().size();
    }
    EvalResult r{hermite_transform_product(cut, static_cast<std::size_t>(N), N - 1), 0};
    // node evaluations of every input entry and every output function
    r.terms = static_cast<std::uint64_t>(N) * (work + static_cast<std::uint64_t>(N));
    return r;
  }
  SparseSetSpec spec = spec_for(cfg, pr.basis, N);
  OutputDomain domain;
  if (cfg.ell_cap)
    domain = OutputDomain::capped(*cfg.ell_cap);
  auto run = [&](const auto& provider) {
    if (cfg.method == Method::Iterative) {
      if (cfg.size != SizeKind::MaxNorm)
        throw ValidationError("the iterative method uses max-norm sizes");
      return iterative_eval(provider, pr.inputs, N, cfg.alpha, domain, opts);
    }
    return direct_sparse_eval(provider, pr.inputs, spec, domain, opts);
  };
  if (cfg.basis == BasisKind::Fourier)
    return run(FourierProvider(pr.symbol ? *pr.symbol : FourierSymbol::unit(cfg.dim)));
  return run(*hermite);
}

}  // namespace detail

/**
 * @brief Error of the chosen method against a higher-fidelity reference, one row per N.
 *
 * Timings come from single-threaded runs; with threads > 1 the values are
 * computed in parallel and a separate serial run is timed.
 */
inline ConvergeResult run_converge(const ConvergeConfig& cfg, const HermiteProvider* hermite = nullptr)
{
  auto pr = detail::make_problem(cfg);
  HermiteProvider local(cfg.policy);
  if (!hermite)
    hermite = &local;
  ConvergeResult out;
  out.reference_K = pr.K;
  out.reference_tail = pr.tail;
  out.reference_note = pr.note;
  for (Coord N : cfg.Ns) {
    EvalOptions opts{cfg.compensated, 1, true};
    EvalResult r;
    double t = detail::seconds([&] { r = detail::approximate(pr, N, hermite, opts); });
    if (cfg.threads > 1) {
      opts.threads = cfg.threads;
      r = detail::approximate(pr, N, hermite, opts);
    }
    ConvergenceRecord rec;
    rec.method = cfg.method;
    rec.basis = cfg.basis;
    rec.p = cfg.p;
    rec.sigma = cfg.sigma;
    rec.alpha = cfg.alpha;
    rec.N = N;
    rec.terms = r.terms;
    rec.error_l1 = l1s_norm(difference(r.value, pr.reference), 0.0, cfg.size);
    rec.wall_time_s = t;
    out.rows.push_back(rec);
  }
  return out;
}

// --- timing -------------------------------------------------------------------------------

struct BenchConfig
{
  ConvergeConfig problem;
  std::vector<Method> methods{Method::Direct, Method::Iterative};
  int repeats = 3;
};

/**
 * @brief Median single-threaded wall time per (method, N).
 *
 * An untimed run first fills the coefficient memo, so the timed runs measure
 * the summation only.
 */
inline std::vector<ConvergenceRecord> run_bench(const BenchConfig& bc, const HermiteProvider* hermite = nullptr)
{
  if (bc.repeats < 3)
    throw ValidationError("bench needs at least 3 repeats");
  if (bc.methods.empty())
    throw ValidationError("bench needs at least one method");
  HermiteProvider local(bc.problem.policy);
  if (!hermite)
    hermite = &local;
  std::vector<ConvergenceRecord> rows;
  for (Method m : bc.methods) {
    ConvergeConfig cfg = bc.problem;
    cfg.method = m;
    auto pr = detail::make_problem(cfg);
    for (Coord N : cfg.Ns) {
      EvalResult r = detail::approximate(pr, N, hermite, EvalOptions{cfg.compensated, 1, true});
      std::vector<double> times;
      for (int k = 0; k < bc.repeats; ++k)
        times.push_back(detail::seconds(
            [&] { r = detail::approximate(pr, N, hermite, EvalOptions{cfg.compensated, 1, false}); }));
      std::sort(times.begin(), times.end());
      ConvergenceRecord rec;
      rec.method = m;
      rec.basis = cfg.basis;
      rec.p = cfg.p;
      rec.sigma = cfg.sigma;
      rec.alpha = cfg.alpha;
      rec.N = N;
      rec.terms = r.terms;
      rec.error_l1 = l1s_norm(difference(r.value, pr.reference), 0.0, cfg.size);
      rec.wall_time_s = times[times.size() / 2];
      rows.push_back(rec);
    }
  }
  return rows;
}

// --- cardinalities ------------------------------------------------------------------------

struct CountConfig
{
  int p = 2;
  int alpha = 0;
  SizeKind size = SizeKind::MaxNorm;
  Lattice lattice = Lattice::Integers;
  std::size_t dim = 1;
  std::vector<Coord> Ns;
  /// Box cap on every index; with alpha = 0 it also bounds l.
  std::optional<Coord> boxM;
  /// Count (l, j) with |momentum| <= q instead of the per-l tuple count.
  std::optional<Coord> momentum_q;
};

struct CountRow
{
  Coord N = 1;
  Count count = 0;
  double normalized = 0.0;
};

/**
 * @brief Sparse set sizes and count / (N^d log(N+1)^{p-1+alpha}) (max-norm) or
 * count / (N log(N+1)^{d(p+alpha)-1}) (product norm).
 *
 * With alpha = 0 and no box or momentum restriction the count is the number of
 * tuples attached to one l.
 */
inline std::vector<CountRow> run_count(const CountConfig& cc)
{
  std::vector<CountRow> rows;
  for (Coord N : cc.Ns) {
    SparseSetSpec s;
    s.p = cc.p;
    s.N = N;
    s.alpha = cc.alpha;
    s.size = cc.size;
    s.lattice = cc.lattice;
    s.dim = cc.dim;
    s.boxM = cc.boxM;
    CountRow row;
    row.N = N;
    if (cc.momentum_q)
      row.count = count_momentum_restricted(s, *cc.momentum_q);
    else
      row.count = count_sparse(s, cc.alpha == 1 || cc.boxM.has_value());
    double lg = std::log(static_cast<double>(N) + 1.0);
    double nd = static_cast<double>(N);
    double dd = static_cast<double>(cc.dim);
    double denom = cc.size == SizeKind::MaxNorm
                       ? std::pow(nd, dd) * std::pow(lg, cc.p - 1 + cc.alpha)
                       : nd * std::pow(lg, dd * (cc.p + cc.alpha) - 1.0);
    row.normalized = to_double(row.count) / denom;
    rows.push_back(row);
  }
  return rows;
}

inline void write_count_csv(std::ostream& os, std::span<const CountRow> rows)
{
  os << "N,count,normalized\n";
  for (const auto& r : rows)
    os << r.N << ',' << to_string(r.count) << ',' << format_double(r.normalized) << '\n';
}

}  // namespace spspec
