#pragma once

/**
 * @file eval.hpp
 * @brief Sparse evaluation of X_l(u^1..u^p) = sum a_{l;j} u^1_{j_1} ... u^p_{j_p}.
 *
 * direct_sparse_eval sums over the hyperbolic-cross set
 * size(l)^alpha * size(j_1) ... size(j_p) <= N.  iterative_eval folds binary
 * sparse products left to right.  The dense routines are the references the
 * sparse ones are checked against.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <thread>
#include <unordered_set>
#include <vector>

#include "coeffs.hpp"
#include "error.hpp"
#include "indices.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"

namespace spspec {

/// Which output indices l an evaluation produces.
struct OutputDomain
{
  enum class Kind {
    /// alpha = 1: size(l) <= N.  alpha = 0 with a finite-momentum kernel:
    /// the momentum closure of the input supports.  Otherwise an error.
    Automatic,
    /// Exactly the listed indices.
    Explicit,
    /// All l with size(l) <= cap.
    Capped,
  };

  Kind kind = Kind::Automatic;
  std::vector<MultiIndex> ells;
  Coord cap = 0;

  static OutputDomain automatic() { return {}; }
  static OutputDomain explicit_list(std::vector<MultiIndex> ells)
  {
    return {Kind::Explicit, std::move(ells), 0};
  }
  static OutputDomain capped(Coord cap) { return {Kind::Capped, {}, cap}; }
};

struct EvalOptions
{
  /// Kahan summation of each output entry.
  bool compensated = false;
  /// Worker threads over output indices; results do not depend on it.
  unsigned threads = 1;
  /// Compute missing memoized coefficients in bulk before summing.
  bool prefetch = true;
};

struct EvalResult
{
  SpectralVector value;
  /// Products accumulated: tuples with nonzero inputs and a coefficient that is not a structural zero.
  std::uint64_t terms = 0;
};

namespace detail {

/// Row-major dense copy of a vector over its support bounding box.
struct DenseBox
{
  std::size_t dim = 1;
  std::vector<Coord> lo, ext;
  std::vector<Scalar> data;

  bool empty() const { return data.empty(); }

  static DenseBox from(const SpectralVector& u)
  {
    DenseBox b;
    b.dim = u.basis().dim;
    if (u.empty())
      return b;
    b.lo.assign(b.dim, 0);
    std::vector<Coord> hi(b.dim, 0);
    bool first = true;
    for (const auto& [j, v] : u.entries()) {
      for (std::size_t n = 0; n < b.dim; ++n) {
        if (first || j[n] < b.lo[n])
          b.lo[n] = j[n];
        if (first || j[n] > hi[n])
          hi[n] = j[n];
      }
      first = false;
    }
    b.ext.resize(b.dim);
    std::size_t total = 1;
    for (std::size_t n = 0; n < b.dim; ++n) {
      b.ext[n] = hi[n] - b.lo[n] + 1;
      total *= static_cast<std::size_t>(b.ext[n]);
    }
    b.data.assign(total, Scalar{});
    for (const auto& [j, v] : u.entries())
      b.data[b.offset_unchecked(j.coords())] = v;
    return b;
  }

  std::size_t offset_unchecked(std::span<const Coord> j) const
  {
    std::size_t off = 0;
    for (std::size_t n = 0; n < dim; ++n)
      off = off * static_cast<std::size_t>(ext[n]) + static_cast<std::size_t>(j[n] - lo[n]);
    return off;
  }

  Scalar at(std::span<const Coord> j) const
  {
    if (data.empty())
      return {};
    for (std::size_t n = 0; n < dim; ++n)
      if (j[n] < lo[n] || j[n] >= lo[n] + ext[n])
        return {};
    return data[offset_unchecked(j)];
  }

  CoordBox box() const
  {
    CoordBox b;
    if (data.empty()) {
      b.lo.assign(dim, 1);
      b.hi.assign(dim, 0);
      return b;
    }
    b.lo = lo;
    b.hi.resize(dim);
    for (std::size_t n = 0; n < dim; ++n)
      b.hi[n] = lo[n] + ext[n] - 1;
    return b;
  }

  SpectralVector to_vector(BasisTag basis) const
  {
    SpectralVector out(basis);
    std::vector<Coord> j(dim);
    for (std::size_t f = 0; f < data.size(); ++f) {
      if (data[f] == Scalar{})
        continue;
      std::size_t rem = f;
      for (std::size_t n = dim; n-- > 0;) {
        j[n] = lo[n] + static_cast<Coord>(rem % static_cast<std::size_t>(ext[n]));
        rem /= static_cast<std::size_t>(ext[n]);
      }
      out.set(MultiIndex(j), data[f]);
    }
    return out;
  }
};

/// Full discrete convolution of two boxes.
inline DenseBox convolve(const DenseBox& a, const DenseBox& b)
{
  DenseBox out;
  out.dim = a.dim;
  if (a.empty() || b.empty())
    return out;
  out.lo.resize(a.dim);
  out.ext.resize(a.dim);
  std::size_t total = 1;
  for (std::size_t n = 0; n < a.dim; ++n) {
    out.lo[n] = a.lo[n] + b.lo[n];
    out.ext[n] = a.ext[n] + b.ext[n] - 1;
    total *= static_cast<std::size_t>(out.ext[n]);
  }
  out.data.assign(total, Scalar{});
  // output offset contributed by each element of a (resp. b)
  auto offsets = [&](const DenseBox& src) {
    std::vector<std::size_t> offs(src.data.size());
    std::vector<std::size_t> strides(src.dim);
    std::size_t s = 1;
    for (std::size_t n = src.dim; n-- > 0;) {
      strides[n] = s;
      s *= static_cast<std::size_t>(out.ext[n]);
    }
    for (std::size_t f = 0; f < src.data.size(); ++f) {
      std::size_t rem = f, off = 0;
      for (std::size_t n = src.dim; n-- > 0;) {
        off += (rem % static_cast<std::size_t>(src.ext[n])) * strides[n];
        rem /= static_cast<std::size_t>(src.ext[n]);
      }
      offs[f] = off;
    }
    return offs;
  };
  auto oa = offsets(a);
  auto ob = offsets(b);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const Scalar av = a.data[i];
    if (av == Scalar{})
      continue;
    Scalar* base = out.data.data() + oa[i];
    for (std::size_t k = 0; k < b.data.size(); ++k)
      base[ob[k]] += av * b.data[k];
  }
  return out;
}

struct Accumulator
{
  bool compensated = false;
  Scalar sum{};
  Scalar carry{};

  void add(Scalar v)
  {
    if (!compensated) {
      sum += v;
      return;
    }
    auto kahan = [](double& s, double& c, double x) {
      double y = x - c;
      double t = s + y;
      c = (t - s) - y;
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = carry.real(), ci = carry.imag();
    kahan(sr, cr, v.real());
    kahan(si, ci, v.imag());
    sum = {sr, si};
    carry = {cr, ci};
  }
};

template <class Kernel>
class SparseEvaluator
{
 public:
  SparseEvaluator(const Kernel& kernel, const SparseSetSpec& spec, std::span<const DenseBox> inputs,
                  bool compensated)
      : kernel_(kernel)
      , spec_(spec)
      , inputs_(inputs)
      , compensated_(compensated)
  {
    for (const auto& in : inputs_)
      boxes_.push_back(in.box());
  }

  std::pair<Scalar, std::uint64_t> operator()(std::span<const Coord> ell)
  {
    Accumulator acc{compensated_};
    std::uint64_t terms = 0;
    auto budget = spec_.tuple_budget(ell);
    if (!budget)
      return {Scalar{}, 0};
    const std::size_t p = static_cast<std::size_t>(spec_.p);
    const std::size_t d = spec_.dim;
    vals_.assign(p, Scalar{});
    auto accept = [&](std::size_t i, std::span<const Coord> j) {
      vals_[i] = inputs_[i].at(j);
      return vals_[i] != Scalar{};
    };

    if constexpr (MomentumKernel<Kernel>) {
      const auto& support = kernel_.momentum_support();
      last_.assign(d, 0);
      partial_.assign(d, 0);
      auto leaf = [&](Coord left) {
        Coord cap = spec_.boxM ? std::min(left, *spec_.boxM) : left;
        for (std::size_t n = 0; n < d; ++n) {
          Coord s = 0;
          for (std::size_t i = 0; i + 1 < p; ++i)
            s += flat_[i * d + n];
          partial_[n] = ell[n] - s;
        }
        for (const auto& entry : support) {
          for (std::size_t n = 0; n < d; ++n)
            last_[n] = partial_[n] - entry.m[n];
          if (!in_lattice(last_, spec_.lattice) || size_of(spec_.size, last_) > cap)
            continue;
          Scalar v = inputs_[p - 1].at(last_);
          if (v == Scalar{})
            continue;
          Scalar prod = entry.b;
          for (std::size_t i = 0; i + 1 < p; ++i)
            prod *= vals_[i];
          prod *= v;
          acc.add(prod);
          ++terms;
        }
      };
      walk_sparse(spec_, p - 1, *budget, std::span<const CoordBox>(boxes_.data(), p - 1), flat_, accept,
                  leaf);
    } else {
      auto leaf = [&](Coord) {
        IndexTuple js(flat_, d);
        if constexpr (ParityKernel<Kernel>) {
          if (kernel_.structural_zero(ell, js))
            return;
        }
        Scalar prod = kernel_.coefficient(ell, js);
        if (prod == Scalar{})
          return;
        for (std::size_t i = 0; i < p; ++i)
          prod *= vals_[i];
        acc.add(prod);
        ++terms;
      };
      walk_sparse(spec_, p, *budget, std::span<const CoordBox>(boxes_), flat_, accept, leaf);
    }
    return {acc.sum, terms};
  }

 private:
  const Kernel& kernel_;
  const SparseSetSpec& spec_;
  std::span<const DenseBox> inputs_;
  bool compensated_;
  std::vector<CoordBox> boxes_;
  std::vector<Coord> flat_, last_, partial_;
  std::vector<Scalar> vals_;
};


/// Bounding box of the momentum closure {j_1 + ... + j_p + m}.
inline std::vector<MultiIndex> momentum_closure(const std::vector<MomentumEntry>& support,
                                                const SparseSetSpec& spec,
                                                std::span<const DenseBox> inputs)
{
  const std::size_t d = spec.dim;
  // largest |c| any single index of the sparse set can reach
  Coord top = spec.boxM ? std::min(spec.N, *spec.boxM) : spec.N;
  Coord reach = spec.size == SizeKind::MaxNorm ? top : top - 1;
  std::vector<Coord> lo(d, 0), hi(d, 0);
  for (const auto& in : inputs) {
    if (in.empty())
      return {};
    auto b = in.box();
    for (std::size_t n = 0; n < d; ++n) {
      Coord l = std::max(b.lo[n], -reach), h = std::min(b.hi[n], reach);
      if (l > h)
        return {};
      lo[n] += l;
      hi[n] += h;
    }
  }
  if (support.empty())
    return {};
  std::vector<Coord> mlo = support.front().m, mhi = support.front().m;
  for (const auto& e : support)
    for (std::size_t n = 0; n < d; ++n) {
      mlo[n] = std::min(mlo[n], e.m[n]);
      mhi[n] = std::max(mhi[n], e.m[n]);
    }
  std::vector<MultiIndex> out;
  std::vector<Coord> cur(d);
  for (std::size_t n = 0; n < d; ++n) {
    lo[n] += mlo[n];
    hi[n] += mhi[n];
    cur[n] = lo[n];
  }
  while (true) {
    if (in_lattice(cur, spec.lattice) && (!spec.boxM || size_of(spec.size, cur) <= *spec.boxM))
      out.emplace_back(std::span<const Coord>(cur));
    std::size_t n = d;
    while (n-- > 0) {
      if (++cur[n] <= hi[n])
        break;
      cur[n] = lo[n];
    }
    if (n == static_cast<std::size_t>(-1))
      break;
  }
  return out;
}

template <class Kernel>
std::vector<MultiIndex> output_indices(const Kernel& kernel, const SparseSetSpec& spec,
                                       std::span<const DenseBox> inputs, const OutputDomain& domain)
{
  if (domain.kind == OutputDomain::Kind::Automatic && spec.alpha == 0) {
    if constexpr (MomentumKernel<Kernel>)
      return momentum_closure(kernel.momentum_support(), spec, inputs);
    else
      throw ValidationError("alpha = 0 without a finite-momentum kernel needs an explicit output cap");
  }
  switch (domain.kind) {
    case OutputDomain::Kind::Explicit: {
      std::vector<MultiIndex> ells = domain.ells;
      for (const auto& l : ells)
        if (l.dim() != spec.dim || !in_lattice(l.coords(), spec.lattice))
          throw ValidationError("output index " + l.str() + " not in the basis lattice");
      std::sort(ells.begin(), ells.end());
      ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
      return ells;
    }
    case OutputDomain::Kind::Capped:
      if (domain.cap < 1)
        throw ValidationError("output cap must be >= 1");
      return size_ball(spec, domain.cap);
    default:
      return size_ball(spec, spec.N);
  }
}

template <class K>
concept PrefetchKernel = ParityKernel<K> && requires(const K& k) { k.cache().compute_missing({}); };

/// Collects every coefficient key the sums over `ells` touch and computes the missing ones.
template <class Kernel>
std::size_t prefetch_coefficients(const Kernel& kernel, const SparseSetSpec& spec,
                                  std::span<const DenseBox> inputs, std::span<const MultiIndex> ells)
{
  const auto& cache = kernel.cache();
  const std::size_t p = static_cast<std::size_t>(spec.p);
  std::vector<CoordBox> boxes;
  for (const auto& in : inputs)
    boxes.push_back(in.box());
  std::unordered_set<PackedKey, PackedKeyHash> seen;
  std::vector<PackedKey> missing;
  std::vector<Coord> flat, all(p + 1);
  for (const auto& ell : ells) {
    auto budget = spec.tuple_budget(ell.coords());
    if (!budget)
      continue;
    auto accept = [&](std::size_t i, std::span<const Coord> j) { return inputs[i].at(j) != Scalar{}; };
    auto leaf = [&](Coord) {
      all[0] = ell[0];
      std::copy(flat.begin(), flat.end(), all.begin() + 1);
      auto key = cache.key_of(all);
      if (key && seen.insert(*key).second && !cache.contains_key(*key))
        missing.push_back(*key);
    };
    walk_sparse(spec, p, *budget, std::span<const CoordBox>(boxes), flat, accept, leaf);
  }
  return cache.compute_missing(std::move(missing));
}

}  // namespace detail

/**
 * @brief One p-linear sparse sum per output index.
 *
 * Tuples are visited in lexicographic order; with a finite-momentum kernel the
 * last index is solved from the momentum instead of scanned, which visits the
 * same nonzero terms in the same order.
 */
template <CoefficientProvider P>
EvalResult direct_sparse_eval(const P& provider, std::span<const SpectralVector> inputs,
                              const SparseSetSpec& spec, const OutputDomain& domain = {},
                              const EvalOptions& opts = {})
{
  spec.validate();
  const BasisTag basis = provider.basis();
  if (inputs.size() != static_cast<std::size_t>(spec.p))
    throw ValidationError("direct_sparse_eval: expected " + std::to_string(spec.p) + " inputs, got "
                          + std::to_string(inputs.size()));
  if (spec.lattice != basis.lattice() || spec.dim != basis.dim)
    throw ValidationError("direct_sparse_eval: sparse set lattice does not match the " + basis.name()
                          + " basis");
  for (const auto& u : inputs)
    if (!(u.basis() == basis))
      throw ValidationError("direct_sparse_eval: input basis does not match the provider ("
                            + u.basis().str() + " vs " + basis.str() + ")");

  auto kernel = provider.kernel(spec.p);
  std::vector<detail::DenseBox> dense;
  dense.reserve(inputs.size());
  for (const auto& u : inputs)
    dense.push_back(detail::DenseBox::from(u));
  const auto ells = detail::output_indices(kernel, spec, dense, domain);
  if constexpr (detail::PrefetchKernel<decltype(kernel)>) {
    if (opts.prefetch)
      detail::prefetch_coefficients(kernel, spec, dense, ells);
  }

  std::vector<Scalar> values(ells.size());
  std::vector<std::uint64_t> terms(ells.size(), 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    detail::SparseEvaluator<decltype(kernel)> eval(kernel, spec, dense, opts.compensated);
    for (std::size_t k = begin; k < end; ++k)
      std::tie(values[k], terms[k]) = eval(ells[k].coords());
  };
  const std::size_t nthreads = std::max<std::size_t>(1, std::min<std::size_t>(opts.threads, ells.size()));
  if (nthreads == 1) {
    work(0, ells.size());
  } else {
    // interleaved blocks balance the uneven per-index cost
    const std::size_t block = 16;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t b = t * block; b < ells.size(); b += nthreads * block)
          work(b, std::min(ells.size(), b + block));
      });
    for (auto& th : pool)
      th.join();
  }

  EvalResult result{SpectralVector(basis), 0};
  for (std::size_t k = 0; k < ells.size(); ++k) {
    result.value.set(ells[k], values[k]);
    result.terms += terms[k];
  }
  return result;
}

template <CoefficientProvider P>
EvalResult direct_sparse_eval(const P& provider, std::initializer_list<SpectralVector> inputs,
                              const SparseSetSpec& spec, const OutputDomain& domain = {},
                              const EvalOptions& opts = {})
{
  std::vector<SpectralVector> v(inputs);
  return direct_sparse_eval(provider, std::span<const SpectralVector>(v), spec, domain, opts);
}

/**
 * @brief U(u^1) = u^1, U(u^1..u^{i+1}) = X^{N,alpha}(U(u^1..u^i), u^{i+1}) with max-norm sizes.
 *
 * Inner folds use provider.intermediate() (the plain product); the last fold
 * uses the provider itself.  Intermediates keep every produced entry.
 */
template <CoefficientProvider P>
EvalResult iterative_eval(const P& provider, std::span<const SpectralVector> inputs, Coord N, int alpha,
                          const OutputDomain& domain = {}, const EvalOptions& opts = {})
{
  if (inputs.empty())
    throw ValidationError("iterative_eval: needs at least one input");
  const BasisTag basis = provider.basis();
  for (const auto& u : inputs)
    if (!(u.basis() == basis))
      throw ValidationError("iterative_eval: input basis does not match the provider");
  SparseSetSpec spec;
  spec.p = 2;
  spec.N = N;
  spec.alpha = alpha;
  spec.size = SizeKind::MaxNorm;
  spec.lattice = basis.lattice();
  spec.dim = basis.dim;
  spec.validate();

  EvalResult acc{inputs[0], 0};
  if (inputs.size() == 1)
    return acc;
  auto inner = provider.intermediate();
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    std::vector<SpectralVector> pair{acc.value, inputs[i]};
    EvalResult step = (i + 1 == inputs.size())
                          ? direct_sparse_eval(provider, std::span<const SpectralVector>(pair), spec, domain, opts)
                          : direct_sparse_eval(inner, std::span<const SpectralVector>(pair), spec, domain, opts);
    acc.value = std::move(step.value);
    acc.terms += step.terms;
  }
  return acc;
}

// --- references ----------------------------------------------------------------------

/**
 * @brief Exact convolution X_k = sum_{k = j_1+...+j_p (+m)} b_m u_{j_1} ... u_{j_p}.
 *
 * Inputs are first truncated to max-norm <= K.  Without a symbol b = 1.
 */
inline SpectralVector dense_oracle_fourier(std::span<const SpectralVector> inputs, Coord K,
                                           const FourierSymbol* symbol = nullptr)
{
  if (inputs.empty())
    throw ValidationError("dense_oracle_fourier: no inputs");
  const BasisTag basis = inputs[0].basis();
  if (basis.kind != BasisKind::Fourier)
    throw ValidationError("dense_oracle_fourier: inputs must be Fourier vectors");
  for (const auto& u : inputs)
    if (!(u.basis() == basis))
      throw ValidationError("dense_oracle_fourier: inputs disagree on the basis");
  auto acc = detail::DenseBox::from(inputs[0].truncated(K));
  for (std::size_t i = 1; i < inputs.size(); ++i)
    acc = detail::convolve(acc, detail::DenseBox::from(inputs[i].truncated(K)));
  if (symbol) {
    if (symbol->dim != basis.dim)
      throw ValidationError("dense_oracle_fourier: symbol dimension mismatch");
    acc = detail::convolve(acc, detail::DenseBox::from(SpectralVector(basis, symbol->b)));
  }
  return acc.to_vector(basis);
}

inline SpectralVector dense_oracle_fourier(std::initializer_list<SpectralVector> inputs, Coord K,
                                           const FourierSymbol* symbol = nullptr)
{
  std::vector<SpectralVector> v(inputs);
  return dense_oracle_fourier(std::span<const SpectralVector>(v), K, symbol);
}

inline Coord max_degree(const SpectralVector& u)
{
  Coord d = 0;
  for (const auto& [j, v] : u.entries())
    d = std::max(d, j[0]);
  return d;
}

/**
 * @brief Transform method: evaluate the inputs at Gauss-Hermite nodes, multiply
 * pointwise, project onto chi_0 .. chi_{jmax_out}.
 *
 * No exactness check; with too few nodes the projection aliases.
 */
inline SpectralVector hermite_transform_product(std::span<const SpectralVector> inputs, std::size_t nodes,
                                                Coord jmax_out)
{
  if (inputs.empty())
    throw ValidationError("hermite transform: no inputs");
  for (const auto& u : inputs)
    if (u.basis().kind != BasisKind::Hermite)
      throw ValidationError("hermite transform: inputs must be Hermite vectors");
  if (jmax_out < 0)
    throw ValidationError("hermite transform: jmax_out must be >= 0");
  const std::size_t p = inputs.size();
  Coord dmax = jmax_out;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> coeffs(p);
  for (std::size_t k = 0; k < p; ++k) {
    for (const auto& [j, v] : inputs[k].entries())
      coeffs[k].emplace_back(static_cast<std::size_t>(j[0]), v);
    dmax = std::max(dmax, max_degree(inputs[k]));
  }
  auto rule = cached_rule(nodes);
  const double c = static_cast<double>(p + 1) / 2.0;
  const double inv_sqrt_c = 1.0 / std::sqrt(c);
  std::vector<double> chi(static_cast<std::size_t>(dmax) + 1);
  std::vector<Scalar> out(static_cast<std::size_t>(jmax_out) + 1);
  for (std::size_t i = 0; i < rule->size(); ++i) {
    hermite_batch(rule->nodes[i] * inv_sqrt_c, chi);
    Scalar f = rule->scaled_weights[i];
    for (std::size_t k = 0; k < p; ++k) {
      Scalar uk{};
      for (const auto& [j, v] : coeffs[k])
        uk += v * chi[j];
      f *= uk;
    }
    for (std::size_t l = 0; l < out.size(); ++l)
      out[l] += f * chi[l];
  }
  SpectralVector result(BasisTag::hermite());
  for (std::size_t l = 0; l < out.size(); ++l)
    result.set(MultiIndex{static_cast<Coord>(l)}, out[l] * inv_sqrt_c);
  return result;
}

/**
 * @brief Transform reference; refuses node counts that cannot integrate the
 * degree-(jmax_out + sum of input degrees) polynomial part exactly.
 */
inline SpectralVector dense_oracle_hermite(std::span<const SpectralVector> inputs, std::size_t nodes,
                                           Coord jmax_out)
{
  Coord degree = jmax_out;
  for (const auto& u : inputs)
    degree += max_degree(u);
  if (2 * static_cast<Coord>(nodes) - 1 < degree)
    throw ValidationError("dense_oracle_hermite: " + std::to_string(nodes) + " nodes cannot resolve degree "
                          + std::to_string(degree) + " (need " + std::to_string((degree + 2) / 2) + ")");
  return hermite_transform_product(inputs, nodes, jmax_out);
}

inline SpectralVector dense_oracle_hermite(std::initializer_list<SpectralVector> inputs, std::size_t nodes,
                                           Coord jmax_out)
{
  std::vector<SpectralVector> v(inputs);
  return dense_oracle_hermite(std::span<const SpectralVector>(v), nodes, jmax_out);
}

/// sum over all supported tuples of a_{l;j} u^1_{j_1} ... u^p_{j_p}, no sparsity.
template <CoefficientProvider P>
SpectralVector dense_coefficient_sum(const P& provider, std::span<const SpectralVector> inputs,
                                     std::span<const MultiIndex> ells)
{
  const std::size_t p = inputs.size();
  auto kernel = provider.kernel(static_cast<int>(p));
  const std::size_t d = provider.basis().dim;
  std::vector<std::vector<std::pair<MultiIndex, Scalar>>> lists(p);
  for (std::size_t i = 0; i < p; ++i)
    lists[i].assign(inputs[i].entries().begin(), inputs[i].entries().end());
  SpectralVector out(provider.basis());
  std::vector<Coord> flat(p * d);
  for (const auto& ell : ells) {
    Scalar sum{};
    auto rec = [&](auto&& self, std::size_t i, Scalar prod) -> void {
      if (i == p) {
        sum += kernel.coefficient(ell.coords(), IndexTuple(flat, d)) * prod;
        return;
      }
      for (const auto& [j, v] : lists[i]) {
        std::copy(j.coords().begin(), j.coords().end(), flat.begin() + static_cast<std::ptrdiff_t>(i * d));
        self(self, i + 1, prod * v);
      }
    };
    rec(rec, 0, Scalar(1.0));
    out.set(ell, sum);
  }
  return out;
}

/// l^1_s distance between two vectors of the same basis.
inline double error_report(const SpectralVector& approx, const SpectralVector& reference, double s,
                           SizeKind size = SizeKind::MaxNorm)
{
  return l1s_norm(difference(approx, reference), s, size);
}

}  // namespace spspec
