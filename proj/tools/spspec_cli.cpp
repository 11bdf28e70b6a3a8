// spspec: sparse spectral product experiments from the command line.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spspec/spspec.hpp"

using namespace spspec;

namespace {

struct Common
{
  std::string basis = "fourier";
  int p = 3;
  double sigma = 3.0;
  int alpha = 0;
  std::string norm = "max";
  std::vector<Coord> Ns;
  std::string method = "direct";
  std::string cache;
  std::string out;
  unsigned threads = 1;
  std::size_t dim = 1;
  std::string policy = "half8";
  std::string symbol = "unit";
  std::optional<Coord> ell_cap;
  std::optional<Coord> ref_K;
  std::size_t nodes = 500;
  bool compensated = false;
};

BasisKind parse_basis(const std::string& s)
{
  if (s == "fourier")
    return BasisKind::Fourier;
  if (s == "hermite")
    return BasisKind::Hermite;
  throw ValidationError("unknown basis '" + s + "'");
}

SizeKind parse_norm(const std::string& s)
{
  if (s == "max")
    return SizeKind::MaxNorm;
  if (s == "prod")
    return SizeKind::ProdNorm;
  throw ValidationError("unknown norm '" + s + "'");
}

FourierSymbol parse_symbol(const std::string& s, std::size_t dim)
{
  if (s == "unit")
    return FourierSymbol::unit(dim);
  if (s == "analytic")
    return FourierSymbol::analytic_example(dim);
  throw ValidationError("unknown symbol '" + s + "'");
}

void add_problem_flags(CLI::App* cmd, Common& c)
{
  cmd->add_option("--basis", c.basis, "fourier|hermite")->capture_default_str();
  cmd->add_option("--p", c.p, "number of factors")->capture_default_str();
  cmd->add_option("--sigma", c.sigma, "power-law exponent of the test function")->capture_default_str();
  cmd->add_option("--alpha", c.alpha, "0|1")->capture_default_str();
  cmd->add_option("--norm", c.norm, "max|prod")->capture_default_str();
  cmd->add_option("--N", c.Ns, "sparse levels, comma separated")->delimiter(',')->required();
  cmd->add_option("--dim", c.dim, "Fourier dimension")->capture_default_str();
  cmd->add_option("--cache", c.cache, "Hermite coefficient cache to preload");
  cmd->add_option("--out", c.out, "CSV output path (default stdout)");
  cmd->add_option("--threads", c.threads, "worker threads")->capture_default_str();
  cmd->add_option("--policy", c.policy, "Hermite node policy half8|half8x2")->capture_default_str();
  cmd->add_option("--symbol", c.symbol, "Fourier symbol unit|analytic")->capture_default_str();
  cmd->add_option("--ell-cap", c.ell_cap, "output cap size(l) <= cap");
  cmd->add_option("--ref-K", c.ref_K, "input truncation of the reference");
  cmd->add_option("--nodes", c.nodes, "nodes of the Hermite reference transform")->capture_default_str();
  cmd->add_flag("--compensated", c.compensated, "Kahan summation");
}

ConvergeConfig to_config(const Common& c)
{
  ConvergeConfig cfg;
  cfg.basis = parse_basis(c.basis);
  cfg.dim = c.dim;
  cfg.p = c.p;
  cfg.sigma = c.sigma;
  cfg.alpha = c.alpha;
  cfg.size = parse_norm(c.norm);
  cfg.Ns = c.Ns;
  cfg.method = parse_method(c.method);
  cfg.threads = c.threads;
  cfg.compensated = c.compensated;
  parse_symbol(c.symbol, c.dim);
  cfg.analytic_symbol = c.symbol == "analytic";
  cfg.reference_K = c.ref_K;
  cfg.reference_nodes = c.nodes;
  cfg.ell_cap = c.ell_cap;
  cfg.policy = parse_policy_id(c.policy);
  return cfg;
}

std::unique_ptr<HermiteProvider> hermite_provider(const Common& c)
{
  if (c.cache.empty())
    return std::make_unique<HermiteProvider>(parse_policy_id(c.policy));
  return std::make_unique<HermiteProvider>(load_cache(std::filesystem::path(c.cache)));
}

/// CSV goes to --out or stdout; the summary goes to stdout or, when stdout carries CSV, stderr.
struct Sink
{
  std::ofstream file;
  std::ostream* csv = &std::cout;
  std::ostream* info = &std::cerr;

  explicit Sink(const std::string& path)
  {
    if (path.empty())
      return;
    file.open(path);
    if (!file)
      throw std::runtime_error("cannot write " + path);
    csv = &file;
    info = &std::cout;
  }
};

int cmd_converge(const Common& c, Coord fit_lo, Coord fit_hi)
{
  auto cfg = to_config(c);
  auto hp = hermite_provider(c);
  auto res = run_converge(cfg, hp.get());
  Sink sink(c.out);
  write_csv(*sink.csv, res.rows);
  auto fit = fit_slope(res.rows, fit_lo, fit_hi);
  *sink.info << "reference: " << res.reference_note << '\n';
  *sink.info << "reference_tail: " << format_double(res.reference_tail) << '\n';
  *sink.info << "slope: " << format_slope(fit) << '\n';
  return 0;
}

int cmd_bench(const Common& c, const std::vector<std::string>& methods, int repeats)
{
  BenchConfig bc;
  bc.problem = to_config(c);
  bc.repeats = repeats;
  bc.methods.clear();
  for (const auto& m : methods)
    bc.methods.push_back(parse_method(m));
  auto hp = hermite_provider(c);
  auto rows = run_bench(bc, hp.get());
  Sink sink(c.out);
  write_csv(*sink.csv, rows);
  return 0;
}

int cmd_count(const Common& c, std::optional<Coord> boxM, std::optional<Coord> q)
{
  CountConfig cc;
  cc.p = c.p;
  cc.alpha = c.alpha;
  cc.size = parse_norm(c.norm);
  cc.lattice = parse_basis(c.basis) == BasisKind::Fourier ? Lattice::Integers : Lattice::Naturals;
  cc.dim = c.dim;
  cc.Ns = c.Ns;
  cc.boxM = boxM;
  cc.momentum_q = q;
  auto rows = run_count(cc);
  Sink sink(c.out);
  write_count_csv(*sink.csv, rows);
  return 0;
}

int cmd_coeffs(int p, Coord jmax, const std::string& policy, const std::string& out)
{
  auto t0 = std::chrono::steady_clock::now();
  auto cache = build_cache(p, jmax, parse_policy_id(policy));
  save_cache(cache, std::filesystem::path(out));
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "entries: " << cache.size() << '\n' << "elapsed_s: " << format_double(dt) << '\n';
  return 0;
}

int cmd_eval(const Common& c, const std::vector<std::string>& paths)
{
  const BasisKind kind = parse_basis(c.basis);
  const BasisTag basis = kind == BasisKind::Fourier ? BasisTag::fourier(c.dim) : BasisTag::hermite();
  std::vector<SpectralVector> inputs;
  for (const auto& path : paths) {
    std::ifstream is(path);
    if (!is)
      throw std::runtime_error("cannot read " + path);
    try {
      inputs.push_back(read_text(is, basis));
    } catch (const FormatError& e) {
      throw FormatError(path + ": " + e.what());
    }
  }
  if (inputs.size() == 1)
    inputs.assign(static_cast<std::size_t>(c.p), inputs[0]);
  if (inputs.size() != static_cast<std::size_t>(c.p))
    throw ValidationError("eval: got " + std::to_string(inputs.size()) + " inputs for p = " + std::to_string(c.p));
  if (c.Ns.size() != 1)
    throw ValidationError("eval takes a single N");
  const Method method = parse_method(c.method);

  SparseSetSpec spec;
  spec.p = c.p;
  spec.N = c.Ns[0];
  spec.alpha = c.alpha;
  spec.size = parse_norm(c.norm);
  spec.lattice = basis.lattice();
  spec.dim = basis.dim;
  OutputDomain domain = c.ell_cap ? OutputDomain::capped(*c.ell_cap) : OutputDomain::automatic();
  EvalOptions opts{c.compensated, c.threads, true};

  EvalResult r;
  auto run = [&](const auto& provider) {
    if (method == Method::Iterative)
      return iterative_eval(provider, inputs, spec.N, spec.alpha, domain, opts);
    return direct_sparse_eval(provider, inputs, spec, domain, opts);
  };
  if (method == Method::Transform) {
    if (kind != BasisKind::Hermite)
      throw ValidationError("the transform method is only available for the Hermite basis");
    r.value = hermite_transform_product(inputs, static_cast<std::size_t>(spec.N), spec.N - 1);
  } else if (kind == BasisKind::Fourier) {
    r = run(FourierProvider(parse_symbol(c.symbol, c.dim)));
  } else {
    r = run(*hermite_provider(c));
  }
  Sink sink(c.out);
  write_text(*sink.csv, r.value);
  *sink.info << "terms: " << r.terms << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Sparse evaluation of polynomial functionals on spectral coefficients"};
  app.require_subcommand(1);

  Common converge_opts;
  Coord fit_lo = 1, fit_hi = std::numeric_limits<Coord>::max();
  auto* converge = app.add_subcommand("converge", "l1 error against a reference, one CSV row per N");
  add_problem_flags(converge, converge_opts);
  converge->add_option("--method", converge_opts.method, "direct|iterative|transform")->capture_default_str();
  converge->add_option("--fit-min", fit_lo, "smallest N in the slope fit");
  converge->add_option("--fit-max", fit_hi, "largest N in the slope fit");

  Common bench_opts;
  std::vector<std::string> bench_methods{"direct", "iterative"};
  int repeats = 3;
  auto* bench = app.add_subcommand("bench", "median wall time per method and N");
  add_problem_flags(bench, bench_opts);
  bench->add_option("--method", bench_methods, "methods, comma separated")->delimiter(',')->capture_default_str();
  bench->add_option("--repeats", repeats, "timed runs per row (>= 3)")->capture_default_str();

  Common count_opts;
  count_opts.p = 2;
  std::optional<Coord> boxM, q;
  auto* count = app.add_subcommand("count", "sparse set cardinalities");
  count->add_option("--basis", count_opts.basis, "fourier (Z^d) | hermite (N)")->capture_default_str();
  count->add_option("--p", count_opts.p, "number of factors")->capture_default_str();
  count->add_option("--alpha", count_opts.alpha, "0|1")->capture_default_str();
  count->add_option("--norm", count_opts.norm, "max|prod")->capture_default_str();
  count->add_option("--N", count_opts.Ns, "levels, comma separated")->delimiter(',')->required();
  count->add_option("--dim", count_opts.dim, "index dimension")->capture_default_str();
  count->add_option("--box-M", boxM, "cap size(j) <= M on every index");
  count->add_option("--momentum-q", q, "count (l, j) with |momentum| <= q");
  count->add_option("--out", count_opts.out, "CSV output path");

  int coeff_p = 2;
  Coord jmax = 0;
  std::string coeff_policy = "half8", coeff_out;
  auto* coeffs = app.add_subcommand("coeffs", "build and save a Hermite coefficient cache");
  coeffs->add_option("--p", coeff_p, "number of factors")->capture_default_str();
  coeffs->add_option("--jmax", jmax, "largest index in a cached tuple")->required();
  coeffs->add_option("--policy", coeff_policy, "node policy half8|half8x2")->capture_default_str();
  coeffs->add_option("--out", coeff_out, "cache file path")->required();

  Common eval_opts;
  eval_opts.p = 2;
  std::vector<std::string> inputs;
  auto* eval = app.add_subcommand("eval", "evaluate serialized vectors");
  add_problem_flags(eval, eval_opts);
  eval->add_option("--method", eval_opts.method, "direct|iterative|transform")->capture_default_str();
  eval->add_option("--input", inputs, "vector files (one file is repeated p times)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*converge)
      return cmd_converge(converge_opts, fit_lo, fit_hi);
    if (*bench)
      return cmd_bench(bench_opts, bench_methods, repeats);
    if (*count)
      return cmd_count(count_opts, boxM, q);
    if (*coeffs)
      return cmd_coeffs(coeff_p, jmax, coeff_policy, coeff_out);
    if (*eval)
      return cmd_eval(eval_opts, inputs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
