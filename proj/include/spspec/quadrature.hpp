#pragma once

/**
 * @file quadrature.hpp
 * @brief Gauss-Hermite rules (weight e^{-x^2}) and normalized Hermite functions.
 *
 * Hermite functions chi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)) are
 * evaluated with the orthonormal three-term recurrence on the polynomial part,
 * carrying a separate log-scale so that neither the Gaussian factor nor the
 * polynomial growth over- or underflows for large |x| or n.
 */

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace spspec {

struct QuadratureRule
{
  /// Strictly increasing, symmetric about 0.
  std::vector<double> nodes;
  /// Standard weights for e^{-x^2}; extreme ones underflow to 0 once n exceeds ~350.
  std::vector<double> weights;
  /// weights[i] * exp(nodes[i]^2), always finite and positive.
  std::vector<double> scaled_weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr std::size_t kMaxRuleSize = 1024;

namespace detail {

inline constexpr double kRescaleThreshold = 0x1p500;
inline constexpr double kRescaleLog = 500.0 * std::numbers::ln2;
inline const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

/// Polynomial parts h_{n-1}(x), h_n(x) of chi, each times e^{log_scale}.
struct ScaledPair
{
  double prev = 0.0;
  double cur = 0.0;
  double log_scale = 0.0;
};

inline ScaledPair hermite_poly_pair(std::size_t n, double x)
{
  ScaledPair s{0.0, kPiQuarter, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    double kd = static_cast<double>(k);
    double next = x * std::sqrt(2.0 / (kd + 1.0)) * s.cur - std::sqrt(kd / (kd + 1.0)) * s.prev;
    s.prev = s.cur;
    s.cur = next;
    if (std::abs(s.cur) > kRescaleThreshold) {
      s.prev /= kRescaleThreshold;
      s.cur /= kRescaleThreshold;
      s.log_scale += kRescaleLog;
    }
  }
  return s;
}

inline double apply_scale(double h, double log_factor)
{
  if (h == 0.0)
    return 0.0;
  if (log_factor > -600.0 && log_factor < 600.0)
    return h * std::exp(log_factor);
  return std::copysign(std::exp(std::log(std::abs(h)) + log_factor), h);
}

}  // namespace detail

/**
 * @brief Fills out[k] = chi_k(x) for k = 0 .. out.size()-1 in one sweep.
 */
inline void hermite_batch(double x, std::span<double> out)
{
  if (out.empty())
    return;
  double h_prev = 0.0, h_cur = detail::kPiQuarter;
  double log_factor = -0.5 * x * x;
  double factor = std::exp(log_factor);
  bool direct = log_factor > -600.0;
  auto emit = [&](double h) { return direct ? h * factor : detail::apply_scale(h, log_factor); };
  out[0] = emit(h_cur);
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    double kd = static_cast<double>(k);
    double next = x * std::sqrt(2.0 / (kd + 1.0)) * h_cur - std::sqrt(kd / (kd + 1.0)) * h_prev;
    h_prev = h_cur;
    h_cur = next;
    if (std::abs(h_cur) > detail::kRescaleThreshold) {
      h_prev /= detail::kRescaleThreshold;
      h_cur /= detail::kRescaleThreshold;
      log_factor += detail::kRescaleLog;
      factor = std::exp(log_factor);
      direct = log_factor > -600.0 && log_factor < 600.0;
    }
    out[k + 1] = emit(h_cur);
  }
}

inline std::vector<double> hermite_batch(std::size_t nmax, double x)
{
  std::vector<double> out(nmax + 1);
  hermite_batch(x, out);
  return out;
}

/// chi_n(x), normalized in L^2(R).
inline double hermite_function(std::size_t n, double x)
{
  auto s = detail::hermite_poly_pair(n, x);
  return detail::apply_scale(s.cur, s.log_scale - 0.5 * x * x);
}

/**
 * @brief n-point Gauss-Hermite rule.
 *
 * Initial nodes are the eigenvalues of the symmetric Jacobi matrix
 * (Golub-Welsch); each is then polished by Newton on the orthonormal
 * recurrence, and the weights follow from w_i = 1 / (n h_{n-1}(x_i)^2).
 */
inline QuadratureRule gauss_hermite_rule(std::size_t n)
{
  if (n < 1)
    throw QuadratureError("Gauss-Hermite rule needs n >= 1");
  if (n > kMaxRuleSize)
    throw QuadratureError("Gauss-Hermite rule with n = " + std::to_string(n)
                          + " exceeds the weight underflow limit " + std::to_string(kMaxRuleSize));

  std::vector<double> roots(n, 0.0);
  if (n > 1) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
    for (std::size_t k = 1; k < n; ++k)
      sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(static_cast<double>(k) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw QuadratureError("Jacobi eigenvalue solve failed for n = " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
      roots[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
  }

  const double sqrt2n = std::sqrt(2.0 * static_cast<double>(n));
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.scaled_weights.assign(n, 0.0);

  // Polish the non-negative half and mirror it.
  for (std::size_t i = n / 2; i < n; ++i) {
    double x = (n % 2 == 1 && i == n / 2) ? 0.0 : std::abs(roots[i]);
    if (x != 0.0) {
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        auto s = detail::hermite_poly_pair(n, x);
        // d/dx h_n = sqrt(2n) h_{n-1}
        double step = s.cur / (sqrt2n * s.prev);
        x -= step;
        if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(x))) {
          converged = true;
          break;
        }
      }
      if (!converged || !std::isfinite(x))
        throw QuadratureError("Newton refinement did not converge for node " + std::to_string(i)
                              + " of n = " + std::to_string(n));
    }
    auto s = detail::hermite_poly_pair(n, x);
    // log h_{n-1}(x)^2
    double log_h2 = 2.0 * (std::log(std::abs(s.prev)) + s.log_scale);
    double log_w = -std::log(static_cast<double>(n)) - log_h2;
    std::size_t mirror = n - 1 - i;
    rule.nodes[i] = x;
    rule.nodes[mirror] = -x;
    rule.weights[i] = rule.weights[mirror] = std::exp(log_w);
    rule.scaled_weights[i] = rule.scaled_weights[mirror] = std::exp(log_w + x * x);
  }
  for (std::size_t i = 1; i < n; ++i)
    if (!(rule.nodes[i] > rule.nodes[i - 1]))
      throw QuadratureError("Gauss-Hermite nodes not strictly increasing at index "
                            + std::to_string(i) + " of n = " + std::to_string(n));
  return rule;
}

/// Thread-safe memo of rules by node count.
class RuleCache
{
 public:
  std::shared_ptr<const QuadratureRule> get(std::size_t n)
  {
    {
      std::shared_lock lock(mutex_);
      if (auto it = rules_.find(n); it != rules_.end())
        return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(gauss_hermite_rule(n));
    std::unique_lock lock(mutex_);
    return rules_.emplace(n, std::move(rule)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::size_t, std::shared_ptr<const QuadratureRule>> rules_;
};

inline std::shared_ptr<const QuadratureRule> cached_rule(std::size_t n)
{
  static RuleCache cache;
  return cache.get(n);
}

/**
 * @brief Node-count policy for integrals of products of Hermite functions.
 *
 * A product of `factors` Hermite functions of degree at most D has polynomial
 * part of degree <= factors*D and Gaussian e^{-factors x^2 / 2}.  Standard
 * uses ceil(factors*D/2) + 8 nodes after substitution, Doubled twice as many.
 */
enum class NodePolicy { Standard, Doubled };

inline std::string policy_id(NodePolicy p) { return p == NodePolicy::Standard ? "half8" : "half8x2"; }

inline NodePolicy parse_policy_id(const std::string& id)
{
  if (id == "half8")
    return NodePolicy::Standard;
  if (id == "half8x2")
    return NodePolicy::Doubled;
  throw ValidationError("unknown node policy '" + id + "'");
}

inline std::size_t node_count(NodePolicy policy, std::size_t factors, std::size_t max_degree)
{
  std::size_t n = (factors * max_degree + 1) / 2 + 8;
  return policy == NodePolicy::Doubled ? 2 * n : n;
}

/**
 * @brief \int prod_k chi_{deg[k]}(x) dx with the policy's rule.
 *
 * Substitutes y = x sqrt(c), c = factors/2, so the product becomes a
 * polynomial in y times e^{-y^2}.
 */
inline double hermite_product_integral(std::span<const std::size_t> degrees, NodePolicy policy)
{
  if (degrees.empty())
    throw ValidationError("hermite_product_integral: no factors");
  std::size_t dmax = *std::max_element(degrees.begin(), degrees.end());
  std::size_t factors = degrees.size();
  auto rule = cached_rule(node_count(policy, factors, dmax));
  const double c = static_cast<double>(factors) / 2.0;
  const double inv_sqrt_c = 1.0 / std::sqrt(c);
  std::vector<double> chi(dmax + 1);
  double total = 0.0;
  for (std::size_t i = 0; i < rule->size(); ++i) {
    hermite_batch(rule->nodes[i] * inv_sqrt_c, chi);
    double prod = rule->scaled_weights[i];
    for (std::size_t d : degrees)
      prod *= chi[d];
    total += prod;
  }
  return total * inv_sqrt_c;
}

}  // namespace spspec
