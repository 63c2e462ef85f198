#pragma once

/**
 * @file baselines.hpp
 * @brief Comparison discretizations: Gauss-Legendre Nystrom (G-Leg) and the
 *        two-step deferred approach over the composite trapezium rule (T-Def).
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "semismooth/fredholm.hpp"
#include "semismooth/kernels.hpp"

namespace semismooth {

class NotApplicableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class QuadratureFamily { gauss_legendre, trapezium };

struct QuadratureRule {
  Vector nodes;
  Vector weights;
  QuadratureFamily family = QuadratureFamily::gauss_legendre;
};

/// Values of a Nystrom solution at its quadrature nodes.
struct NodalSolution {
  Vector nodes;
  Vector values;
  double rcond = 1.0;

  [[nodiscard]] bool ill_conditioned() const { return !(rcond >= kConditionWarning); }
};

/// n-point Gauss-Legendre rule on [a, b]; roots by Newton on P_n.
[[nodiscard]] inline QuadratureRule gauss_legendre_rule(int n, double a = -1.0, double b = 1.0) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
  constexpr double tol = 1e-14;
  constexpr int max_iter = 100;
  QuadratureRule rule;
  rule.family = QuadratureFamily::gauss_legendre;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("gauss_legendre_rule: Newton did not converge for root " + std::to_string(i));
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

/// Composite trapezium rule with m panels (m + 1 nodes) on [a, b].
[[nodiscard]] inline QuadratureRule trapezium_rule(int m, double a, double b) {
  if (m < 1) throw std::invalid_argument("trapezium_rule: need at least one panel");
  QuadratureRule rule;
  rule.family = QuadratureFamily::trapezium;
  const double h = (b - a) / m;
  rule.nodes = Vector::LinSpaced(m + 1, a, b);
  rule.weights = Vector::Constant(m + 1, h);
  rule.weights[0] = rule.weights[m] = 0.5 * h;
  return rule;
}

/// Solves x_i + lambda sum_j w_j k(t_i, s_j) x_j = y(t_i).
template <typename Kernel>
[[nodiscard]] NodalSolution nystrom_solve(const Kernel& kernel, const QuadratureRule& rule, double lambda,
                                          const ScalarFn& rhs) {
  const auto n = rule.nodes.size();
  const Matrix k = sample_matrix([&](double t, double s) { return kernel(t, s); }, rule.nodes, rule.nodes);
  const Matrix a = Matrix::Identity(n, n) + lambda * k * rule.weights.asDiagonal();
  const auto lin = dense_solve(a, sample_vector(rhs, rule.nodes));
  return {rule.nodes, lin.x, lin.rcond};
}

/**
 * Composite trapezium Nystrom on a uniform grid for a semismooth kernel. The
 * integral is split at s = t_i, so the diagonal node takes h/2 from each side
 * with its own branch.
 */
[[nodiscard]] inline NodalSolution trapezium_nystrom(const SemismoothKernel& kernel, double a, double b, int m,
                                                     double lambda, const ScalarFn& rhs) {
  const auto rule = trapezium_rule(m, a, b);
  const double h = (b - a) / m;
  const auto& t = rule.nodes;
  Matrix k(m + 1, m + 1);
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      if (j < i) {
        k(i, j) = rule.weights[j] * kernel.lower(t[i], t[j]);
      } else if (j > i) {
        k(i, j) = rule.weights[j] * kernel.upper(t[i], t[j]);
      } else {
        const double left = (i > 0) ? 0.5 * h : 0.0;
        const double right = (i < m) ? 0.5 * h : 0.0;
        k(i, i) = left * kernel.lower(t[i], t[i]) + right * kernel.upper(t[i], t[i]);
      }
    }
  const Matrix sys = Matrix::Identity(m + 1, m + 1) + lambda * k;
  const auto lin = dense_solve(sys, sample_vector(rhs, t));
  return {t, lin.x, lin.rcond};
}

/**
 * Two-step deferred approach to the limit: trapezium solutions x1, x2, x3 at
 * spacings h, h/2, h/4 combined as (64 x3 + x1 - 20 x2) / 45 on the coarse grid.
 */
[[nodiscard]] inline NodalSolution trapezium_deferred_solve(const SemismoothKernel& kernel, double a, double b,
                                                            int m_panels, double lambda, const ScalarFn& rhs) {
  if (kernel.has_singularities())
    throw NotApplicableError("trapezium_deferred_solve: trapezium methods are not applicable to singular kernels");
  if (m_panels < 1) throw std::invalid_argument("trapezium_deferred_solve: need at least one panel");
  const auto x1 = trapezium_nystrom(kernel, a, b, m_panels, lambda, rhs);
  const auto x2 = trapezium_nystrom(kernel, a, b, 2 * m_panels, lambda, rhs);
  const auto x3 = trapezium_nystrom(kernel, a, b, 4 * m_panels, lambda, rhs);
  NodalSolution out;
  out.nodes = x1.nodes;
  out.values.resize(m_panels + 1);
  for (int i = 0; i <= m_panels; ++i)
    out.values[i] = (64.0 * x3.values[4 * i] + x1.values[i] - 20.0 * x2.values[2 * i]) / 45.0;
  out.rcond = std::min({x1.rcond, x2.rcond, x3.rcond});
  return out;
}

}  // namespace semismooth
