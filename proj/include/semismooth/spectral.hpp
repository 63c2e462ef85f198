#pragma once

/**
 * @file spectral.hpp
 * @brief Chebyshev grids, the discrete cosine matrix and the left/right
 *        spectral integration operators.
 *
 * Everything here works on the first-kind Chebyshev points
 *
 *     tau_k = cos((2k+1) pi / (2(n+1))),   k = 0..n   (descending)
 *
 * and on coefficient vectors of expansions f = sum_j alpha_j T_j. Node-space
 * operators are obtained by conjugating a coefficient-space map with C:
 *
 *     W = C S_L C^{-1}   row k integrates from -1 up to tau_k
 *     V = C S_R C^{-1}   row k integrates from tau_k up to 1
 */

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace semismooth {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Nodes tau_k = cos((2k+1)pi/(2(n+1))), k = 0..n, in descending order.
[[nodiscard]] inline Vector chebyshev_nodes(int n) {
  if (n < 0) throw std::invalid_argument("chebyshev_nodes: order must be >= 0");
  Vector tau(n + 1);
  const double denom = 2.0 * (n + 1);
  for (int k = 0; k <= n; ++k) tau[k] = std::cos((2 * k + 1) * std::numbers::pi / denom);
  // cos(pi/2) is not exactly zero in floating point; the middle node is.
  if (n % 2 == 0) tau[n / 2] = 0.0;
  return tau;
}

/// Evaluates sum_j coeffs[j] T_j(x) with the three-term recurrence.
[[nodiscard]] inline double chebyshev_sum(const Vector& coeffs, double x) {
  const auto m = coeffs.size();
  if (m == 0) return 0.0;
  double t_prev = 1.0, t_cur = x;
  double acc = coeffs[0];
  if (m > 1) acc += coeffs[1] * x;
  for (Eigen::Index j = 2; j < m; ++j) {
    const double t_next = 2.0 * x * t_cur - t_prev;
    acc += coeffs[j] * t_next;
    t_prev = t_cur;
    t_cur = t_next;
  }
  return acc;
}

/// T_j(x) by recurrence.
[[nodiscard]] inline double chebyshev_t(int j, double x) {
  Vector e = Vector::Zero(j + 1);
  e[j] = 1.0;
  return chebyshev_sum(e, x);
}

/// Chebyshev points of order n mapped affinely onto [a, b].
struct ChebGrid {
  int order = 0;
  double a = -1.0;
  double b = 1.0;
  Vector tau;  ///< reference nodes in (-1, 1), descending
  Vector eta;  ///< mapped nodes in (a, b), descending

  ChebGrid() = default;
  ChebGrid(int n, double left, double right) : order(n), a(left), b(right), tau(chebyshev_nodes(n)) {
    if (!(left < right)) throw std::invalid_argument("ChebGrid: require a < b");
    eta = half_width() * tau.array() + midpoint();
  }

  [[nodiscard]] int size() const { return order + 1; }
  [[nodiscard]] double half_width() const { return 0.5 * (b - a); }
  [[nodiscard]] double midpoint() const { return 0.5 * (a + b); }
  [[nodiscard]] double to_interval(double t_ref) const { return half_width() * t_ref + midpoint(); }
  [[nodiscard]] double to_reference(double t) const { return (t - midpoint()) / half_width(); }
};

/// C_{kj} = T_j(tau_k) = cos((2k+1) j pi / (2(n+1))), from the closed form.
[[nodiscard]] inline Matrix cosine_matrix(int n) {
  if (n < 0) throw std::invalid_argument("cosine_matrix: order must be >= 0");
  Matrix c(n + 1, n + 1);
  const double denom = 2.0 * (n + 1);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j) {
      // reduce (2k+1)j mod 4(n+1) so the cosine argument stays in [0, 2pi)
      const long long phase = (static_cast<long long>(2 * k + 1) * j) % (4LL * (n + 1));
      c(k, j) = std::cos(static_cast<double>(phase) * std::numbers::pi / denom);
    }
  return c;
}

/// C^{-1} = diag(1/(n+1), 2/(n+1), ..., 2/(n+1)) C^T.
[[nodiscard]] inline Matrix inverse_cosine_matrix(int n, const Matrix& c) {
  if (c.rows() != n + 1 || c.cols() != n + 1)
    throw std::invalid_argument("inverse_cosine_matrix: C must be (n+1)x(n+1)");
  Matrix cinv = c.transpose();
  cinv.row(0) /= (n + 1);
  if (n > 0) cinv.bottomRows(n) *= 2.0 / (n + 1);
  return cinv;
}

namespace detail {

// Coefficient map alpha -> beta of the antiderivative, all n+2 output rows:
//   beta_1 = alpha_0 - alpha_2/2,  beta_j = (alpha_{j-1} - alpha_{j+1})/(2j).
// Row 0 is left empty; the integration constant is fixed by the caller.
inline Matrix antiderivative_rows(int n) {
  Matrix b = Matrix::Zero(n + 2, n + 1);
  b(1, 0) = 1.0;
  if (n >= 2) b(1, 2) = -0.5;
  for (int j = 2; j <= n + 1; ++j) {
    b(j, j - 1) = 1.0 / (2.0 * j);
    if (j + 1 <= n) b(j, j + 1) = -1.0 / (2.0 * j);
  }
  return b;
}

inline void require_positive_order(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": order must be >= 1");
}

}  // namespace detail

/**
 * Full (n+2)x(n+1) left integration map: coefficients of f to coefficients
 * b_0..b_{n+1} of F(x) = int_{-1}^{x} f, with b_0 chosen so that F(-1) = 0.
 */
[[nodiscard]] inline Matrix spectral_matrix_left_full(int n) {
  detail::require_positive_order(n, "spectral_matrix_left");
  Matrix s = detail::antiderivative_rows(n);
  // F(-1) = 0  =>  b_0 = sum_{j>=1} (-1)^{j+1} b_j
  for (int j = 1; j <= n + 1; ++j) s.row(0) += ((j % 2 == 1) ? 1.0 : -1.0) * s.row(j);
  return s;
}

/// Full (n+2)x(n+1) right map: coefficients of G(x) = int_x^1 f.
[[nodiscard]] inline Matrix spectral_matrix_right_full(int n) {
  detail::require_positive_order(n, "spectral_matrix_right");
  Matrix s = detail::antiderivative_rows(n);
  s.bottomRows(n + 1) *= -1.0;
  // G(1) = 0  =>  b_0 = -sum_{j>=1} b_j  (the rows below are already negated)
  for (int j = 1; j <= n + 1; ++j) s.row(0) -= s.row(j);
  return s;
}

/**
 * Square left spectral integration matrix S_L. The T_{n+1} coefficient is
 * dropped after the integration constant has been fixed; T_{n+1} vanishes at
 * every tau_k, so node values are unaffected.
 */
[[nodiscard]] inline Matrix spectral_matrix_left(int n) { return spectral_matrix_left_full(n).topRows(n + 1); }

/// Square right spectral integration matrix S_R (same truncation as S_L).
[[nodiscard]] inline Matrix spectral_matrix_right(int n) { return spectral_matrix_right_full(n).topRows(n + 1); }

/// Per-order bundle of the spectral operators on [-1, 1].
struct SpectralOperators {
  int order = 0;
  Vector tau;
  Matrix c;
  Matrix cinv;
  Matrix s_left;
  Matrix s_right;
  Matrix w;      ///< C S_L C^{-1}
  Matrix v;      ///< C S_R C^{-1}
  Vector sigma;  ///< full-interval weights, [1..1] S_L C^{-1}

  [[nodiscard]] int size() const { return order + 1; }
};

[[nodiscard]] inline SpectralOperators build_operators(int n) {
  detail::require_positive_order(n, "build_operators");
  SpectralOperators ops;
  ops.order = n;
  ops.tau = chebyshev_nodes(n);
  ops.c = cosine_matrix(n);
  ops.cinv = inverse_cosine_matrix(n, ops.c);
  const Matrix left_full = spectral_matrix_left_full(n);
  ops.s_left = left_full.topRows(n + 1);
  ops.s_right = spectral_matrix_right(n);
  ops.w = ops.c * ops.s_left * ops.cinv;
  ops.v = ops.c * ops.s_right * ops.cinv;
  // T_j(1) = 1 for every j, including the dropped T_{n+1} term.
  ops.sigma = (Eigen::RowVectorXd::Ones(n + 2) * left_full * ops.cinv).transpose();

#ifndef NDEBUG
  const double id_err = (ops.cinv * ops.c - Matrix::Identity(n + 1, n + 1)).cwiseAbs().rowwise().sum().maxCoeff();
  assert(id_err < 1e-10 && "C^{-1} C != I");
  assert(ops.w.allFinite() && ops.v.allFinite());
#endif
  return ops;
}

}  // namespace semismooth
