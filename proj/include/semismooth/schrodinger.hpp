#pragma once

/**
 * @file schrodinger.hpp
 * @brief Radial Schrodinger equation with a semismooth nonlocal potential.
 *
 * psi'' + kappa^2 psi = int_0^T v(r, r') psi(r') dr' is solved in its integral
 * form
 *
 *   psi(r) + c(r)/kappa int_0^T k1(r,r') psi(r') dr'
 *          + s(r)/kappa int_0^T k2(r,r') psi(r') dr' = sin(kappa r)
 *
 * with c = cos(kappa .), s = sin(kappa .), k1(r,r') = int_0^r s(p) v(p,r') dp
 * and k2(r,r') = int_r^T c(p) v(p,r') dp. Both k1 and k2 are semismooth in
 * (r, r'); their branches K11/K12 and K21/K22 are built by spectral
 * integration of the sampled potential branches V1, V2.
 */

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "semismooth/fredholm.hpp"
#include "semismooth/kernels.hpp"
#include "semismooth/spectral.hpp"

namespace semismooth {

struct KernelMatrices {
  Matrix k11;  ///< k1 for r' <= r
  Matrix k12;  ///< k1 for r' >= r
  Matrix k21;  ///< k2 for r' <= r
  Matrix k22;  ///< k2 for r' >= r
};

struct SchrodingerSystem {
  ChebGrid grid;
  Vector cos_diag;  ///< diagonal of D_c
  Vector sin_diag;  ///< diagonal of D_s
  Matrix v1;        ///< (v1(t_i, t_j))
  Matrix v2;        ///< (v2(t_i, t_j))
  KernelMatrices kernels;
  Matrix matrix;
  Vector rhs;
};

namespace detail {

inline void check_potential(const NonlocalPotential& potential) {
  if (!(potential.kappa > 0.0)) throw std::invalid_argument("schrodinger: kappa must be positive");
  if (!(potential.cutoff > 0.0)) throw std::invalid_argument("schrodinger: cutoff T must be positive");
  if (!potential.v1 || !potential.v2) throw std::invalid_argument("schrodinger: potential branches unset");
}

inline Matrix sample_potential(const KernelFn& v, const Vector& nodes) {
  Matrix m = sample_matrix(v, nodes, nodes);
  if (!m.allFinite()) throw EvaluationError("schrodinger: potential not finite on the grid");
  return m;
}

// Broadcast d across rows: entry (i, j) = d_j.
inline Matrix broadcast_rows(const Vector& d) { return Matrix::Ones(d.size(), 1) * d.transpose(); }

}  // namespace detail

/**
 * K12 = T/2 W D_s V1,  K21 = T/2 V D_c V2,
 * K11 = T/2 [1 d^T + W D_s V2],  d = diag(W D_s (V1 - V2)),
 * K22 = T/2 [V D_c V1 + 1 e^T],  e = diag(V D_c (V2 - V1)).
 * The broadcast terms carry the integrals that run to the column node r'.
 */
[[nodiscard]] inline KernelMatrices build_kernel_matrices(const NonlocalPotential& potential,
                                                          const SpectralOperators& ops, const ChebGrid& grid) {
  detail::check_potential(potential);
  if (ops.order != grid.order) throw std::invalid_argument("build_kernel_matrices: order mismatch");
  const double k = potential.kappa;
  const Vector s = grid.eta.unaryExpr([k](double t) { return std::sin(k * t); });
  const Vector c = grid.eta.unaryExpr([k](double t) { return std::cos(k * t); });
  const Matrix v1 = detail::sample_potential(potential.v1, grid.eta);
  const Matrix v2 = detail::sample_potential(potential.v2, grid.eta);
  const double h = grid.half_width();

  const Matrix w_s = ops.w * s.asDiagonal();
  const Matrix v_c = ops.v * c.asDiagonal();

  KernelMatrices km;
  km.k12 = h * (w_s * v1);
  km.k21 = h * (v_c * v2);
  const Vector d = (w_s * (v1 - v2)).diagonal();
  const Vector e = (v_c * (v2 - v1)).diagonal();
  km.k11 = h * (detail::broadcast_rows(d) + w_s * v2);
  km.k22 = h * (v_c * v1 + detail::broadcast_rows(e));
  return km;
}

/**
 * M = I + T/(2 kappa) D_c (W o K11 + V o K12) + T/(2 kappa) D_s (W o K21 + V o K22).
 * The right-hand side is sin(kappa t) unless an override is given.
 */
[[nodiscard]] inline SchrodingerSystem assemble(const NonlocalPotential& potential, int n,
                                                const std::optional<ScalarFn>& rhs_override = std::nullopt) {
  detail::check_potential(potential);
  const auto ops = build_operators(n);
  SchrodingerSystem sys;
  sys.grid = ChebGrid(n, 0.0, potential.cutoff);
  const double k = potential.kappa;
  sys.sin_diag = sys.grid.eta.unaryExpr([k](double t) { return std::sin(k * t); });
  sys.cos_diag = sys.grid.eta.unaryExpr([k](double t) { return std::cos(k * t); });
  sys.v1 = detail::sample_potential(potential.v1, sys.grid.eta);
  sys.v2 = detail::sample_potential(potential.v2, sys.grid.eta);
  sys.kernels = build_kernel_matrices(potential, ops, sys.grid);

  const auto& km = sys.kernels;
  const double scale = sys.grid.half_width() / k;
  sys.matrix = Matrix::Identity(n + 1, n + 1) +
               scale * sys.cos_diag.asDiagonal() * (schur_product(ops.w, km.k11) + schur_product(ops.v, km.k12)) +
               scale * sys.sin_diag.asDiagonal() * (schur_product(ops.w, km.k21) + schur_product(ops.v, km.k22));
  sys.rhs = rhs_override ? sample_vector(*rhs_override, sys.grid.eta) : sys.sin_diag;
  return sys;
}

[[nodiscard]] inline ChebSolution solve(const SchrodingerSystem& system) {
  const auto lin = dense_solve(system.matrix, system.rhs);
  return ChebSolution::from_values({system.grid}, lin.x, lin.rcond);
}

[[nodiscard]] inline ChebSolution solve_schrodinger(const NonlocalPotential& potential, int n,
                                                    const std::optional<ScalarFn>& rhs_override = std::nullopt) {
  return solve(assemble(potential, n, rhs_override));
}

/**
 * e_n = ||psi_2n(t_i) - psi_n(t_i)||_inf / ||psi_2n(t_i)||_inf over the n-grid,
 * with psi_2n carried to the coarse nodes by its Chebyshev interpolant.
 */
[[nodiscard]] inline double self_convergence(const NonlocalPotential& potential, int n,
                                             const std::optional<ScalarFn>& rhs_override = std::nullopt) {
  if (n < 4) throw std::invalid_argument("self_convergence: n must be >= 4");
  const auto coarse = solve_schrodinger(potential, n, rhs_override);
  const auto fine = solve_schrodinger(potential, 2 * n, rhs_override);
  return relative_error(coarse.values(), fine.evaluate(coarse.nodes()));
}

}  // namespace semismooth
