#pragma once

/**
 * @file fredholm.hpp
 * @brief Single-interval discretization of x + lambda * K x = y.
 *
 * Two rules are provided:
 *  - smooth rule:      [I + lambda (b-a)/2 K D_sigma] x = y
 *  - semismooth rule:  [I + lambda (b-a)/2 (W o K1 + V o K2)] x = y
 * where o is the Schur (entrywise) product and K1, K2 sample the two kernel
 * branches at all node pairs. For k1 = k2 both rules produce the same matrix
 * up to rounding, since every row of W + V equals sigma.
 */

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semismooth/kernels.hpp"
#include "semismooth/spectral.hpp"

namespace semismooth {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reciprocal condition estimate below which a solve is flagged.
inline constexpr double kConditionWarning = 1e-12;

[[nodiscard]] inline Matrix schur_product(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("schur_product: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  return a.cwiseProduct(b);
}

/// (f(rows_i, cols_j))_{ij}.
template <typename F>
[[nodiscard]] Matrix sample_matrix(F&& f, const Vector& rows, const Vector& cols) {
  Matrix m(rows.size(), cols.size());
  for (Eigen::Index i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols.size(); ++j) m(i, j) = f(rows[i], cols[j]);
  return m;
}

template <typename F>
[[nodiscard]] Vector sample_vector(F&& f, const Vector& nodes) {
  Vector out(nodes.size());
  for (Eigen::Index i = 0; i < nodes.size(); ++i) {
    out[i] = f(nodes[i]);
    if (!std::isfinite(out[i])) throw EvaluationError("right-hand side not finite at " + std::to_string(nodes[i]));
  }
  return out;
}

enum class Rule { smooth, semismooth };

struct DiscreteSystem {
  Matrix matrix;
  Vector rhs;
  ChebGrid grid;
  Rule rule = Rule::semismooth;
};

/// Smooth (Alg-1) rule; a SemismoothKernel is sampled with branch selection.
template <typename Kernel>
[[nodiscard]] DiscreteSystem discretize_smooth(const Kernel& kernel, const ChebGrid& grid, double lambda,
                                               const ScalarFn& rhs) {
  const auto ops = build_operators(grid.order);
  const Matrix k = sample_matrix([&](double t, double s) { return kernel(t, s); }, grid.eta, grid.eta);
  DiscreteSystem sys;
  sys.matrix = Matrix::Identity(grid.size(), grid.size()) + lambda * grid.half_width() * k * ops.sigma.asDiagonal();
  sys.rhs = sample_vector(rhs, grid.eta);
  sys.grid = grid;
  sys.rule = Rule::smooth;
  return sys;
}

/// lambda (b-a)/2 (W o K1 + V o K2) on one panel, without the identity.
[[nodiscard]] inline Matrix semismooth_block(const SemismoothKernel& kernel, const SpectralOperators& ops,
                                             const ChebGrid& grid, double lambda) {
  const Matrix k1 = sample_matrix([&](double t, double s) { return kernel.lower(t, s); }, grid.eta, grid.eta);
  const Matrix k2 = sample_matrix([&](double t, double s) { return kernel.upper(t, s); }, grid.eta, grid.eta);
  return lambda * grid.half_width() * (schur_product(ops.w, k1) + schur_product(ops.v, k2));
}

[[nodiscard]] inline DiscreteSystem discretize_semismooth(const SemismoothKernel& kernel, const ChebGrid& grid,
                                                          double lambda, const ScalarFn& rhs) {
  const auto ops = build_operators(grid.order);
  DiscreteSystem sys;
  sys.matrix = Matrix::Identity(grid.size(), grid.size()) + semismooth_block(kernel, ops, grid, lambda);
  sys.rhs = sample_vector(rhs, grid.eta);
  sys.grid = grid;
  sys.rule = Rule::semismooth;
  return sys;
}

struct LinearSolution {
  Vector x;
  double rcond = 1.0;
  bool ill_conditioned = false;
};

/// Dense LU with partial pivoting. Exact zero pivot throws; tiny rcond warns.
[[nodiscard]] inline LinearSolution dense_solve(const Matrix& a, const Vector& y) {
  if (a.rows() != a.cols() || a.rows() != y.size()) throw std::invalid_argument("dense_solve: shape mismatch");
  if (!a.allFinite() || !y.allFinite()) throw std::invalid_argument("dense_solve: non-finite input");
  Eigen::PartialPivLU<Matrix> lu(a);
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag[i] == 0.0) throw SingularSystemError("dense_solve: exact zero pivot at row " + std::to_string(i));
  LinearSolution out;
  out.x = lu.solve(y);
  out.rcond = lu.rcond();
  out.ill_conditioned = !(out.rcond >= kConditionWarning);
  if (!out.x.allFinite()) throw SingularSystemError("dense_solve: solution is not finite");
  return out;
}

/// Solution values and Chebyshev coefficients on one panel.
struct PanelSolution {
  ChebGrid grid;
  Vector values;
  Vector coeffs;
};

/// Piecewise Chebyshev interpolant of a discrete solution.
class ChebSolution {
 public:
  ChebSolution() = default;
  explicit ChebSolution(std::vector<PanelSolution> panels, double rcond = 1.0)
      : panels_(std::move(panels)), rcond_(rcond) {
    if (panels_.empty()) throw std::invalid_argument("ChebSolution: no panels");
  }

  /// Builds the per-panel coefficients alpha = C^{-1} x from nodal values.
  static ChebSolution from_values(const std::vector<ChebGrid>& grids, const Vector& values, double rcond = 1.0) {
    std::vector<PanelSolution> panels;
    Eigen::Index offset = 0;
    for (const auto& g : grids) {
      PanelSolution p{g, values.segment(offset, g.size()), {}};
      p.coeffs = inverse_cosine_matrix(g.order, cosine_matrix(g.order)) * p.values;
      panels.push_back(std::move(p));
      offset += g.size();
    }
    if (offset != values.size()) throw std::invalid_argument("ChebSolution: value count does not match grids");
    return ChebSolution(std::move(panels), rcond);
  }

  [[nodiscard]] double a() const { return panels_.front().grid.a; }
  [[nodiscard]] double b() const { return panels_.back().grid.b; }
  [[nodiscard]] const std::vector<PanelSolution>& panels() const { return panels_; }
  [[nodiscard]] double rcond() const { return rcond_; }
  [[nodiscard]] bool ill_conditioned() const { return !(rcond_ >= kConditionWarning); }

  /// Concatenated mapped nodes, panel by panel.
  [[nodiscard]] Vector nodes() const { return concat([](const PanelSolution& p) -> const Vector& { return p.grid.eta; }); }
  [[nodiscard]] Vector values() const { return concat([](const PanelSolution& p) -> const Vector& { return p.values; }); }

  /// Panel j owns (b_{j-1}, b_j]; the first panel also owns a.
  [[nodiscard]] double evaluate(double t) const {
    if (!(t >= a() && t <= b())) throw std::out_of_range("ChebSolution::evaluate: t=" + std::to_string(t) +
                                                         " outside [" + std::to_string(a()) + ", " +
                                                         std::to_string(b()) + "]");
    const auto it = std::find_if(panels_.begin(), panels_.end(), [t](const PanelSolution& p) { return t <= p.grid.b; });
    const auto& p = (it == panels_.end()) ? panels_.back() : *it;
    const double u = std::clamp(p.grid.to_reference(t), -1.0, 1.0);
    return chebyshev_sum(p.coeffs, u);
  }

  [[nodiscard]] Vector evaluate(const Vector& ts) const {
    Vector out(ts.size());
    for (Eigen::Index i = 0; i < ts.size(); ++i) out[i] = evaluate(ts[i]);
    return out;
  }

 private:
  template <typename Get>
  Vector concat(Get get) const {
    Eigen::Index total = 0;
    for (const auto& p : panels_) total += p.grid.size();
    Vector out(total);
    Eigen::Index off = 0;
    for (const auto& p : panels_) {
      const Vector& v = get(p);
      out.segment(off, v.size()) = v;
      off += v.size();
    }
    return out;
  }

  std::vector<PanelSolution> panels_;
  double rcond_ = 1.0;
};

[[nodiscard]] inline ChebSolution solve(const DiscreteSystem& system) {
  const auto lin = dense_solve(system.matrix, system.rhs);
  return ChebSolution::from_values({system.grid}, lin.x, lin.rcond);
}

/// ||approx - exact||_inf / ||exact||_inf.
[[nodiscard]] inline double relative_error(const Vector& approx, const Vector& exact) {
  if (approx.size() != exact.size()) throw std::invalid_argument("relative_error: size mismatch");
  const double scale = exact.cwiseAbs().maxCoeff();
  const double diff = (approx - exact).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

/// Relative max-norm error of a solution at its own nodes.
[[nodiscard]] inline double nodal_error(const ChebSolution& sol, const ScalarFn& exact) {
  return relative_error(sol.values(), sample_vector(exact, sol.nodes()));
}

}  // namespace semismooth
