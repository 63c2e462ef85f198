#pragma once

/**
 * @file composite.hpp
 * @brief Multi-panel (composite) semismooth rule.
 *
 * For target panel j and source panel i the blocks are
 *
 *     A_jj = I + lambda h_j (W o K1_jj + V o K2_jj)
 *     A_ji = lambda h_i K1_ji D_sigma(i)    (i < j, source left of target)
 *     A_ji = lambda h_i K2_ji D_sigma(i)    (i > j)
 *
 * with h_i = (b_i - b_{i-1})/2. Off-diagonal blocks integrate over the whole
 * source panel, so the scale factor is the source half-width. Diagonal
 * singular points of the kernel must be breakpoints.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semismooth/fredholm.hpp"
#include "semismooth/kernels.hpp"
#include "semismooth/spectral.hpp"

namespace semismooth {

struct Partition {
  std::vector<double> breakpoints;  ///< a = b_0 < b_1 < ... < b_m = b
  std::vector<int> orders;          ///< n_1..n_m

  [[nodiscard]] int panels() const { return static_cast<int>(orders.size()); }
  [[nodiscard]] double a() const { return breakpoints.front(); }
  [[nodiscard]] double b() const { return breakpoints.back(); }

  [[nodiscard]] ChebGrid grid(int j) const { return ChebGrid(orders[j], breakpoints[j], breakpoints[j + 1]); }

  [[nodiscard]] std::vector<ChebGrid> grids() const {
    std::vector<ChebGrid> out;
    out.reserve(orders.size());
    for (int j = 0; j < panels(); ++j) out.push_back(grid(j));
    return out;
  }

  [[nodiscard]] int total_unknowns() const {
    int total = 0;
    for (int n : orders) total += n + 1;
    return total;
  }
};

/**
 * Builds a partition of [a, b] from interior breakpoints and per-panel orders.
 * Singular points missing from the breakpoints are inserted; when the order
 * list is shorter than the resulting panel count its last entry is repeated.
 */
[[nodiscard]] inline Partition build_partition(double a, double b, std::vector<double> interior, std::vector<int> orders,
                                               const std::vector<double>& singular_points = {}) {
  if (!(a < b)) throw std::invalid_argument("build_partition: require a < b");
  if (orders.empty()) throw std::invalid_argument("build_partition: at least one order is required");
  if (!std::is_sorted(interior.begin(), interior.end()) ||
      std::adjacent_find(interior.begin(), interior.end()) != interior.end())
    throw std::invalid_argument("build_partition: breakpoints must be strictly increasing");
  for (double x : interior)
    if (!(x > a && x < b)) throw std::invalid_argument("build_partition: breakpoint outside the open interval");
  for (double c : singular_points) {
    if (!(c > a && c < b))
      throw std::invalid_argument("build_partition: singular point " + std::to_string(c) + " not inside (a, b)");
    if (!std::binary_search(interior.begin(), interior.end(), c))
      interior.insert(std::upper_bound(interior.begin(), interior.end(), c), c);
  }
  for (int n : orders)
    if (n < 1) throw std::invalid_argument("build_partition: panel orders must be >= 1");

  Partition p;
  p.breakpoints.reserve(interior.size() + 2);
  p.breakpoints.push_back(a);
  p.breakpoints.insert(p.breakpoints.end(), interior.begin(), interior.end());
  p.breakpoints.push_back(b);
  const auto m = p.breakpoints.size() - 1;
  if (orders.size() > m) throw std::invalid_argument("build_partition: more orders than panels");
  orders.resize(m, orders.back());
  p.orders = std::move(orders);
  return p;
}

/// M equal panels of order n, plus any singular points as extra breakpoints.
[[nodiscard]] inline Partition uniform_partition(double a, double b, int panels, int order,
                                                 const std::vector<double>& singular_points = {}) {
  if (panels < 1) throw std::invalid_argument("uniform_partition: need at least one panel");
  std::vector<double> interior;
  for (int j = 1; j < panels; ++j) interior.push_back(a + (b - a) * j / panels);
  return build_partition(a, b, std::move(interior), {order}, singular_points);
}

struct BlockSystem {
  Matrix matrix;
  Vector rhs;
  Partition partition;
  std::vector<ChebGrid> grids;
  std::vector<Eigen::Index> offsets;  ///< first global index of each panel

  /// Global index -> (panel, local node).
  [[nodiscard]] std::pair<int, int> locate(Eigen::Index global) const {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), global);
    const int panel = static_cast<int>(it - offsets.begin()) - 1;
    return {panel, static_cast<int>(global - offsets[panel])};
  }
};

[[nodiscard]] inline BlockSystem assemble_blocks(const SemismoothKernel& kernel, const Partition& partition,
                                                 double lambda, const ScalarFn& rhs) {
  for (double c : kernel.singular_points())
    if (c > partition.a() && c < partition.b() &&
        !std::binary_search(partition.breakpoints.begin(), partition.breakpoints.end(), c))
      throw std::invalid_argument("assemble_blocks: singular point " + std::to_string(c) + " is not a breakpoint");

  BlockSystem sys;
  sys.partition = partition;
  sys.grids = partition.grids();
  const int m = partition.panels();
  const Eigen::Index total = partition.total_unknowns();
  sys.offsets.resize(m);
  Eigen::Index off = 0;
  for (int j = 0; j < m; ++j) {
    sys.offsets[j] = off;
    off += sys.grids[j].size();
  }

  std::map<int, SpectralOperators> ops;
  for (int n : partition.orders)
    if (!ops.contains(n)) ops.emplace(n, build_operators(n));

  sys.matrix = Matrix::Identity(total, total);
  sys.rhs.resize(total);
  for (int j = 0; j < m; ++j) {
    const ChebGrid& target = sys.grids[j];
    sys.rhs.segment(sys.offsets[j], target.size()) = sample_vector(rhs, target.eta);
    for (int i = 0; i < m; ++i) {
      const ChebGrid& source = sys.grids[i];
      auto block = sys.matrix.block(sys.offsets[j], sys.offsets[i], target.size(), source.size());
      if (i == j) {
        block += semismooth_block(kernel, ops.at(target.order), target, lambda);
        continue;
      }
      const Matrix k = (i < j) ? sample_matrix([&](double t, double s) { return kernel.lower(t, s); }, target.eta, source.eta)
                               : sample_matrix([&](double t, double s) { return kernel.upper(t, s); }, target.eta, source.eta);
      block = lambda * source.half_width() * k * ops.at(source.order).sigma.asDiagonal();
    }
  }
  return sys;
}

[[nodiscard]] inline ChebSolution solve_composite(const BlockSystem& system) {
  const auto lin = dense_solve(system.matrix, system.rhs);
  return ChebSolution::from_values(system.grids, lin.x, lin.rcond);
}

/// True when the block matrix is block Toeplitz: difference kernel, uniform panels, equal orders.
[[nodiscard]] inline bool detect_toeplitz(const SemismoothKernel& kernel, const Partition& partition) {
  if (!kernel.difference_form() || partition.panels() < 1) return false;
  if (std::adjacent_find(partition.orders.begin(), partition.orders.end(), std::not_equal_to<>()) !=
      partition.orders.end())
    return false;
  const double width = (partition.b() - partition.a()) / partition.panels();
  const double tol = 1e-12 * std::max(1.0, std::abs(partition.b() - partition.a()));
  for (int j = 0; j < partition.panels(); ++j)
    if (std::abs(partition.breakpoints[j + 1] - partition.breakpoints[j] - width) > tol) return false;
  return true;
}

}  // namespace semismooth
