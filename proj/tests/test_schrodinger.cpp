#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "semismooth/schrodinger.hpp"

using namespace semismooth;

namespace {

NonlocalPotential zero_potential(double kappa = 1.0, double cutoff = 20.0) {
  NonlocalPotential v;
  v.v1 = [](double, double) { return 0.0; };
  v.v2 = v.v1;
  v.kappa = kappa;
  v.cutoff = cutoff;
  return v;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double diagonal_gap(const Matrix& a, const Matrix& b) {
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return (a.diagonal() - b.diagonal()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST(KernelMatrices, ZeroPotential) {
  const auto v = zero_potential();
  const ChebGrid g(12, 0.0, v.cutoff);
  const auto km = build_kernel_matrices(v, build_operators(12), g);
  EXPECT_EQ(max_abs(km.k11) + max_abs(km.k12) + max_abs(km.k21) + max_abs(km.k22), 0.0);
}

TEST(KernelMatrices, SmoothPotentialHasNoBroadcastTerm) {
  NonlocalPotential v;
  v.v1 = [](double p, double r) { return std::exp(-0.1 * (p + r)) * std::cos(p - r); };
  v.v2 = v.v1;
  v.kappa = 1.3;
  v.cutoff = 6.0;
  const int n = 20;
  const auto ops = build_operators(n);
  const ChebGrid g(n, 0.0, v.cutoff);
  const auto km = build_kernel_matrices(v, ops, g);
  Matrix v2(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) v2(i, j) = v.v2(g.eta[i], g.eta[j]);
  const Vector s = g.eta.unaryExpr([&](double t) { return std::sin(v.kappa * t); });
  const Vector c = g.eta.unaryExpr([&](double t) { return std::cos(v.kappa * t); });
  EXPECT_LE(max_abs(km.k11 - g.half_width() * ops.w * s.asDiagonal() * v2), 1e-13);
  EXPECT_LE(max_abs(km.k22 - g.half_width() * ops.v * c.asDiagonal() * v2), 1e-13);
}

// K12(i, j) = int_0^{t_i} sin(p) v1(p, t_j) dp against a trapezoid oracle.
TEST(KernelMatrices, SeparableUpperBranchAgainstTrapezoid) {
  const auto prob = lookup_schrodinger("schrod_separable");
  const auto& v = prob.potential;
  const int n = 32;
  const ChebGrid g(n, 0.0, v.cutoff);
  const auto km = build_kernel_matrices(v, build_operators(n), g);
  for (int i = 0; i <= n; i += 3)
    for (int j = 0; j <= n; j += 4) {
      const double ti = g.eta[i], tj = g.eta[j];
      const double ref = oracle::trapezoid([&](double p) { return std::sin(p) * v.v1(p, tj); }, 0.0, ti, 100000);
      EXPECT_LE(std::abs(km.k12(i, j) - ref), 1e-6 * std::max(1.0, std::abs(ref))) << i << "," << j;
    }
}

TEST(KernelMatrices, DiagonalContinuity) {
  for (const std::string name : {"schrod_separable", "schrod_pereybuck"}) {
    const auto prob = lookup_schrodinger(name);
    for (int n : {8, 16, 32, 64}) {
      const auto sys = assemble(prob.potential, n);
      EXPECT_LE(diagonal_gap(sys.kernels.k11, sys.kernels.k12), 1e-12) << name << " n=" << n;
      EXPECT_LE(diagonal_gap(sys.kernels.k21, sys.kernels.k22), 1e-12) << name << " n=" << n;
    }
  }
}

TEST(Assemble, FreeParticle) {
  for (double kappa : {0.5, 1.0, 2.5}) {
    const auto v = zero_potential(kappa, 10.0);
    const auto sys = assemble(v, 16);
    EXPECT_EQ(sys.matrix, Matrix::Identity(17, 17));
    const auto sol = solve(sys);
    EXPECT_LE((sol.values() - sys.sin_diag).cwiseAbs().maxCoeff(), 0.0);
  }
}

// e_n compares against the 2n interpolant, so it only drops to rounding once
// that interpolant resolves sin(kappa r) on [0, T].
TEST(Assemble, FreeParticleSelfConvergence) {
  const auto v = zero_potential(1.0, 20.0);
  for (int n : {32, 48, 64}) EXPECT_LE(self_convergence(v, n), 1e-13) << n;
  EXPECT_GT(self_convergence(v, 8), 1e-3);
}

TEST(Assemble, RejectsBadParameters) {
  auto v = zero_potential();
  v.kappa = 0.0;
  EXPECT_THROW((void)assemble(v, 8), std::invalid_argument);
  v = zero_potential();
  v.cutoff = -1.0;
  EXPECT_THROW((void)assemble(v, 8), std::invalid_argument);
  v = zero_potential();
  v.v2 = nullptr;
  EXPECT_THROW((void)assemble(v, 8), std::invalid_argument);
  EXPECT_THROW((void)self_convergence(zero_potential(), 3), std::invalid_argument);
}

TEST(Separable, ManufacturedSolution) {
  const auto prob = lookup_schrodinger("schrod_separable");
  const double bounds[] = {1e-5, 1e-7, 1e-7, 1e-7};
  const int orders[] = {32, 64, 128, 256};
  for (int k = 0; k < 4; ++k) {
    const auto sol = solve_schrodinger(prob.potential, orders[k], prob.rhs_override);
    EXPECT_LE(nodal_error(sol, *prob.exact), bounds[k]) << orders[k];
  }
}

// M psi at the nodes vs the left-hand side of the integral form evaluated
// with nested Simpson quadrature, split at every kink.
TEST(Separable, AssembledOperatorAgainstNestedQuadrature) {
  const auto prob = lookup_schrodinger("schrod_separable");
  const auto& v = prob.potential;
  const double kap = v.kappa, T = v.cutoff;
  const int n = 32;
  const auto sys = assemble(v, n);
  const Vector psi = sample_vector(*prob.exact, sys.grid.eta);
  const Vector lhs = sys.matrix * psi;

  auto pot = [&](double p, double r) { return p <= r ? v.v1(p, r) : v.v2(p, r); };
  constexpr long inner = 300, outer = 300;
  auto split = [](const oracle::Fn& f, double lo, double mid, double hi, long panels) {
    return oracle::simpson(f, lo, std::clamp(mid, lo, hi), panels) + oracle::simpson(f, std::clamp(mid, lo, hi), hi, panels);
  };
  auto k1 = [&](double r, double rp) {
    return split([&](double p) { return std::sin(kap * p) * pot(p, rp); }, 0.0, rp, r, inner);
  };
  auto k2 = [&](double r, double rp) {
    return split([&](double p) { return std::cos(kap * p) * pot(p, rp); }, r, rp, T, inner);
  };
  for (int i = 0; i <= n; i += 2) {
    const double r = sys.grid.eta[i];
    const double i1 = split([&](double rp) { return k1(r, rp) * std::exp(-rp); }, 0.0, r, T, outer);
    const double i2 = split([&](double rp) { return k2(r, rp) * std::exp(-rp); }, 0.0, r, T, outer);
    const double ref = std::exp(-r) + std::cos(kap * r) / kap * i1 + std::sin(kap * r) / kap * i2;
    EXPECT_NEAR(lhs[i], ref, 1e-5) << "r=" << r;
  }
}

TEST(PereyBuck, SelfConvergence) {
  const auto prob = lookup_schrodinger("schrod_pereybuck");
  const double e16 = self_convergence(prob.potential, 16);
  EXPECT_GE(e16, 1e-4);
  EXPECT_LE(e16, 1e-2);
  EXPECT_LE(self_convergence(prob.potential, 32), 1e-7);
  EXPECT_LE(self_convergence(prob.potential, 64), 1e-12);
}

TEST(PereyBuck, MonotoneUntilPlateau) {
  const auto prob = lookup_schrodinger("schrod_pereybuck");
  double prev = 1e300;
  for (int n : {8, 16, 32, 64, 128}) {
    const double e = self_convergence(prob.potential, n);
    if (prev > 1e-13) {
      EXPECT_LT(e, prev) << n;
    } else {
      EXPECT_LE(e, 1e-13) << n;
    }
    prev = e;
  }
}
