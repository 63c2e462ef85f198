#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "semismooth/kernels.hpp"

using namespace semismooth;

TEST(Catalog, ExampleOneBranches) {
  const auto p = lookup_problem("example1");
  EXPECT_DOUBLE_EQ(p.kernel(0.5, 0.2), 1.0);
  EXPECT_DOUBLE_EQ(p.kernel(0.2, 0.5), -1.0);
  EXPECT_DOUBLE_EQ(p.kernel(0.3, 0.3), 1.0);  // closed lower triangle takes k1
  EXPECT_DOUBLE_EQ(p.lambda, 0.1);

  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng), s = u(rng);
    EXPECT_DOUBLE_EQ(p.kernel.lower(t, s) - p.kernel.upper(t, s), 2.0);
  }
}

TEST(Catalog, ExampleTwoIsContinuousDifferenceKernel) {
  const auto p = lookup_problem("example2");
  EXPECT_TRUE(p.kernel.difference_form());
  EXPECT_NEAR(p.b, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(p.lambda, -4.0 / std::numbers::pi, 1e-15);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, p.b);
  for (int i = 0; i < 50; ++i) {
    const double t = u(rng);
    EXPECT_EQ(p.kernel.lower(t, t), 0.0);
    EXPECT_EQ(p.kernel.upper(t, t), 0.0);
    const double s = u(rng);
    EXPECT_NEAR(p.kernel(t, s), std::sin(std::abs(t - s)), 1e-15);
  }
}

TEST(Catalog, LongRangeVariant) {
  ProblemParams params;
  params.cutoff = 200 * std::numbers::pi;
  const auto p = lookup_problem("example2", params);
  EXPECT_NEAR(p.b, 200 * std::numbers::pi, 1e-12);
}

TEST(Catalog, ExampleFourMetadata) {
  const auto p = lookup_problem("example4");
  EXPECT_DOUBLE_EQ(p.kernel(1.0, 1.0), 0.5);
  ASSERT_EQ(p.kernel.singular_points().size(), 1u);
  EXPECT_EQ(p.kernel.singular_points()[0], 0.0);
  EXPECT_THROW((void)p.kernel(0.0, 0.0), EvaluationError);
  EXPECT_NO_THROW((void)p.kernel(0.0, 0.1));
}

TEST(Catalog, ExampleThreeIsBoundarySingular) {
  const auto p = lookup_problem("example3");
  EXPECT_TRUE(p.kernel.boundary_singular());
  EXPECT_TRUE(p.kernel.has_singularities());
  EXPECT_THROW((void)p.kernel.lower(1.0, 0.0), EvaluationError);
}

TEST(Catalog, UnknownNameListsValidNames) {
  try {
    (void)catalog_lookup("example9");
    FAIL() << "expected a lookup error";
  } catch (const UnknownProblemError& e) {
    const std::string msg = e.what();
    for (const auto& name : catalog_names()) EXPECT_NE(msg.find(name), std::string::npos) << name;
  }
}

TEST(Catalog, KindMismatchAndFixedLambda) {
  EXPECT_THROW((void)lookup_problem("schrod_separable"), std::invalid_argument);
  EXPECT_THROW((void)lookup_schrodinger("example1"), std::invalid_argument);
  ProblemParams params;
  params.lambda = 0.5;
  EXPECT_THROW((void)lookup_problem("example3", params), std::invalid_argument);
  EXPECT_THROW((void)lookup_problem("example4", params), std::invalid_argument);
  EXPECT_DOUBLE_EQ(lookup_problem("example1", params).lambda, 0.5);
}

TEST(SemismoothKernelType, SingularPointsMustIncrease) {
  SemismoothKernel k;
  EXPECT_THROW(k.with_singular_points({0.5, 0.1}), std::invalid_argument);
  EXPECT_THROW(k.with_singular_points({0.1, 0.1}), std::invalid_argument);
  EXPECT_NO_THROW(k.with_singular_points({-0.2, 0.3}));
}

TEST(SemismoothKernelType, NonFiniteValuesAreReported) {
  const SemismoothKernel k([](double t, double s) { return 1.0 / (t - s); }, [](double, double) { return 0.0; });
  EXPECT_THROW((void)k.lower(0.2, 0.2), EvaluationError);
  EXPECT_DOUBLE_EQ(k.upper(0.2, 0.2), 0.0);
}

TEST(ResidualCheck, SpotValues) {
  EXPECT_LE(residual_check(lookup_problem("example1"), 0.3, 100000), 1e-6);
  EXPECT_LE(residual_check(lookup_problem("example2"), 1.0, 100000), 1e-6);
}

TEST(ResidualCheck, DetectsShiftedRightHandSide) {
  auto p = lookup_problem("example1");
  const auto y = p.rhs;
  p.rhs = [y](double t) { return y(t) + 1.0; };
  EXPECT_NEAR(residual_check(p, 0.3, 100000), 1.0, 1e-6);
}

TEST(ResidualCheck, EveryBenchmarkAtFiveInteriorPoints) {
  for (const std::string name : {"example1", "example2", "example3", "example4"}) {
    const auto p = lookup_problem(name);
    for (int i = 1; i <= 5; ++i) {
      // avoid the singular point 0 of example4
      const double t = p.a + (p.b - p.a) * (i - 0.37) / 5.0;
      EXPECT_LE(residual_check(p, t, 200000), 1e-6) << name << " t=" << t;
    }
  }
}

TEST(ResidualCheck, RequiresAnalyticSolution) {
  auto p = lookup_problem("example1");
  p.exact.reset();
  EXPECT_THROW((void)residual_check(p, 0.0, 100), std::invalid_argument);
}

TEST(Catalog, SchrodingerEntries) {
  const auto sep = lookup_schrodinger("schrod_separable");
  EXPECT_TRUE(sep.exact.has_value());
  EXPECT_TRUE(sep.rhs_override.has_value());
  EXPECT_DOUBLE_EQ(sep.potential.cutoff, 20.0);
  const auto pb = lookup_schrodinger("schrod_pereybuck");
  EXPECT_FALSE(pb.exact.has_value());
  ASSERT_TRUE(pb.potential.range.has_value());
  EXPECT_DOUBLE_EQ(*pb.potential.range, 100.0);
  // both potentials are continuous across the diagonal
  for (double r : {0.5, 3.0, 17.2}) {
    EXPECT_NEAR(sep.potential.v1(r, r), sep.potential.v2(r, r), 1e-15);
    EXPECT_NEAR(pb.potential.v1(r, r), pb.potential.v2(r, r), 1e-15);
  }
}
