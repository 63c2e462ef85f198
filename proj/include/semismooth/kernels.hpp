#pragma once

/**
 * @file kernels.hpp
 * @brief Semismooth kernels and the built-in benchmark catalog.
 *
 * A semismooth kernel is a pair of branches defined on the whole square,
 *
 *     k(t, s) = k1(t, s)   for s <= t
 *     k(t, s) = k2(t, s)   for s >= t
 *
 * Benchmark problems use the equation shape x(t) + lambda * int_a^b k(t,s) x(s) ds = y(t).
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace semismooth {

using ScalarFn = std::function<double(double)>;
using KernelFn = std::function<double(double, double)>;

/// Raised when a kernel or right-hand side cannot be evaluated at a point.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smoothness order of one branch; std::nullopt means C^infinity.
using SmoothnessOrder = std::optional<int>;

class SemismoothKernel {
 public:
  SemismoothKernel() = default;
  SemismoothKernel(KernelFn lower, KernelFn upper) : lower_(std::move(lower)), upper_(std::move(upper)) {}

  /// Kernel that is smooth across the diagonal (k1 = k2 = k).
  static SemismoothKernel smooth(KernelFn k) { return SemismoothKernel(k, k); }

  SemismoothKernel& with_smoothness(SmoothnessOrder p1, SmoothnessOrder p2) {
    p1_ = p1;
    p2_ = p2;
    return *this;
  }

  SemismoothKernel& with_singular_points(std::vector<double> points) {
    if (!std::is_sorted(points.begin(), points.end()) ||
        std::adjacent_find(points.begin(), points.end()) != points.end())
      throw std::invalid_argument("singular points must be strictly increasing");
    singular_ = std::move(points);
    return *this;
  }

  SemismoothKernel& with_boundary_singularity(bool flag = true) {
    boundary_singular_ = flag;
    return *this;
  }

  /// Marks k as depending on |t - s| only (enables block-Toeplitz detection).
  SemismoothKernel& with_difference_form(bool flag = true) {
    difference_form_ = flag;
    return *this;
  }

  /// Branch k1, meaningful for s <= t but defined on the whole square.
  [[nodiscard]] double lower(double t, double s) const { return checked(lower_, t, s); }
  /// Branch k2, meaningful for s >= t but defined on the whole square.
  [[nodiscard]] double upper(double t, double s) const { return checked(upper_, t, s); }

  /// k(t, s) with branch selection; the closed lower triangle uses k1.
  [[nodiscard]] double operator()(double t, double s) const { return s <= t ? lower(t, s) : upper(t, s); }

  [[nodiscard]] SmoothnessOrder p1() const { return p1_; }
  [[nodiscard]] SmoothnessOrder p2() const { return p2_; }
  [[nodiscard]] const std::vector<double>& singular_points() const { return singular_; }
  [[nodiscard]] bool boundary_singular() const { return boundary_singular_; }
  [[nodiscard]] bool difference_form() const { return difference_form_; }
  [[nodiscard]] bool has_singularities() const { return boundary_singular_ || !singular_.empty(); }

 private:
  double checked(const KernelFn& f, double t, double s) const {
    for (double c : singular_)
      if (t == c && s == c) throw EvaluationError("kernel evaluated at diagonal singular point " + std::to_string(c));
    const double value = f(t, s);
    if (!std::isfinite(value))
      throw EvaluationError("kernel not finite at (" + std::to_string(t) + ", " + std::to_string(s) + ")");
    return value;
  }

  KernelFn lower_ = [](double, double) { return 0.0; };
  KernelFn upper_ = [](double, double) { return 0.0; };
  SmoothnessOrder p1_;
  SmoothnessOrder p2_;
  std::vector<double> singular_;
  bool boundary_singular_ = false;
  bool difference_form_ = false;
};

struct BenchmarkProblem {
  std::string name;
  SemismoothKernel kernel;
  double a = -1.0;
  double b = 1.0;
  double lambda = 1.0;
  ScalarFn rhs;
  std::optional<ScalarFn> exact;
  std::vector<int> recommended_orders;
};

/// Nonlocal potential v(p, r') on [0, T]^2, v1 for p <= r', v2 for p >= r'.
struct NonlocalPotential {
  KernelFn v1;
  KernelFn v2;
  double lambda = 0.0;
  double kappa = 1.0;
  double cutoff = 20.0;  ///< T
  std::optional<double> range;  ///< nonlocality range A (Perey-Buck only)
};

struct SchrodingerProblem {
  std::string name;
  NonlocalPotential potential;
  std::optional<ScalarFn> rhs_override;
  std::optional<ScalarFn> exact;
  std::vector<int> recommended_orders;
};

using CatalogEntry = std::variant<BenchmarkProblem, SchrodingerProblem>;

/// Optional overrides applied on lookup. Unused fields are ignored.
struct ProblemParams {
  std::optional<double> lambda;
  std::optional<double> cutoff;  ///< T for example2 and the Schrodinger cases
  std::optional<double> kappa;
  std::optional<double> range;   ///< A for schrod_pereybuck
};

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"example1", "example2", "example3",
                                              "example4", "schrod_separable", "schrod_pereybuck"};
  return names;
}

class UnknownProblemError : public std::invalid_argument {
 public:
  explicit UnknownProblemError(const std::string& name)
      : std::invalid_argument("unknown problem '" + name + "'; valid names: " + joined()) {}

 private:
  static std::string joined() {
    std::string out;
    for (const auto& n : catalog_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
  }
};

// ---------------------------------------------------------------------------
// Catalog entries
// ---------------------------------------------------------------------------

/// Discontinuous kernel: +1 below the diagonal, -1 above; x(t) = e^{-t}.
inline BenchmarkProblem example1(double lambda = 0.1) {
  BenchmarkProblem p;
  p.name = "example1";
  p.kernel = SemismoothKernel([](double, double) { return 1.0; }, [](double, double) { return -1.0; })
                 .with_smoothness(std::nullopt, std::nullopt);
  p.a = -1.0;
  p.b = 1.0;
  p.lambda = lambda;
  const double e = std::numbers::e;
  p.rhs = [lambda, e](double t) { return lambda * (e + 1.0 / e) + (1.0 - 2.0 * lambda) * std::exp(-t); };
  p.exact = [](double t) { return std::exp(-t); };
  p.recommended_orders = {4, 8, 12, 16, 20};
  return p;
}

/// k = sin|t - s| on [0, T]; kink along the diagonal; x(t) = sin t.
inline BenchmarkProblem example2(double cutoff = std::numbers::pi / 2, double lambda = -4.0 / std::numbers::pi) {
  BenchmarkProblem p;
  p.name = "example2";
  p.kernel = SemismoothKernel([](double t, double s) { return std::sin(t - s); },
                              [](double t, double s) { return std::sin(s - t); })
                 .with_smoothness(std::nullopt, std::nullopt)
                 .with_difference_form();
  p.a = 0.0;
  p.b = cutoff;
  p.lambda = lambda;
  const double big_t = cutoff;
  p.rhs = [lambda, big_t](double t) {
    const double st = std::sin(big_t);
    return (1.0 - lambda * st * st / 2.0 + lambda) * std::sin(t) +
           (big_t / 2.0 - t - std::sin(2.0 * big_t) / 4.0) * lambda * std::cos(t);
  };
  p.exact = [](double t) { return std::sin(t); };
  p.recommended_orders = {4, 8, 12, 16, 20};
  return p;
}

/// Kernel singular on the boundary of [-1,1]^2; x(t) = 1 - t^2.
inline BenchmarkProblem example3() {
  BenchmarkProblem p;
  p.name = "example3";
  p.kernel = SemismoothKernel([](double t, double s) { return 1.0 / ((1.0 - t * t) * (1.0 - s * s * s * s)); },
                              [](double t, double s) { return -1.0 / ((1.0 - t * t * t * t) * (1.0 - s * s)); })
                 .with_smoothness(std::nullopt, std::nullopt)
                 .with_boundary_singularity();
  p.a = -1.0;
  p.b = 1.0;
  p.lambda = 1.0;
  p.rhs = [](double t) {
    return 1.0 - t * t + (std::atan(t) - std::atan(-1.0)) / (1.0 - t * t) - 1.0 / ((1.0 + t) * (1.0 + t * t));
  };
  p.exact = [](double t) { return 1.0 - t * t; };
  p.recommended_orders = {8, 16, 24, 32};
  return p;
}

/// Kernel singular at (0, 0) on the diagonal; x(t) = 4 t^3.
inline BenchmarkProblem example4() {
  BenchmarkProblem p;
  p.name = "example4";
  p.kernel = SemismoothKernel([](double t, double s) { return 1.0 / (t * t + s * s * s * s); },
                              [](double t, double s) { return 1.0 / (s * s + t * t * t * t); })
                 .with_smoothness(std::nullopt, std::nullopt)
                 .with_singular_points({0.0});
  p.a = -1.0;
  p.b = 1.0;
  p.lambda = 1.0;
  p.rhs = [](double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
    return 2.0 * (1.0 - t2 + 2.0 * t3) + (1.0 + 2.0 * t4) * std::log(t2 + t4) - std::log(1.0 + t2) -
           2.0 * t4 * std::log(1.0 + t4);
  };
  p.exact = [](double t) { return 4.0 * t * t * t; };
  p.recommended_orders = {32, 64, 128, 256};
  return p;
}

/// Yukawa-like separable potential lambda e^{-|p - r'|}; manufactured psi = e^{-r}.
inline SchrodingerProblem schrod_separable(double lambda = 0.1, double kappa = 1.0, double cutoff = 20.0) {
  SchrodingerProblem p;
  p.name = "schrod_separable";
  p.potential.v1 = [lambda](double pp, double r) { return lambda * std::exp(pp - r); };
  p.potential.v2 = [lambda](double pp, double r) { return lambda * std::exp(r - pp); };
  p.potential.lambda = lambda;
  p.potential.kappa = kappa;
  p.potential.cutoff = cutoff;
  // Derived for kappa = 1 with the potential negligible beyond T.
  p.rhs_override = [lambda, kappa](double r) {
    const double q = lambda * kappa;
    return (1.0 - 0.75 * q) * std::exp(-r) + 0.75 * q * std::cos(r) - 0.5 * q * r * std::exp(-r);
  };
  p.exact = [](double r) { return std::exp(-r); };
  p.recommended_orders = {32, 64, 128, 256};
  return p;
}

/// Perey-Buck-type potential lambda e^{-|r'-p|/A} / (1 + e^{-|r'-p|/A}).
inline SchrodingerProblem schrod_pereybuck(double lambda = 0.1, double kappa = 1.0, double range = 100.0,
                                           double cutoff = 20.0) {
  SchrodingerProblem p;
  p.name = "schrod_pereybuck";
  p.potential.v1 = [lambda, range](double pp, double r) {
    const double e = std::exp((pp - r) / range);
    return lambda * e / (1.0 + e);
  };
  p.potential.v2 = [lambda, range](double pp, double r) {
    const double e = std::exp((r - pp) / range);
    return lambda * e / (1.0 + e);
  };
  p.potential.lambda = lambda;
  p.potential.kappa = kappa;
  p.potential.cutoff = cutoff;
  p.potential.range = range;
  p.recommended_orders = {8, 16, 32, 64, 128};
  return p;
}

[[nodiscard]] inline CatalogEntry catalog_lookup(const std::string& name, const ProblemParams& params = {}) {
  if (name == "example1") return example1(params.lambda.value_or(0.1));
  if (name == "example2")
    return example2(params.cutoff.value_or(std::numbers::pi / 2), params.lambda.value_or(-4.0 / std::numbers::pi));
  if (name == "example3") {
    if (params.lambda) throw std::invalid_argument("example3: lambda is fixed by the manufactured solution");
    return example3();
  }
  if (name == "example4") {
    if (params.lambda) throw std::invalid_argument("example4: lambda is fixed by the manufactured solution");
    return example4();
  }
  if (name == "schrod_separable")
    return schrod_separable(params.lambda.value_or(0.1), params.kappa.value_or(1.0), params.cutoff.value_or(20.0));
  if (name == "schrod_pereybuck")
    return schrod_pereybuck(params.lambda.value_or(0.1), params.kappa.value_or(1.0), params.range.value_or(100.0),
                            params.cutoff.value_or(20.0));
  throw UnknownProblemError(name);
}

/// Looks up an integral-equation benchmark; throws for the Schrodinger names.
[[nodiscard]] inline BenchmarkProblem lookup_problem(const std::string& name, const ProblemParams& params = {}) {
  auto entry = catalog_lookup(name, params);
  if (auto* p = std::get_if<BenchmarkProblem>(&entry)) return std::move(*p);
  throw std::invalid_argument("'" + name + "' is a Schrodinger problem, not an integral-equation benchmark");
}

[[nodiscard]] inline SchrodingerProblem lookup_schrodinger(const std::string& name, const ProblemParams& params = {}) {
  auto entry = catalog_lookup(name, params);
  if (auto* p = std::get_if<SchrodingerProblem>(&entry)) return std::move(*p);
  throw std::invalid_argument("'" + name + "' is not a Schrodinger problem");
}

// ---------------------------------------------------------------------------
// Transcription check
// ---------------------------------------------------------------------------

namespace detail {

// Composite trapezoid on [lo, hi]; the midpoint variant avoids sampling the
// endpoints where boundary-singular kernels blow up.
template <typename F>
double composite_rule(F&& f, double lo, double hi, long panels, bool midpoint) {
  if (hi <= lo || panels <= 0) return 0.0;
  const double h = (hi - lo) / static_cast<double>(panels);
  double acc = 0.0;
  if (midpoint) {
    for (long i = 0; i < panels; ++i) acc += f(lo + (static_cast<double>(i) + 0.5) * h);
    return acc * h;
  }
  acc = 0.5 * (f(lo) + f(hi));
  for (long i = 1; i < panels; ++i) acc += f(lo + static_cast<double>(i) * h);
  return acc * h;
}

}  // namespace detail

/**
 * |x(t) + lambda * int k(t,s) x(s) ds - y(t)| with the integral split at s = t
 * and each piece done by a composite rule with panels split in proportion to
 * the piece lengths. Test-side check of the catalog transcription.
 */
[[nodiscard]] inline double residual_check(const BenchmarkProblem& problem, double t, long quadrature_panels) {
  if (!problem.exact) throw std::invalid_argument("residual_check: problem has no analytic solution");
  if (t < problem.a || t > problem.b) throw std::out_of_range("residual_check: t outside the interval");
  const auto& x = *problem.exact;
  const auto& k = problem.kernel;
  const bool midpoint = k.boundary_singular();
  const double len = problem.b - problem.a;
  const long left_panels = std::max(1L, static_cast<long>(std::llround(quadrature_panels * (t - problem.a) / len)));
  const long right_panels = std::max(1L, quadrature_panels - left_panels);
  const double left =
      detail::composite_rule([&](double s) { return k.lower(t, s) * x(s); }, problem.a, t, left_panels, midpoint);
  const double right =
      detail::composite_rule([&](double s) { return k.upper(t, s) * x(s); }, t, problem.b, right_panels, midpoint);
  return std::abs(x(t) + problem.lambda * (left + right) - problem.rhs(t));
}

}  // namespace semismooth
