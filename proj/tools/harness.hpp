#pragma once

// Batch driver behind the semismooth command-line tool. Kept in a header so
// the test suite can run commands in-process.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "semismooth/semismooth.hpp"

namespace semismooth::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIncompatible = 3, kSolverFailure = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompatibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { schur, alg1, gleg, tdef, composite };
enum class Format { csv, plot };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::schur: return "schur";
    case Method::alg1: return "alg1";
    case Method::gleg: return "gleg";
    case Method::tdef: return "tdef";
    case Method::composite: return "composite";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "schur") return Method::schur;
  if (s == "alg1") return Method::alg1;
  if (s == "gleg") return Method::gleg;
  if (s == "tdef") return Method::tdef;
  if (s == "composite") return Method::composite;
  throw ConfigError("unknown method '" + s + "' (expected schur, alg1, gleg, tdef or composite)");
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "plot") return Format::plot;
  throw ConfigError("unknown format '" + s + "' (expected csv or plot)");
}

struct RunConfig {
  std::string problem;
  std::vector<Method> methods{Method::schur};
  std::vector<int> orders;
  std::optional<int> panels;         ///< uniform panel count M
  std::vector<double> breakpoints;   ///< interior breakpoints
  ProblemParams params;              ///< lambda, kappa, T, A
  std::optional<std::string> output;
  std::optional<Format> format;
  bool deterministic = false;        ///< write elapsed_ms as 0
};

/**
 * Reads a JSON config. Recognised keys: problem, method (string or list),
 * n (int or list), panels, breakpoints, lambda, kappa, T, A, output, format,
 * deterministic. Unknown keys are rejected.
 */
inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig cfg;
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "problem") {
        cfg.problem = val.get<std::string>();
      } else if (key == "method" || key == "methods") {
        cfg.methods.clear();
        if (val.is_array())
          for (const auto& m : val) cfg.methods.push_back(parse_method(m.get<std::string>()));
        else
          cfg.methods.push_back(parse_method(val.get<std::string>()));
      } else if (key == "n") {
        cfg.orders = val.is_array() ? val.get<std::vector<int>>() : std::vector<int>{val.get<int>()};
      } else if (key == "panels") {
        cfg.panels = val.get<int>();
      } else if (key == "breakpoints") {
        cfg.breakpoints = val.get<std::vector<double>>();
      } else if (key == "lambda") {
        cfg.params.lambda = val.get<double>();
      } else if (key == "kappa") {
        cfg.params.kappa = val.get<double>();
      } else if (key == "T") {
        cfg.params.cutoff = val.get<double>();
      } else if (key == "A") {
        cfg.params.range = val.get<double>();
      } else if (key == "output") {
        cfg.output = val.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_format(val.get<std::string>());
      } else if (key == "deterministic") {
        cfg.deterministic = val.get<bool>();
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

struct RunRecord {
  int n = 0;
  Method method = Method::schur;
  std::string problem;
  double error = 0.0;
  bool cond_warning = false;
  double elapsed_ms = 0.0;
};

namespace detail {

inline void require_orders(const RunConfig& cfg, std::size_t minimum) {
  if (cfg.orders.size() < minimum)
    throw ConfigError("need at least " + std::to_string(minimum) + " value(s) of n, got " +
                      std::to_string(cfg.orders.size()));
  for (int n : cfg.orders)
    if (n < 1) throw ConfigError("n must be positive, got " + std::to_string(n));
}

inline bool is_schrodinger(const std::string& name) {
  return name == "schrod_separable" || name == "schrod_pereybuck";
}

inline double checked_error(double e, const std::string& what) {
  if (!std::isfinite(e)) throw SolverFailure(what + ": error is not finite");
  return e;
}

inline Partition make_partition(const BenchmarkProblem& p, const RunConfig& cfg, int n) {
  const auto& sing = p.kernel.singular_points();
  if (!cfg.breakpoints.empty()) {
    if (cfg.panels) throw ConfigError("give either panels or breakpoints, not both");
    try {
      return build_partition(p.a, p.b, cfg.breakpoints, {n}, sing);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const int m = cfg.panels.value_or(1);
  if (m < 1) throw ConfigError("panels must be >= 1");
  return uniform_partition(p.a, p.b, m, n, sing);
}

// Error and condition flag for one benchmark run.
inline std::pair<double, bool> run_benchmark(const BenchmarkProblem& p, Method method, int n, const RunConfig& cfg) {
  const auto& exact = *p.exact;
  switch (method) {
    case Method::schur: {
      const auto sol = solve(discretize_semismooth(p.kernel, ChebGrid(n, p.a, p.b), p.lambda, p.rhs));
      return {nodal_error(sol, exact), sol.ill_conditioned()};
    }
    case Method::alg1: {
      const auto sol = solve(discretize_smooth(p.kernel, ChebGrid(n, p.a, p.b), p.lambda, p.rhs));
      return {nodal_error(sol, exact), sol.ill_conditioned()};
    }
    case Method::gleg: {
      const auto sol = nystrom_solve(p.kernel, gauss_legendre_rule(n, p.a, p.b), p.lambda, p.rhs);
      return {relative_error(sol.values, sample_vector(exact, sol.nodes)), sol.ill_conditioned()};
    }
    case Method::tdef: {
      const auto sol = trapezium_deferred_solve(p.kernel, p.a, p.b, n, p.lambda, p.rhs);
      return {relative_error(sol.values, sample_vector(exact, sol.nodes)), sol.ill_conditioned()};
    }
    case Method::composite: {
      const auto part = make_partition(p, cfg, n);
      if (detect_toeplitz(p.kernel, part) && part.panels() > 1)
        std::cerr << "note: block Toeplitz structure detected; solved densely\n";
      const auto sol = solve_composite(assemble_blocks(p.kernel, part, p.lambda, p.rhs));
      return {nodal_error(sol, exact), sol.ill_conditioned()};
    }
  }
  throw std::logic_error("unhandled method");
}

inline std::pair<double, bool> run_schrodinger_case(const SchrodingerProblem& p, int n) {
  if (p.exact) {
    const auto sol = solve_schrodinger(p.potential, n, p.rhs_override);
    return {nodal_error(sol, *p.exact), sol.ill_conditioned()};
  }
  if (n < 4) throw ConfigError("self-convergence needs n >= 4");
  const auto coarse = solve_schrodinger(p.potential, n, p.rhs_override);
  const auto fine = solve_schrodinger(p.potential, 2 * n, p.rhs_override);
  return {relative_error(coarse.values(), fine.evaluate(coarse.nodes())),
          coarse.ill_conditioned() || fine.ill_conditioned()};
}

inline void check_compatible(const BenchmarkProblem& p, Method method, const RunConfig& cfg) {
  if (method != Method::composite && (cfg.panels || !cfg.breakpoints.empty()))
    throw IncompatibleError(std::string("method ") + to_string(method) + " does not take a partition");
  if (method == Method::tdef && p.kernel.has_singularities())
    throw IncompatibleError("tdef: trapezium methods are not applicable to " + p.name +
                            " (kernel is singular on the square)");
  if (!p.exact) throw IncompatibleError(p.name + ": no analytic solution to measure against");
}

inline ProblemParams checked_params(const RunConfig& cfg) {
  if (cfg.params.cutoff && !(*cfg.params.cutoff > 0.0)) throw ConfigError("T must be positive");
  if (cfg.params.kappa && !(*cfg.params.kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (cfg.params.range && !(*cfg.params.range > 0.0)) throw ConfigError("A must be positive");
  return cfg.params;
}

inline CatalogEntry lookup(const RunConfig& cfg) {
  if (cfg.problem.empty()) throw ConfigError("no problem given (see list-problems)");
  try {
    return catalog_lookup(cfg.problem, checked_params(cfg));
  } catch (const UnknownProblemError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace detail

/// Runs every (method, n) pair of the config; rows are ordered by method then n.
inline std::vector<RunRecord> run_all(const RunConfig& cfg) {
  const auto entry = detail::lookup(cfg);
  std::vector<RunRecord> rows;
  for (Method method : cfg.methods) {
    if (std::holds_alternative<SchrodingerProblem>(entry)) {
      if (method != Method::schur)
        throw IncompatibleError(std::string("Schrodinger problems only run with method schur, not ") +
                                to_string(method));
    } else {
      detail::check_compatible(std::get<BenchmarkProblem>(entry), method, cfg);
    }
    for (int n : cfg.orders) {
      RunRecord r;
      r.n = n;
      r.method = method;
      r.problem = cfg.problem;
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto [err, warn] = std::holds_alternative<SchrodingerProblem>(entry)
                                     ? detail::run_schrodinger_case(std::get<SchrodingerProblem>(entry), n)
                                     : detail::run_benchmark(std::get<BenchmarkProblem>(entry), method, n, cfg);
        r.error = detail::checked_error(err, cfg.problem + " n=" + std::to_string(n));
        r.cond_warning = warn;
      } catch (const ConfigError&) {
        throw;
      } catch (const IncompatibleError&) {
        throw;
      } catch (const SolverFailure&) {
        throw;
      } catch (const std::exception& e) {
        throw SolverFailure(std::string(to_string(method)) + " n=" + std::to_string(n) + ": " + e.what());
      }
      const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - start;
      r.elapsed_ms = cfg.deterministic ? 0.0 : dt.count();
      rows.push_back(r);
    }
  }
  return rows;
}

inline std::string format_error(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", e);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& rows) {
  out << "n,method,problem,error,cond_warning,elapsed_ms\n";
  char ms[32];
  for (const auto& r : rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.elapsed_ms);
    out << r.n << ',' << to_string(r.method) << ',' << r.problem << ',' << format_error(r.error) << ','
        << (r.cond_warning ? 1 : 0) << ',' << ms << '\n';
  }
}

/// One gnuplot block per method ("n log10(error)"), blocks separated by two blank lines.
inline void write_plot(std::ostream& out, const std::vector<RunRecord>& rows, const std::string& problem) {
  constexpr double floor = 1e-300;  // an exact zero would give -inf
  bool first = true;
  std::optional<Method> current;
  char line[64];
  for (const auto& r : rows) {
    if (!current || *current != r.method) {
      if (!first) out << "\n\n";
      first = false;
      current = r.method;
      out << "# problem " << problem << " method " << to_string(r.method) << "\n# n log10(error)\n";
    }
    std::snprintf(line, sizeof line, "%d %.6f\n", r.n, std::log10(std::max(r.error, floor)));
    out << line;
  }
}

inline void write_schrodinger_table(std::ostream& out, const std::vector<RunRecord>& rows) {
  out << "n,error\n";
  for (const auto& r : rows) out << r.n << ',' << format_error(r.error) << '\n';
}

namespace detail {

template <typename Writer>
int emit(const RunConfig& cfg, Writer&& writer, std::ostream& fallback) {
  if (!cfg.output) {
    writer(fallback);
    return kOk;
  }
  std::ostringstream buf;
  writer(buf);
  std::ofstream f(*cfg.output, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + *cfg.output + "'");
  f << buf.str();
  return kOk;
}

}  // namespace detail

inline int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  detail::require_orders(cfg, 1);
  if (cfg.methods.size() != 1) throw ConfigError("solve takes exactly one method");
  const auto rows = run_all(cfg);
  if (cfg.format.value_or(Format::csv) == Format::plot)
    return detail::emit(cfg, [&](std::ostream& o) { write_plot(o, rows, cfg.problem); }, out);
  return detail::emit(cfg, [&](std::ostream& o) { write_csv(o, rows); }, out);
}

inline int cmd_convergence(const RunConfig& cfg, std::ostream& out) {
  detail::require_orders(cfg, 2);
  if (cfg.methods.empty()) throw ConfigError("convergence needs at least one method");
  const auto rows = run_all(cfg);
  if (cfg.format.value_or(Format::plot) == Format::csv)
    return detail::emit(cfg, [&](std::ostream& o) { write_csv(o, rows); }, out);
  return detail::emit(cfg, [&](std::ostream& o) { write_plot(o, rows, cfg.problem); }, out);
}

inline int cmd_schrodinger(const RunConfig& cfg, std::ostream& out) {
  detail::require_orders(cfg, 1);
  if (!detail::is_schrodinger(cfg.problem)) {
    if (std::find(catalog_names().begin(), catalog_names().end(), cfg.problem) == catalog_names().end())
      throw ConfigError(UnknownProblemError(cfg.problem).what());
    throw IncompatibleError("schrodinger: '" + cfg.problem + "' is not a Schrodinger problem");
  }
  RunConfig c = cfg;
  c.methods = {Method::schur};
  const auto rows = run_all(c);
  return detail::emit(cfg, [&](std::ostream& o) { write_schrodinger_table(o, rows); }, out);
}

inline void cmd_list_problems(std::ostream& out) {
  out << "example1          k1=+1, k2=-1 on [-1,1]; x=exp(-t); lambda=0.1\n"
         "example2          k=sin|t-s| on [0,T]; x=sin t; T=pi/2, lambda=-4/pi (difference kernel)\n"
         "example3          boundary-singular kernel on [-1,1]; x=1-t^2\n"
         "example4          kernel singular at (0,0) on [-1,1]; x=4t^3\n"
         "schrod_separable  nonlocal Schrodinger, v=lambda*exp(-|p-r'|) on [0,T]; psi=exp(-r)\n"
         "schrod_pereybuck  nonlocal Schrodinger, Perey-Buck potential with range A; no closed form\n";
}

/// Maps an exception from a command to its exit code and reports it.
inline int report(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const IncompatibleError*>(&e)) return kIncompatible;
  return kSolverFailure;
}

}  // namespace semismooth::cli
