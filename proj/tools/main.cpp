#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness.hpp"

namespace cli = semismooth::cli;

namespace {

struct Flags {
  std::string config;
  std::string problem;
  std::vector<std::string> methods;
  std::vector<int> orders;
  std::optional<int> panels;
  std::vector<double> breakpoints;
  std::optional<double> lambda, kappa, cutoff, range;
  std::string output;
  std::string format;
  bool deterministic = false;
};

void add_common(CLI::App* sub, Flags& f, bool with_method) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--problem", f.problem, "catalog problem name (see list-problems)");
  if (with_method)
    sub->add_option("--method,--methods", f.methods, "schur | alg1 | gleg | tdef | composite")->delimiter(',');
  sub->add_option("--n", f.orders, "order list, e.g. 8,16,32")->delimiter(',');
  if (with_method) {
    sub->add_option("--panels", f.panels, "uniform panel count M (composite)");
    sub->add_option("--breakpoints", f.breakpoints, "interior breakpoints (composite)")->delimiter(',');
  }
  sub->add_option("--lambda", f.lambda, "override lambda");
  sub->add_option("--kappa", f.kappa, "override kappa (Schrodinger)");
  sub->add_option("--T", f.cutoff, "override interval end / cutoff T");
  sub->add_option("--A", f.range, "override Perey-Buck range A");
  sub->add_option("--output,-o", f.output, "write to file instead of stdout");
  if (with_method) sub->add_option("--format", f.format, "csv | plot");
  sub->add_flag("--deterministic", f.deterministic, "write elapsed_ms as 0");
}

cli::RunConfig merge(const Flags& f) {
  cli::RunConfig cfg = f.config.empty() ? cli::RunConfig{} : cli::load_config_file(f.config);
  if (!f.problem.empty()) cfg.problem = f.problem;
  if (!f.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : f.methods) cfg.methods.push_back(cli::parse_method(m));
  }
  if (!f.orders.empty()) cfg.orders = f.orders;
  if (f.panels) cfg.panels = f.panels;
  if (!f.breakpoints.empty()) cfg.breakpoints = f.breakpoints;
  if (f.lambda) cfg.params.lambda = f.lambda;
  if (f.kappa) cfg.params.kappa = f.kappa;
  if (f.cutoff) cfg.params.cutoff = f.cutoff;
  if (f.range) cfg.params.range = f.range;
  if (!f.output.empty()) cfg.output = f.output;
  if (!f.format.empty()) cfg.format = cli::parse_format(f.format);
  if (f.deterministic) cfg.deterministic = true;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for Fredholm equations with semismooth kernels"};
  app.require_subcommand(1);

  Flags solve_f, conv_f, schr_f;
  auto* solve = app.add_subcommand("solve", "run one method at one or more orders, CSV out");
  add_common(solve, solve_f, true);
  auto* conv = app.add_subcommand("convergence", "log10(error) against n per method");
  add_common(conv, conv_f, true);
  auto* schr = app.add_subcommand("schrodinger", "n,error table for a Schrodinger problem");
  add_common(schr, schr_f, false);
  app.add_subcommand("list-problems", "print the catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kConfigError;
  }

  try {
    if (app.got_subcommand("list-problems")) {
      cli::cmd_list_problems(std::cout);
      return cli::kOk;
    }
    if (solve->parsed()) return cli::cmd_solve(merge(solve_f), std::cout);
    if (conv->parsed()) return cli::cmd_convergence(merge(conv_f), std::cout);
    if (schr->parsed()) return cli::cmd_schrodinger(merge(schr_f), std::cout);
  } catch (const std::exception& e) {
    return cli::report(e, std::cerr);
  }
  return cli::kConfigError;
}
