#include <iostream>

#include <CLI11.hpp>

#include "hyers/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Direct-method stability analysis for the cubic functional equation"};
  app.require_subcommand(1);

  hyers::cli::Overrides o;
  auto add_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "Cauchy gap tolerance of the iteration");
    cmd->add_option("--n-max", o.n_max, "maximum number of iteration steps");
    cmd->add_option("--probes", o.probes, "number of probe pairs");
    cmd->add_option("--seed", o.seed, "probe seed");
    cmd->add_option("--csv", o.csv, "write the per-probe CSV here");
    cmd->add_option("--report", o.report, "also write the text report here");
    cmd->add_option("--trace-csv", o.trace_csv, "write the iteration trace of probe 0 here");
  };

  auto* example = app.add_subcommand("example", "golden run of the nilpotent 4x4 example");
  add_flags(example);

  std::string path;
  auto* analyze = app.add_subcommand("analyze", "full stability report for a config file");
  analyze->add_option("config", path, "config path")->required();
  add_flags(analyze);

  auto* defects = app.add_subcommand("defects", "sample the defects of the configured map");
  defects->add_option("config", path, "config path")->required();
  add_flags(defects);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hyers::cli::kConfigError;
  }

  if (*example) return hyers::cli::cmd_example(o, std::cout, std::cerr);
  if (*analyze) return hyers::cli::cmd_analyze(path, o, std::cout, std::cerr);
  return hyers::cli::cmd_defects(path, o, std::cout, std::cerr);
}
