// Command-line driver: scenario validation, data ingestion, storage sizing,
// Nash / planner runs, parameter sweeps and run comparison.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfsched/errors.hpp"
#include "selfsched/runner.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  double tolerance = -1.0;
  int max_sweeps = -1;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool config_required = true) {
  cmd->add_option("--config", args->config, "JSON run configuration")
      ->required(config_required);
  cmd->add_option("--out", args->out, "output directory (overrides config)");
  cmd->add_option("--tolerance", args->tolerance,
                  "equilibrium tolerance in EUR (overrides config)");
  cmd->add_option("--max-sweeps", args->max_sweeps,
                  "diagonalization sweep cap (overrides config)");
  cmd->add_option("--jobs", args->jobs, "parallel sweep workers");
}

int run_mode(const CommonArgs& args, selfsched::RunMode mode) {
  try {
    selfsched::RunConfig config = selfsched::load_config(args.config);
    config.mode = mode;
    if (!args.out.empty()) config.out_dir = args.out;
    if (args.tolerance >= 0.0) config.solver.tolerance = args.tolerance;
    if (args.max_sweeps > 0) config.solver.max_sweeps = args.max_sweeps;
    if (args.jobs > 0) config.jobs = args.jobs;
    return selfsched::run(config);
  } catch (const selfsched::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic storage self-scheduling in a all-renewable day-ahead market"};
  app.require_subcommand(1);

  CommonArgs validate_args, ingest_args, size_args, nash_args, planner_args,
      sweep_args;
  CLI::App* validate = app.add_subcommand("validate", "check config and data");
  add_common(validate, &validate_args);
  CLI::App* ingest =
      app.add_subcommand("ingest", "clean, down-sample and select the representative day");
  add_common(ingest, &ingest_args);
  CLI::App* size = app.add_subcommand("size", "residual-demand storage sizing");
  add_common(size, &size_args);
  CLI::App* nash =
      app.add_subcommand("nash", "iterative Nash-equilibrium search");
  add_common(nash, &nash_args);
  CLI::App* planner =
      app.add_subcommand("planner", "social-planner welfare benchmark");
  add_common(planner, &planner_args);
  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid");
  add_common(sweep, &sweep_args);

  std::vector<std::string> compare_inputs;
  std::string compare_out = "compare.csv";
  CLI::App* compare =
      app.add_subcommand("compare", "tabulate several run summaries");
  compare->add_option("summaries", compare_inputs, "summary JSON files")
      ->required()
      ->expected(-2);
  compare->add_option("--out", compare_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return run_mode(validate_args, selfsched::RunMode::validate);
  if (ingest->parsed()) return run_mode(ingest_args, selfsched::RunMode::ingest);
  if (size->parsed()) return run_mode(size_args, selfsched::RunMode::size);
  if (nash->parsed()) return run_mode(nash_args, selfsched::RunMode::nash);
  if (planner->parsed()) return run_mode(planner_args, selfsched::RunMode::planner);
  if (sweep->parsed()) return run_mode(sweep_args, selfsched::RunMode::sweep);
  if (compare->parsed()) {
    try {
      selfsched::compare_runs(compare_inputs, compare_out);
      std::cout << "compare: wrote " << compare_out << "\n";
      return 0;
    } catch (const selfsched::DataError& e) {
      std::cerr << "data error: " << e.what() << "\n";
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  }
  return 2;
}
