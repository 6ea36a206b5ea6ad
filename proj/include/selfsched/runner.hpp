#pragma once

#include <string>
#include <vector>

#include "selfsched/ingest.hpp"
#include "selfsched/model.hpp"

namespace selfsched {

enum class RunMode { validate, ingest, size, nash, planner, sweep };

struct SizingSpec {
  bool present = false;
  double eta = 0.9;
  double c_rate = 0.25;
  int n_players = 1;
  std::vector<double> shares;  // empty: default share table for n_players
  int n_levels = 1;
  double theta = 1.0;
  double oc = 0.0;
  double alpha_batt = 0.5;
  double epsilon = 0.05;
};

struct SweepSpec {
  std::string solver = "nash";  // "nash" or "planner"
  std::vector<int> n_players;
  std::vector<double> theta;
  std::vector<double> eta;
  std::vector<double> oc;

  bool empty() const {
    return n_players.empty() && theta.empty() && eta.empty() && oc.empty();
  }
};

struct RunConfig {
  RunMode mode = RunMode::nash;
  std::string demand_csv;
  std::string res_csv;
  std::string cf_csv;
  InstalledCapacities capacities;
  bool has_capacities = false;
  double price_cap = 4000.0;
  std::vector<StorageParams> players;  // explicit player list, if given
  SizingSpec sizing;
  SolverOptions solver;
  SweepSpec sweep;
  std::string out_dir = "out";
  int jobs = 1;
};

// Fixed share tables for asymmetric competition studies; equal shares for
// player counts without a table.
std::vector<double> default_shares(int n_players);

// Parses the JSON config; relative data paths are resolved against the
// config file's directory. Throws ConfigError on structural problems.
RunConfig load_config(const std::string& path);

// Ingests the data files and assembles the scenario (representative-day
// selection, sizing, theta scaling). Throws DataError on bad data.
Scenario build_scenario(const RunConfig& config);

// Executes the configured mode, writing report files into out_dir. Throws
// ConfigError / DataError / SolverError.
void execute(const RunConfig& config);

// execute() with exceptions mapped to exit codes: 0 success, 2 config
// error, 3 data error, 4 solver or convergence failure.
int run(const RunConfig& config);

// Aligned comparison of summary JSONs (schema-checked); writes a CSV with
// one row per run and deltas against the first.
void compare_runs(const std::vector<std::string>& summary_paths,
                  const std::string& out_csv);

// Report writers, exposed for tests and reuse.
void write_outcome_csv(const std::string& path, const Scenario& scenario,
                       const GameState& state,
                       const std::vector<MarketOutcome>& outcomes);

struct RunSummary {
  std::string label;
  int horizon = 0;
  double sw = 0.0, cs = 0.0, ps = 0.0;
  double unmet = 0.0, curtailment = 0.0;
  double mean_price = 0.0, peak_price = 0.0;
  std::vector<double> per_player_profit;
  bool converged = true;
  int iterations = 0;
  int cycle_length = 0;
};

RunSummary summarize(const std::string& label, const Scenario& scenario,
                     const std::vector<MarketOutcome>& outcomes,
                     const std::vector<double>& profits);

void write_summary_json(const std::string& path, const RunSummary& summary,
                        const Scenario& scenario);

RunSummary read_summary_json(const std::string& path);

}  // namespace selfsched
