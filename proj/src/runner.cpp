#include "selfsched/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "selfsched/clearing.hpp"
#include "selfsched/equilibrium.hpp"
#include "selfsched/errors.hpp"
#include "selfsched/planner.hpp"
#include "selfsched/sizing.hpp"

namespace selfsched {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

RunMode parse_mode(const std::string& s) {
  if (s == "validate") return RunMode::validate;
  if (s == "ingest") return RunMode::ingest;
  if (s == "size") return RunMode::size;
  if (s == "nash") return RunMode::nash;
  if (s == "planner") return RunMode::planner;
  if (s == "sweep") return RunMode::sweep;
  throw ConfigError("unknown mode '" + s + "'");
}

StorageParams player_from_json(const json& j, int fallback_id) {
  StorageParams p;
  p.player_id = j.value("player_id", fallback_id);
  if (!j.contains("q_max") || !j.contains("e_max")) {
    throw ConfigError("player entries need q_max and e_max");
  }
  p.q_max = j.at("q_max").get<double>();
  p.e_max = j.at("e_max").get<double>();
  p.eta = j.value("eta", 1.0);
  p.oc = j.value("oc", 0.0);
  p.alpha_batt = j.value("alpha_batt", 0.5);
  p.epsilon = j.value("epsilon", 0.05);
  p.n_levels = j.value("n_levels", 1);
  return p;
}

json player_to_json(const StorageParams& p) {
  return json{{"player_id", p.player_id}, {"q_max", p.q_max},
              {"e_max", p.e_max},         {"eta", p.eta},
              {"oc", p.oc},               {"alpha_batt", p.alpha_batt},
              {"epsilon", p.epsilon},     {"n_levels", p.n_levels}};
}

struct BaseData {
  std::vector<DemandCurve> curves;  // representative day
  ResProfile res;
};

BaseData load_base_data(const RunConfig& config) {
  BaseData base;
  if (config.demand_csv.empty()) throw ConfigError("data.demand_csv is required");
  const RawBidTable table = parse_demand_csv(config.demand_csv);
  const auto days = build_demand_days(table);
  base.curves = days.size() == 1 ? days[0] : days[medoid_day(days)];

  if (!config.res_csv.empty()) {
    base.res = parse_res_csv(config.res_csv);
  } else if (!config.cf_csv.empty()) {
    if (!config.has_capacities) {
      throw ConfigError("cf_csv needs data.capacities to scale by");
    }
    const auto cf_days = parse_cf_csv(config.cf_csv);
    if (cf_days.empty()) throw DataError(config.cf_csv + ": no usable rows");
    base.res = scale_res(cf_days[medoid_day(cf_days)], config.capacities);
  } else {
    throw ConfigError("either data.res_csv or data.cf_csv is required");
  }
  return base;
}

struct Overrides {
  std::optional<int> n_players;
  std::optional<double> theta;
  std::optional<double> eta;
  std::optional<double> oc;
};

std::vector<StorageParams> make_players(const RunConfig& config,
                                        const BaseData& base,
                                        const Overrides& over) {
  std::vector<StorageParams> players;
  if (over.n_players && !config.sizing.present) {
    throw ConfigError("sweeping over n_players requires a sizing block");
  }
  if (config.sizing.present) {
    const SizingSpec& sz = config.sizing;
    const int n = over.n_players.value_or(sz.n_players);
    if (n > 0) {
      std::vector<double> demand(base.curves.size());
      for (std::size_t t = 0; t < base.curves.size(); ++t) {
        demand[t] = base.curves[t].max_volume();
      }
      const std::vector<double> residual = residual_demand(demand, base.res);
      const CapacityRequirement cap =
          required_capacity(residual, sz.eta, sz.c_rate);
      std::vector<double> shares =
          static_cast<int>(sz.shares.size()) == n ? sz.shares
                                                  : default_shares(n);
      players = partition_players(cap.e_max, cap.q_max, shares, sz.n_levels);
      for (StorageParams& p : players) {
        p.eta = sz.eta;
        p.oc = sz.oc;
        p.alpha_batt = sz.alpha_batt;
        p.epsilon = sz.epsilon;
      }
      players = apply_theta(std::move(players), sz.theta);
    }
  } else {
    players = config.players;
  }
  if (over.theta) players = apply_theta(std::move(players), *over.theta);
  for (StorageParams& p : players) {
    if (over.eta) p.eta = *over.eta;
    if (over.oc) p.oc = *over.oc;
  }
  return players;
}

Scenario assemble_scenario(const RunConfig& config, const BaseData& base,
                           std::vector<StorageParams> players) {
  Scenario s;
  s.horizon = static_cast<int>(base.curves.size());
  s.curves = base.curves;
  s.res = base.res;
  s.players = std::move(players);
  s.price_cap = config.price_cap;
  s.options = config.solver;
  const std::vector<std::string> v = validate_scenario(s);
  if (!v.empty()) {
    throw DataError("scenario invalid: " + v.front() +
                    (v.size() > 1 ? " (+" + std::to_string(v.size() - 1) +
                                        " more)"
                                  : ""));
  }
  return s;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

struct SolvedRun {
  GameState state;
  std::vector<MarketOutcome> outcomes;
  std::vector<double> profits;
  bool converged = true;
  int iterations = 0;
  int cycle_length = 0;
};

SolvedRun solve_point(const Scenario& scenario, const std::string& solver) {
  SolvedRun r;
  if (solver == "planner") {
    PlannerSolution sol = solve_planner(scenario);
    r.state = GameState{std::move(sol.schedules)};
    r.outcomes = std::move(sol.outcome);
    r.profits = player_profits(r.state, scenario, r.outcomes);
  } else {
    EquilibriumReport rep = find_nash(scenario);
    r.state = std::move(rep.final_state);
    r.outcomes = std::move(rep.outcome);
    r.profits = std::move(rep.per_player_profit);
    r.converged = rep.converged;
    r.iterations = rep.iterations;
    r.cycle_length = rep.cycle_length;
  }
  return r;
}

struct SweepPoint {
  Overrides over;
  std::string label;
};

std::vector<SweepPoint> sweep_grid(const SweepSpec& sweep) {
  // Cartesian product over the non-empty axes.
  std::vector<SweepPoint> points{{Overrides{}, ""}};
  auto extend = [&points](const auto& axis, const std::string& name, auto apply) {
    if (axis.empty()) return;
    std::vector<SweepPoint> next;
    next.reserve(points.size() * axis.size());
    for (const SweepPoint& pt : points) {
      for (const auto& v : axis) {
        SweepPoint np = pt;
        apply(np.over, v);
        np.label += (np.label.empty() ? "" : "_") + name + short_num(v);
        next.push_back(std::move(np));
      }
    }
    points = std::move(next);
  };
  extend(sweep.n_players, "n",
         [](Overrides& o, int v) { o.n_players = v; });
  extend(sweep.theta, "theta",
         [](Overrides& o, double v) { o.theta = v; });
  extend(sweep.eta, "eta", [](Overrides& o, double v) { o.eta = v; });
  extend(sweep.oc, "oc", [](Overrides& o, double v) { o.oc = v; });
  return points;
}

void run_ingest(const RunConfig& config) {
  const BaseData base = load_base_data(config);
  ensure_dir(config.out_dir);
  {
    std::ofstream out = open_out(config.out_dir + "/demand_clean.csv");
    out << "day,hour,price_eur_mwh,cum_volume_mwh\n";
    for (std::size_t t = 0; t < base.curves.size(); ++t) {
      const DemandCurve& c = base.curves[t];
      for (int j = 1; j <= c.block_count(); ++j) {
        out << "representative," << (t + 1) << ',' << num(c.price(j)) << ','
            << num(c.cum_volume(j)) << '\n';
      }
    }
  }
  {
    std::ofstream out = open_out(config.out_dir + "/res_clean.csv");
    out << "hour,res_mwh\n";
    for (int t = 0; t < base.res.horizon(); ++t) {
      out << (t + 1) << ',' << num(base.res.values[t]) << '\n';
    }
  }
  std::cout << "ingest: wrote representative day ("
            << base.curves.front().block_count() << " blocks per hour) to "
            << config.out_dir << "\n";
}

void run_size(const RunConfig& config) {
  if (!config.sizing.present) throw ConfigError("size mode needs a sizing block");
  const BaseData base = load_base_data(config);
  const SizingSpec& sz = config.sizing;
  std::vector<double> demand(base.curves.size());
  for (std::size_t t = 0; t < base.curves.size(); ++t) {
    demand[t] = base.curves[t].max_volume();
  }
  const std::vector<double> residual = residual_demand(demand, base.res);
  const CapacityRequirement cap = required_capacity(residual, sz.eta, sz.c_rate);
  std::vector<double> shares = static_cast<int>(sz.shares.size()) == sz.n_players
                                   ? sz.shares
                                   : default_shares(sz.n_players);
  std::vector<StorageParams> players =
      partition_players(cap.e_max, cap.q_max, shares, sz.n_levels);
  for (StorageParams& p : players) {
    p.eta = sz.eta;
    p.oc = sz.oc;
    p.alpha_batt = sz.alpha_batt;
    p.epsilon = sz.epsilon;
  }
  players = apply_theta(std::move(players), sz.theta);

  ensure_dir(config.out_dir);
  json j{{"residual", residual},
         {"corrected", cap.corrected},
         {"cumulative", cap.cumulative},
         {"level", cap.level},
         {"e_max", cap.e_max},
         {"q_max", cap.q_max},
         {"theta", sz.theta},
         {"players", json::array()}};
  for (const StorageParams& p : players) j["players"].push_back(player_to_json(p));
  open_out(config.out_dir + "/sizing.json") << j.dump(2) << '\n';
  std::cout << "size: e_max " << cap.e_max << " MWh, q_max " << cap.q_max
            << " MW across " << players.size() << " players\n";
}

void write_point(const std::string& dir, const std::string& label,
                 const RunConfig& config, const Scenario& scenario,
                 const SolvedRun& solved) {
  const std::string stem = dir + "/" + (label.empty() ? "run" : label);
  write_outcome_csv(stem + "_outcome.csv", scenario, solved.state,
                    solved.outcomes);
  RunSummary summary = summarize(label.empty() ? "run" : label, scenario,
                                 solved.outcomes, solved.profits);
  summary.converged = solved.converged;
  summary.iterations = solved.iterations;
  summary.cycle_length = solved.cycle_length;
  write_summary_json(stem + "_summary.json", summary, scenario);
  (void)config;
}

void run_single(const RunConfig& config, const std::string& solver) {
  const BaseData base = load_base_data(config);
  const Scenario scenario =
      assemble_scenario(config, base, make_players(config, base, {}));
  const SolvedRun solved = solve_point(scenario, solver);
  ensure_dir(config.out_dir);
  write_point(config.out_dir, solver, config, scenario, solved);
  std::cout << solver << ": sw " << totals(solved.outcomes).sw;
  if (solver == "nash") {
    std::cout << (solved.converged ? ", converged" : ", NOT converged")
              << " after " << solved.iterations << " sweeps";
    if (solved.cycle_length > 0) {
      std::cout << " (cycle of length " << solved.cycle_length << ")";
    }
  }
  std::cout << "\n";
  if (solver == "nash" && !solved.converged && solved.cycle_length == 0) {
    throw SolverError("diagonalization hit the sweep cap without repeating a state");
  }
}

void run_sweep(const RunConfig& config) {
  if (config.sweep.empty()) {
    throw ConfigError("sweep mode needs at least one non-empty sweep axis");
  }
  const BaseData base = load_base_data(config);
  const std::vector<SweepPoint> points = sweep_grid(config.sweep);
  ensure_dir(config.out_dir);

  struct Row {
    std::string label;
    RunSummary summary;
    std::string error;
  };
  std::vector<Row> rows(points.size());

  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      Row& row = rows[i];
      row.label = points[i].label;
      try {
        const Scenario scenario = assemble_scenario(
            config, base, make_players(config, base, points[i].over));
        const SolvedRun solved = solve_point(scenario, config.sweep.solver);
        write_point(config.out_dir, points[i].label, config, scenario, solved);
        row.summary = summarize(points[i].label, scenario, solved.outcomes,
                                solved.profits);
        row.summary.converged = solved.converged;
        row.summary.iterations = solved.iterations;
        row.summary.cycle_length = solved.cycle_length;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  // Index and summary table, written single-threaded after the joins.
  std::ofstream out = open_out(config.out_dir + "/sweep_summary.csv");
  out << "label,sw,cs,ps,unmet,curtailment,mean_price,peak_price,converged\n";
  json index = json::array();
  std::string first_error;
  for (const Row& row : rows) {
    if (!row.error.empty()) {
      if (first_error.empty()) first_error = row.label + ": " + row.error;
      index.push_back({{"label", row.label}, {"error", row.error}});
      continue;
    }
    const RunSummary& s = row.summary;
    out << row.label << ',' << num(s.sw) << ',' << num(s.cs) << ','
        << num(s.ps) << ',' << num(s.unmet) << ',' << num(s.curtailment)
        << ',' << num(s.mean_price) << ',' << num(s.peak_price) << ','
        << (s.converged ? "true" : "false") << '\n';
    index.push_back({{"label", row.label},
                     {"summary", row.label + "_summary.json"},
                     {"outcome", row.label + "_outcome.csv"}});
  }
  open_out(config.out_dir + "/index.json") << index.dump(2) << '\n';
  std::cout << "sweep: " << rows.size() << " grid points -> " << config.out_dir
            << "/sweep_summary.csv\n";
  if (!first_error.empty()) {
    throw SolverError("sweep point failed: " + first_error);
  }
}

void run_validate(const RunConfig& config) {
  const BaseData base = load_base_data(config);
  Scenario s;
  s.horizon = static_cast<int>(base.curves.size());
  s.curves = base.curves;
  s.res = base.res;
  s.players = make_players(config, base, {});
  s.price_cap = config.price_cap;
  s.options = config.solver;
  const std::vector<std::string> v = validate_scenario(s);
  for (const std::string& msg : v) std::cout << "violation: " << msg << "\n";
  if (!v.empty()) {
    throw DataError("scenario invalid: " + std::to_string(v.size()) +
                    " violation(s)");
  }
  std::cout << "scenario valid: " << s.horizon << " hours, "
            << s.players.size() << " players\n";
}

}  // namespace

std::vector<double> default_shares(int n_players) {
  switch (n_players) {
    case 1: return {1.0};
    case 2: return {1.0 / 3.0, 2.0 / 3.0};
    case 4: return {0.1, 0.2, 0.3, 0.4};
    case 6: return {0.05, 0.10, 0.10, 0.15, 0.25, 0.35};
    case 8: return {0.05, 0.05, 0.10, 0.10, 0.10, 0.15, 0.20, 0.25};
    default: {
      if (n_players < 1) throw ConfigError("n_players must be positive");
      return std::vector<double>(n_players, 1.0 / n_players);
    }
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  RunConfig c;
  try {
    c.mode = parse_mode(j.value("mode", "nash"));
    const fs::path dir = fs::path(path).parent_path();
    auto resolve = [&dir](const std::string& p) {
      return p.empty() || fs::path(p).is_absolute()
                 ? p
                 : (dir / p).string();
    };
    if (j.contains("data")) {
      const json& d = j.at("data");
      c.demand_csv = resolve(d.value("demand_csv", ""));
      c.res_csv = resolve(d.value("res_csv", ""));
      c.cf_csv = resolve(d.value("cf_csv", ""));
      if (d.contains("capacities")) {
        const json& caps = d.at("capacities");
        c.capacities.solar = caps.value("solar", 0.0);
        c.capacities.offshore = caps.value("offshore", 0.0);
        c.capacities.onshore = caps.value("onshore", 0.0);
        c.has_capacities = true;
      }
    }
    c.price_cap = j.value("price_cap", 4000.0);
    if (j.contains("players")) {
      int id = 1;
      for (const json& pj : j.at("players")) {
        c.players.push_back(player_from_json(pj, id++));
      }
    }
    if (j.contains("sizing")) {
      const json& s = j.at("sizing");
      c.sizing.present = true;
      c.sizing.eta = s.value("eta", 0.9);
      c.sizing.c_rate = s.value("c_rate", 0.25);
      c.sizing.n_players = s.value("n_players", 1);
      c.sizing.shares = s.value("shares", std::vector<double>{});
      c.sizing.n_levels = s.value("n_levels", 1);
      c.sizing.theta = s.value("theta", 1.0);
      c.sizing.oc = s.value("oc", 0.0);
      c.sizing.alpha_batt = s.value("alpha_batt", 0.5);
      c.sizing.epsilon = s.value("epsilon", 0.05);
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      c.solver.tolerance = s.value("tolerance", 1e-6);
      c.solver.max_sweeps = s.value("max_sweeps", 100);
      if (s.value("update_order", "ascending") == "descending") {
        c.solver.update_order = UpdateOrder::descending_id;
      }
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      c.sweep.solver = s.value("solver", "nash");
      if (c.sweep.solver != "nash" && c.sweep.solver != "planner") {
        throw ConfigError("sweep.solver must be 'nash' or 'planner'");
      }
      c.sweep.n_players = s.value("n_players", std::vector<int>{});
      c.sweep.theta = s.value("theta", std::vector<double>{});
      c.sweep.eta = s.value("eta", std::vector<double>{});
      c.sweep.oc = s.value("oc", std::vector<double>{});
    }
    c.out_dir = resolve(j.value("out_dir", "out"));
    c.jobs = j.value("jobs", 1);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return c;
}

Scenario build_scenario(const RunConfig& config) {
  const BaseData base = load_base_data(config);
  return assemble_scenario(config, base, make_players(config, base, {}));
}

void execute(const RunConfig& config) {
  switch (config.mode) {
    case RunMode::validate: run_validate(config); break;
    case RunMode::ingest: run_ingest(config); break;
    case RunMode::size: run_size(config); break;
    case RunMode::nash: run_single(config, "nash"); break;
    case RunMode::planner: run_single(config, "planner"); break;
    case RunMode::sweep: run_sweep(config); break;
  }
}

int run(const RunConfig& config) {
  try {
    execute(config);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

void write_outcome_csv(const std::string& path, const Scenario& scenario,
                       const GameState& state,
                       const std::vector<MarketOutcome>& outcomes) {
  std::ofstream out = open_out(path);
  out << "hour,price,served,curtailment,unmet,cs,ps";
  for (const StorageParams& p : scenario.players) {
    out << ",ch_" << p.player_id << ",dis_" << p.player_id << ",soc_"
        << p.player_id;
  }
  out << '\n';
  for (int t = 0; t < scenario.horizon; ++t) {
    const MarketOutcome& m = outcomes[t];
    out << (t + 1) << ',' << num(m.price) << ',' << num(m.served) << ','
        << num(m.curtailment) << ',' << num(m.unmet) << ','
        << num(m.consumer_surplus) << ',' << num(m.producer_surplus);
    for (const Schedule& s : state.schedules) {
      out << ',' << num(s.charge[t]) << ',' << num(s.discharge[t]) << ','
          << num(s.soc[t]);
    }
    out << '\n';
  }
}

RunSummary summarize(const std::string& label, const Scenario& scenario,
                     const std::vector<MarketOutcome>& outcomes,
                     const std::vector<double>& profits) {
  RunSummary s;
  s.label = label;
  s.horizon = scenario.horizon;
  const MetricsTotals tot = totals(outcomes);
  s.sw = tot.sw;
  s.cs = tot.cs;
  s.ps = tot.ps;
  s.unmet = tot.unmet;
  s.curtailment = tot.curtailment;
  double sum = 0.0, peak = 0.0;
  for (const MarketOutcome& m : outcomes) {
    sum += m.price;
    peak = std::max(peak, m.price);
  }
  s.mean_price = outcomes.empty() ? 0.0 : sum / outcomes.size();
  s.peak_price = peak;
  s.per_player_profit = profits;
  return s;
}

void write_summary_json(const std::string& path, const RunSummary& summary,
                        const Scenario& scenario) {
  json j{{"label", summary.label},
         {"horizon", summary.horizon},
         {"totals",
          {{"sw", summary.sw},
           {"cs", summary.cs},
           {"ps", summary.ps},
           {"unmet", summary.unmet},
           {"curtailment", summary.curtailment}}},
         {"prices",
          {{"mean", summary.mean_price}, {"peak", summary.peak_price}}},
         {"per_player_profit", summary.per_player_profit},
         {"converged", summary.converged},
         {"iterations", summary.iterations},
         {"cycle_length", summary.cycle_length},
         {"players", json::array()}};
  for (const StorageParams& p : scenario.players) {
    j["players"].push_back(player_to_json(p));
  }
  open_out(path) << j.dump(2) << '\n';
}

RunSummary read_summary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open summary " + path);
  json j;
  try {
    in >> j;
    RunSummary s;
    s.label = j.value("label", fs::path(path).stem().string());
    s.horizon = j.at("horizon").get<int>();
    const json& tot = j.at("totals");
    s.sw = tot.at("sw").get<double>();
    s.cs = tot.at("cs").get<double>();
    s.ps = tot.at("ps").get<double>();
    s.unmet = tot.at("unmet").get<double>();
    s.curtailment = tot.at("curtailment").get<double>();
    s.mean_price = j.at("prices").at("mean").get<double>();
    s.peak_price = j.at("prices").at("peak").get<double>();
    s.per_player_profit =
        j.value("per_player_profit", std::vector<double>{});
    s.converged = j.value("converged", true);
    s.iterations = j.value("iterations", 0);
    s.cycle_length = j.value("cycle_length", 0);
    return s;
  } catch (const json::exception& e) {
    throw DataError(path + ": summary schema mismatch: " + e.what());
  }
}

void compare_runs(const std::vector<std::string>& summary_paths,
                  const std::string& out_csv) {
  if (summary_paths.size() < 2) {
    throw DataError("compare needs at least two summaries");
  }
  std::vector<RunSummary> runs;
  runs.reserve(summary_paths.size());
  for (const std::string& p : summary_paths) runs.push_back(read_summary_json(p));
  for (const RunSummary& r : runs) {
    if (r.horizon != runs.front().horizon) {
      throw DataError("compare: horizons differ between runs");
    }
  }
  std::size_t max_players = 0;
  for (const RunSummary& r : runs) {
    max_players = std::max(max_players, r.per_player_profit.size());
  }
  std::ofstream out = open_out(out_csv);
  out << "run,sw,cs,ps,unmet,curtailment,mean_price,peak_price";
  for (std::size_t p = 1; p <= max_players; ++p) out << ",profit_p" << p;
  out << ",d_sw,d_cs,d_ps,d_unmet,d_curtailment,d_mean_price,d_peak_price\n";
  const RunSummary& ref = runs.front();
  for (const RunSummary& r : runs) {
    out << r.label << ',' << num(r.sw) << ',' << num(r.cs) << ',' << num(r.ps)
        << ',' << num(r.unmet) << ',' << num(r.curtailment) << ','
        << num(r.mean_price) << ',' << num(r.peak_price);
    for (std::size_t p = 0; p < max_players; ++p) {
      out << ',';
      if (p < r.per_player_profit.size()) out << num(r.per_player_profit[p]);
    }
    out << ',' << num(r.sw - ref.sw) << ',' << num(r.cs - ref.cs) << ','
        << num(r.ps - ref.ps) << ',' << num(r.unmet - ref.unmet) << ','
        << num(r.curtailment - ref.curtailment) << ','
        << num(r.mean_price - ref.mean_price) << ','
        << num(r.peak_price - ref.peak_price) << '\n';
  }
}

}  // namespace selfsched
