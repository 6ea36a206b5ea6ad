#include "selfsched/equilibrium.hpp"

#include <algorithm>
#include <string>

#include "selfsched/best_response.hpp"
#include "selfsched/clearing.hpp"
#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

void check_inputs(const Scenario& scenario, double tolerance) {
  const std::vector<std::string> v = validate_scenario(scenario);
  if (!v.empty()) throw DataError("scenario: " + v.front());
  if (tolerance < 0.0) throw DataError("tolerance must be nonnegative");
}

Schedule best_respond(const Scenario& scenario, const GameState& state, int p) {
  const BestResponseProblem prob =
      make_best_response_problem(scenario, state, p);
  const BestResponseSolution sol = solve_method2(prob);
  if (sol.status == SolveStatus::infeasible) {
    throw InfeasibleError(
        scenario.players[p].player_id, sol.infeasible_hour,
        "best response infeasible for player " +
            std::to_string(scenario.players[p].player_id) +
            (sol.infeasible_hour > 0
                 ? " at hour " + std::to_string(sol.infeasible_hour)
                 : " (terminal band unreachable)"));
  }
  return sol.schedule;
}

}  // namespace

EquilibriumReport find_nash(const Scenario& scenario, double tolerance) {
  check_inputs(scenario, tolerance);

  std::vector<int> order(scenario.players.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  if (scenario.options.update_order == UpdateOrder::descending_id) {
    std::reverse(order.begin(), order.end());
  }

  GameState state = idle_state(scenario);
  std::vector<GameState> history{state};

  EquilibriumReport report;
  for (int sweep = 1; sweep <= scenario.options.max_sweeps; ++sweep) {
    for (int p : order) {
      state.schedules[p] = best_respond(scenario, state, p);
    }
    report.iterations = sweep;

    int match = -1;
    for (std::size_t k = 0; k < history.size(); ++k) {
      if (same_actions(history[k], state)) {
        match = static_cast<int>(k);
        break;
      }
    }
    if (match < 0) {
      history.push_back(state);
      continue;
    }
    if (match == static_cast<int>(history.size()) - 1) {
      report.converged = true;
      report.final_state = state;
    } else {
      // A revisited earlier state: the sweeps from `match` onward repeat
      // forever. Report the cycle state with the highest social welfare.
      report.converged = false;
      report.cycle_length = static_cast<int>(history.size()) - match;
      double best_sw = 0.0;
      int best_k = -1;
      for (std::size_t k = match; k < history.size(); ++k) {
        const double sw =
            totals(hourly_metrics(history[k], scenario)).sw;
        if (best_k < 0 || sw > best_sw) {
          best_sw = sw;
          best_k = static_cast<int>(k);
        }
      }
      report.final_state = history[best_k];
    }
    report.outcome = hourly_metrics(report.final_state, scenario);
    report.per_player_profit =
        player_profits(report.final_state, scenario, report.outcome);
    return report;
  }

  // Sweep cap reached without a repeat.
  report.converged = false;
  report.cycle_length = 0;
  report.final_state = state;
  report.outcome = hourly_metrics(state, scenario);
  report.per_player_profit = player_profits(state, scenario, report.outcome);
  return report;
}

EquilibriumReport find_nash(const Scenario& scenario) {
  return find_nash(scenario, scenario.options.tolerance);
}

std::vector<double> verify_nash(const GameState& state,
                                const Scenario& scenario, double tolerance) {
  check_inputs(scenario, tolerance);
  if (state.schedules.size() != scenario.players.size()) {
    throw DataError("verify_nash: state does not match the player list");
  }
  const std::vector<MarketOutcome> outcome = hourly_metrics(state, scenario);
  const std::vector<double> current = player_profits(state, scenario, outcome);
  std::vector<double> improvement(scenario.players.size());
  for (std::size_t p = 0; p < scenario.players.size(); ++p) {
    const BestResponseProblem prob =
        make_best_response_problem(scenario, state, static_cast<int>(p));
    const BestResponseSolution sol = solve_method2(prob);
    if (sol.status == SolveStatus::infeasible) {
      throw InfeasibleError(scenario.players[p].player_id, sol.infeasible_hour,
                            "verify_nash: best response infeasible");
    }
    improvement[p] = sol.profit - current[p];
  }
  return improvement;
}

}  // namespace selfsched
