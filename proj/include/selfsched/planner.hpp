#pragma once

#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

struct PlannerSolution {
  std::vector<Schedule> schedules;  // one per player, aligned with Scenario
  std::vector<MarketOutcome> outcome;
  double total_sw = 0.0;
  double total_cs = 0.0;
  double total_ps = 0.0;
  // The dispatch problem's internal optimal value; equals total_sw up to
  // floating-point noise and is exposed for cross-checks.
  double objective_value = 0.0;
};

// Centralized welfare benchmark: exact maximizer of sum_t (CS_t + PS_t) over
// all players' joint discrete schedules, subject to each player's battery
// constraints and the shared block-clearing rule. Solved by dynamic
// programming over the product of the players' battery lattices; the
// instance is rejected (SolverError) when that product is too large, and
// InfeasibleError is thrown when some terminal band is unreachable.
PlannerSolution solve_planner(const Scenario& scenario);

// solve_planner welfare minus the welfare of `state`; nonnegative (up to
// tolerance) for every feasible state.
double planner_dominance_check(const Scenario& scenario, const GameState& state);

}  // namespace selfsched
