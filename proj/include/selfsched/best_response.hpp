#pragma once

#include <string>
#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

// One player's self-scheduling problem against fixed rival schedules.
// exo_charge / exo_discharge are the rivals' aggregate quantities per hour;
// big_m holds the per-hour big-M constants used by the indicator logic of
// solve_method1 (leave empty to have them derived).
struct BestResponseProblem {
  StorageParams player;
  std::vector<double> exo_charge;
  std::vector<double> exo_discharge;
  ResProfile res;
  std::vector<DemandCurve> curves;
  std::vector<double> big_m;

  int horizon() const { return static_cast<int>(curves.size()); }
  // RES_t - q^{ch,o}_t + q^{dis,o}_t, the supply the player cannot control.
  double exogenous_supply(int t) const {
    return res.values[t] - exo_charge[t] + exo_discharge[t];
  }
};

// Tightest simple valid bound: max demand volume plus RES plus every
// quantity any player could move this hour.
std::vector<double> default_big_m(const BestResponseProblem& prob);

// Problem for player `player_index` of the scenario, rivals fixed at their
// schedules in `state`. big_m uses the scenario-wide sum of power ratings.
BestResponseProblem make_best_response_problem(const Scenario& scenario,
                                               const GameState& state,
                                               int player_index);

std::vector<std::string> validate_problem(const BestResponseProblem& prob);

enum class SolveStatus { optimal, infeasible };

struct BestResponseSolution {
  Schedule schedule;
  double profit = 0.0;
  std::vector<double> prices;  // uniform price implied by the schedule
  SolveStatus status = SolveStatus::optimal;
  // 1-based hour with no feasible action; 0 when infeasibility is global
  // (terminal band unreachable). Meaningful only when status == infeasible.
  int infeasible_hour = 0;
};

// Exact optimum of the big-M formulation: depth-first branch and bound over
// the per-hour action choices, hourly profit evaluated through the
// indicator/product-binary algebra of that formulation.
BestResponseSolution solve_method1(const BestResponseProblem& prob);

// Exact optimum of the continuous block reformulation: dynamic programming
// over the lattice of reachable battery levels, hourly profit evaluated
// through the served-block objective with the exogenous-revenue correction.
BestResponseSolution solve_method2(const BestResponseProblem& prob);

// Exhaustive enumeration of all (2N+1)^T action sequences, profits evaluated
// at clear_hour prices. Refuses instances beyond 1e7 sequences. Ties resolve
// to the lexicographically smallest sequence (idle < charge < discharge,
// lower level first).
BestResponseSolution brute_force_best_response(const BestResponseProblem& prob);

}  // namespace selfsched
