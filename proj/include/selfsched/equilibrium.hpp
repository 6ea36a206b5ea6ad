#pragma once

#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

struct EquilibriumReport {
  GameState final_state;
  int iterations = 0;   // full diagonalization sweeps executed
  bool converged = false;
  int cycle_length = 0;  // 0 for a fixed point, else the detected cycle length
  std::vector<double> per_player_profit;
  std::vector<MarketOutcome> outcome;
};

// Gauss-Seidel diagonalization: starting from the all-idle state, each
// player in turn best-responds (method 2) to the most recent schedules of
// the others. Terminates when the post-sweep state matches any earlier
// state: a match with the immediately preceding state is a fixed point
// (converged), a match further back is a cycle (not converged; the cycle
// state with the highest social welfare is reported). A sweep-cap stop also
// reports converged = false with cycle_length 0.
//
// Throws InfeasibleError when any best response is infeasible.
EquilibriumReport find_nash(const Scenario& scenario, double tolerance);
EquilibriumReport find_nash(const Scenario& scenario);

// Max unilateral improvement per player: best-response profit minus the
// player's current profit under `state`. All entries <= tolerance certifies
// a Nash equilibrium.
std::vector<double> verify_nash(const GameState& state,
                                const Scenario& scenario, double tolerance);

}  // namespace selfsched
