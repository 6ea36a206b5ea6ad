#pragma once

// Internal helpers shared by the discrete solvers: the per-player action
// grid and the (charge units, discharge units) battery lattice.

#include <cstdint>
#include <vector>

#include "selfsched/model.hpp"

namespace selfsched::grid {

// Actions indexed by rank: 0 = idle, 1..N = charge level, N+1..2N =
// discharge level. This is also the tie-break order.
inline Action action_from_rank(int rank, int n_levels) {
  if (rank == 0) return Action{};
  if (rank <= n_levels) return Action{ActionType::charge, rank};
  return Action{ActionType::discharge, rank - n_levels};
}

inline int action_count(const StorageParams& p) {
  return p.q_max > 0.0 ? 2 * p.n_levels + 1 : 1;
}

// Battery level after c charge units and d discharge units, computed from a
// single canonical expression so equal unit counts always give bit-identical
// doubles.
inline double soc_of(const StorageParams& p, int c, int d) {
  const double unit = p.n_levels > 0 ? p.q_max / p.n_levels : 0.0;
  return p.alpha_batt * p.e_max + unit * (p.eta * c - d);
}

inline std::int64_t node_key(int c, int d) {
  return static_cast<std::int64_t>(c) * 1000000 + d;
}

struct GridAction {
  Action action;
  double charge = 0.0;
  double discharge = 0.0;
  int dc = 0;  // charge units
  int dd = 0;  // discharge units
};

inline std::vector<GridAction> grid_actions(const StorageParams& p) {
  std::vector<GridAction> out(action_count(p));
  for (int rank = 0; rank < static_cast<int>(out.size()); ++rank) {
    GridAction& g = out[rank];
    g.action = action_from_rank(rank, p.n_levels);
    if (g.action.type == ActionType::charge) {
      g.charge = p.offer_level(g.action.level);
      g.dc = g.action.level;
    } else if (g.action.type == ActionType::discharge) {
      g.discharge = p.offer_level(g.action.level);
      g.dd = g.action.level;
    }
  }
  return out;
}

inline bool in_band(const StorageParams& p, double soc) {
  return soc >= p.terminal_lo() - kFeasEps && soc <= p.terminal_hi() + kFeasEps;
}

inline bool in_bounds(const StorageParams& p, double soc) {
  return soc >= -kFeasEps && soc <= p.e_max + kFeasEps;
}

}  // namespace selfsched::grid
