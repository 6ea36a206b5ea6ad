#include "selfsched/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "action_grid.hpp"
#include "selfsched/clearing.hpp"
#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Work cap for the joint dynamic program (state-action pairs summed over
// stages). Two players at a daily horizon stay well below this; partitioning
// the same capacity over many players multiplies the lattice product and is
// rejected rather than left to run for hours.
constexpr double kMaxWork = 4e9;

struct Node {
  int c, d;
};

// One player's reachable battery lattice with per-stage transition tables.
struct Lattice {
  std::vector<grid::GridAction> actions;
  std::vector<std::vector<Node>> layers;  // stage 0..T
  // next[t][i * actions.size() + rank] -> index into layers[t+1], or -1.
  std::vector<std::vector<int>> next;
};

Lattice build_lattice(const StorageParams& p, int horizon) {
  Lattice lat;
  lat.actions = grid::grid_actions(p);
  const int na = static_cast<int>(lat.actions.size());
  lat.layers.resize(horizon + 1);
  lat.layers[0].push_back({0, 0});

  std::unordered_map<std::int64_t, int> index;
  for (int t = 0; t < horizon; ++t) {
    index.clear();
    for (const Node& n : lat.layers[t]) {
      for (const grid::GridAction& a : lat.actions) {
        const int c = n.c + a.dc, d = n.d + a.dd;
        const double soc = grid::soc_of(p, c, d);
        if (!grid::in_bounds(p, soc)) continue;
        if (t == horizon - 1 && !grid::in_band(p, soc)) continue;
        const auto [it, fresh] =
            index.try_emplace(grid::node_key(c, d),
                              static_cast<int>(lat.layers[t + 1].size()));
        if (fresh) lat.layers[t + 1].push_back({c, d});
      }
    }
  }

  // Drop states that cannot reach the terminal band, then index transitions.
  std::vector<std::vector<char>> alive(horizon + 1);
  alive[horizon].assign(lat.layers[horizon].size(), 1);
  lat.next.resize(horizon);
  for (int t = horizon - 1; t >= 0; --t) {
    index.clear();
    std::vector<Node> kept;
    for (std::size_t i = 0; i < lat.layers[t + 1].size(); ++i) {
      if (!alive[t + 1][i]) continue;
      index[grid::node_key(lat.layers[t + 1][i].c, lat.layers[t + 1][i].d)] =
          static_cast<int>(kept.size());
      kept.push_back(lat.layers[t + 1][i]);
    }
    lat.layers[t + 1] = std::move(kept);
    alive[t].assign(lat.layers[t].size(), 0);
    lat.next[t].assign(lat.layers[t].size() * na, -1);
    for (std::size_t i = 0; i < lat.layers[t].size(); ++i) {
      const Node& n = lat.layers[t][i];
      for (int rank = 0; rank < na; ++rank) {
        const grid::GridAction& a = lat.actions[rank];
        const auto it = index.find(grid::node_key(n.c + a.dc, n.d + a.dd));
        if (it == index.end()) continue;
        lat.next[t][i * na + rank] = it->second;
        alive[t][i] = 1;
      }
    }
  }
  return lat;
}

struct JointAction {
  std::vector<int> ranks;
  double net = 0.0;      // sum of dis - ch over players
  double oc_cost = 0.0;  // sum of oc * (ch + dis)
};

std::vector<JointAction> enumerate_joint_actions(
    const std::vector<Lattice>& lattices, const Scenario& s) {
  std::vector<JointAction> out;
  JointAction cur;
  cur.ranks.assign(lattices.size(), 0);
  // Odometer over per-player ranks, player 0 most significant, so the list
  // is in lexicographic rank order.
  while (true) {
    cur.net = 0.0;
    cur.oc_cost = 0.0;
    for (std::size_t p = 0; p < lattices.size(); ++p) {
      const grid::GridAction& a = lattices[p].actions[cur.ranks[p]];
      cur.net += a.discharge - a.charge;
      cur.oc_cost += s.players[p].oc * (a.charge + a.discharge);
    }
    out.push_back(cur);
    int p = static_cast<int>(lattices.size()) - 1;
    while (p >= 0) {
      if (++cur.ranks[p] < static_cast<int>(lattices[p].actions.size())) break;
      cur.ranks[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
  return out;
}

// Hourly welfare of serving total supply q_tot against the hour's curve:
// telescoped consumer surplus plus the served-block revenue (the linear
// producer-surplus aggregate before operating costs). Curtailed excess
// earns nothing.
double hour_welfare(const DemandCurve& curve, double q_tot) {
  const ClearingResult r = clear_hour(curve, std::max(q_tot, 0.0));
  const double cs = consumer_surplus_telescoped(curve, r.active_block);
  const double revenue = r.price * r.served;
  return cs + revenue;
}

}  // namespace

PlannerSolution solve_planner(const Scenario& scenario) {
  {
    const std::vector<std::string> v = validate_scenario(scenario);
    if (!v.empty()) throw DataError("scenario: " + v.front());
  }
  const int T = scenario.horizon;
  const int P = static_cast<int>(scenario.players.size());

  std::vector<Lattice> lattices;
  lattices.reserve(P);
  for (const StorageParams& p : scenario.players) {
    lattices.push_back(build_lattice(p, T));
    // A stage-0 row with no surviving transition means the terminal band is
    // unreachable for this player.
    const bool dead =
        T > 0 && std::all_of(lattices.back().next[0].begin(),
                             lattices.back().next[0].end(),
                             [](int ix) { return ix < 0; });
    if (dead) {
      throw InfeasibleError(p.player_id, 0,
                            "planner: terminal band unreachable for player " +
                                std::to_string(p.player_id));
    }
  }

  const std::vector<JointAction> joint = enumerate_joint_actions(lattices, scenario);

  // Stage state counts and the work estimate.
  std::vector<double> product(T + 1, 1.0);
  double work = 0.0;
  for (int t = 0; t <= T; ++t) {
    for (const Lattice& lat : lattices) {
      product[t] *= static_cast<double>(lat.layers[t].size());
    }
    if (t < T) work += product[t] * static_cast<double>(joint.size());
  }
  if (work > kMaxWork) {
    throw SolverError(
        "planner instance too large: about " + std::to_string(work) +
        " state-action pairs; reduce players, levels, or the horizon");
  }

  // Per-hour welfare of every joint action (state independent), or -inf when
  // the joint action drives market supply negative.
  std::vector<std::vector<double>> w(T, std::vector<double>(joint.size()));
  for (int t = 0; t < T; ++t) {
    for (std::size_t ja = 0; ja < joint.size(); ++ja) {
      const double q_tot = scenario.res.values[t] + joint[ja].net;
      w[t][ja] = q_tot < -kFeasEps
                     ? kNegInf
                     : hour_welfare(scenario.curves[t], q_tot) - joint[ja].oc_cost;
    }
  }

  // Backward value-to-go over the product lattice; argmax kept per stage for
  // the forward walk. States are mixed-radix over per-player layer indices.
  std::vector<std::int64_t> stride(P);
  auto strides_at = [&](int t) {
    std::int64_t s = 1;
    for (int p = P - 1; p >= 0; --p) {
      stride[p] = s;
      s *= static_cast<std::int64_t>(lattices[p].layers[t].size());
    }
    return s;  // total product size
  };

  std::vector<std::vector<std::uint32_t>> argmax(T);
  std::vector<double> value(static_cast<std::size_t>(strides_at(T)), 0.0);
  std::vector<double> prev;
  std::vector<int> idx(P), nidx(P);
  for (int t = T - 1; t >= 0; --t) {
    // Strides of stage t+1 are needed to compose successor ids.
    std::vector<std::int64_t> next_stride(P);
    {
      std::int64_t s = 1;
      for (int p = P - 1; p >= 0; --p) {
        next_stride[p] = s;
        s *= static_cast<std::int64_t>(lattices[p].layers[t + 1].size());
      }
    }
    const std::int64_t n_states = strides_at(t);
    prev.assign(static_cast<std::size_t>(n_states), kNegInf);
    argmax[t].assign(static_cast<std::size_t>(n_states), 0);
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t s = 0; s < n_states; ++s) {
      double best = kNegInf;
      std::uint32_t best_ja = 0;
      for (std::size_t ja = 0; ja < joint.size(); ++ja) {
        if (w[t][ja] == kNegInf) continue;
        std::int64_t succ = 0;
        bool ok = true;
        for (int p = 0; p < P; ++p) {
          const int na = static_cast<int>(lattices[p].actions.size());
          const int nx = lattices[p].next[t][idx[p] * na + joint[ja].ranks[p]];
          if (nx < 0) {
            ok = false;
            break;
          }
          succ += nx * next_stride[p];
        }
        if (!ok) continue;
        const double v = w[t][ja] + value[static_cast<std::size_t>(succ)];
        if (v > best) {
          best = v;
          best_ja = static_cast<std::uint32_t>(ja);
        }
      }
      prev[static_cast<std::size_t>(s)] = best;
      argmax[t][static_cast<std::size_t>(s)] = best_ja;
      // Odometer increment of the per-player indices.
      for (int p = P - 1; p >= 0; --p) {
        if (++idx[p] < static_cast<int>(lattices[p].layers[t].size())) break;
        idx[p] = 0;
      }
    }
    std::swap(value, prev);
  }

  if (!value.empty() && value[0] == kNegInf) {
    throw InfeasibleError(0, 0, "planner: no jointly feasible dispatch");
  }
  const double objective = value.empty() ? 0.0 : value[0];

  // Forward walk from the all-(0,0) root.
  PlannerSolution sol;
  sol.objective_value = objective;
  sol.schedules.resize(P);
  for (int p = 0; p < P; ++p) {
    sol.schedules[p].charge.resize(T);
    sol.schedules[p].discharge.resize(T);
    sol.schedules[p].actions.resize(T);
  }
  std::fill(idx.begin(), idx.end(), 0);
  for (int t = 0; t < T; ++t) {
    std::int64_t s = 0;
    {
      std::int64_t acc = 1;
      for (int p = P - 1; p >= 0; --p) {
        stride[p] = acc;
        acc *= static_cast<std::int64_t>(lattices[p].layers[t].size());
      }
      for (int p = 0; p < P; ++p) s += idx[p] * stride[p];
    }
    const JointAction& ja = joint[argmax[t][static_cast<std::size_t>(s)]];
    for (int p = 0; p < P; ++p) {
      const int na = static_cast<int>(lattices[p].actions.size());
      const grid::GridAction& a = lattices[p].actions[ja.ranks[p]];
      sol.schedules[p].charge[t] = a.charge;
      sol.schedules[p].discharge[t] = a.discharge;
      sol.schedules[p].actions[t] = a.action;
      idx[p] = lattices[p].next[t][idx[p] * na + ja.ranks[p]];
    }
  }
  for (int p = 0; p < P; ++p) {
    sol.schedules[p].soc = recompute_soc(scenario.players[p],
                                         sol.schedules[p].charge,
                                         sol.schedules[p].discharge);
  }

  GameState state{sol.schedules};
  sol.outcome = hourly_metrics(state, scenario);
  const MetricsTotals tot = totals(sol.outcome);
  sol.total_sw = tot.sw;
  sol.total_cs = tot.cs;
  sol.total_ps = tot.ps;
  return sol;
}

double planner_dominance_check(const Scenario& scenario, const GameState& state) {
  const PlannerSolution planner = solve_planner(scenario);
  const MetricsTotals tot = totals(hourly_metrics(state, scenario));
  return planner.total_sw - tot.sw;
}

}  // namespace selfsched
