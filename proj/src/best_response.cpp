#include "selfsched/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "action_grid.hpp"
#include "selfsched/clearing.hpp"
#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ActionEntry {
  bool feasible = false;
  double own_charge = 0.0;
  double own_discharge = 0.0;
  double q_tot = 0.0;
  double price = 0.0;   // uniform price cleared at q_tot
  double profit = 0.0;  // hourly profit under the chosen formulation
  int dc = 0;           // charge units added
  int dd = 0;           // discharge units added
};

// Per-hour action table. Profit entries are filled by the formulation's own
// evaluator; everything else is shared plumbing.
struct HourTable {
  std::vector<ActionEntry> entries;  // indexed by rank
  int n_feasible = 0;
  double best_profit = kNegInf;  // over feasible entries
  double delta_min = 0.0;        // most negative SoC move among feasible
  double delta_max = 0.0;        // most positive
};

// --- Method 1 hourly evaluator -------------------------------------------
//
// Determines the active demand step through the indicator partition
// (u, u+, u-) of the big-M logic, verifies that the linear constraints hold
// at the given M_t, and prices the action through the product binaries
// w = z * u. Oversupply beyond the last volume keeps the last step active
// with the excess curtailed, matching clear_hour.

int bigm_active_block(const DemandCurve& curve, double q_tot) {
  const int d = curve.block_count();
  if (q_tot <= curve.cum_volume(1)) return 1;
  for (int j = 2; j < d; ++j) {
    if (q_tot > curve.block_floor(j) && q_tot <= curve.cum_volume(j)) return j;
  }
  return d;
}

void check_bigm_assignment(const DemandCurve& curve, double q_tot, int jstar,
                           double m) {
  const int d = curve.block_count();
  const bool oversupply = q_tot > curve.max_volume() + kFeasEps;
  for (int j = 1; j <= d; ++j) {
    const int u = j == jstar ? 1 : 0;
    const int u_above = (!u && q_tot > curve.cum_volume(j)) ? 1 : 0;
    const int u_below = (!u && q_tot <= curve.block_floor(j)) ? 1 : 0;
    if (u + u_above + u_below != 1) {
      throw SolverError("method1: indicator partition failed at block " +
                        std::to_string(j));
    }
    // The four slackened range constraints of the family.
    const bool lower_ok = curve.block_floor(j) - m * (1 - u) <= q_tot + kFeasEps;
    // Under curtailment the active (last) step's upper bound is relaxed.
    const bool upper_ok =
        (u && j == d && oversupply) ||
        q_tot <= curve.cum_volume(j) + m * (1 - u) + kFeasEps;
    const bool above_ok = curve.cum_volume(j) - m * (1 - u_above) <= q_tot + kFeasEps;
    const bool below_ok = q_tot <= curve.block_floor(j) + m * (1 - u_below) + kFeasEps;
    if (!(lower_ok && upper_ok && above_ok && below_ok)) {
      throw SolverError("method1: big-M constant too small for hour volume " +
                        std::to_string(curve.cum_volume(j)));
    }
  }
}

double method1_hour_profit(const DemandCurve& curve, const StorageParams& p,
                           double q_tot, int rank) {
  const int jstar = bigm_active_block(curve, q_tot);
  const Action a = grid::action_from_rank(rank, p.n_levels);
  long double profit = 0.0L;
  // sum_i sum_j Q_i pr_j (w_dis - w_ch) - OC sum_i Q_i (z_dis + z_ch)
  for (int i = 1; i <= p.n_levels; ++i) {
    const int z_ch = (a.type == ActionType::charge && a.level == i) ? 1 : 0;
    const int z_dis = (a.type == ActionType::discharge && a.level == i) ? 1 : 0;
    if (!z_ch && !z_dis) continue;
    for (int j = 1; j <= curve.block_count(); ++j) {
      const int u = j == jstar ? 1 : 0;
      const int w_ch = z_ch * u;
      const int w_dis = z_dis * u;
      profit += p.offer_level(i) * curve.price(j) * (w_dis - w_ch);
    }
    profit -= p.oc * p.offer_level(i) * (z_dis + z_ch);
  }
  return static_cast<double>(profit);
}

// --- Method 2 hourly evaluator -------------------------------------------
//
// Revenue of the served blocks pr_j (u_j q_min_j + b_j) at the active step,
// plus the floor-priced curtailed excess, minus the uniform-price value of
// the exogenous supply (the whole-market revenue belongs to everyone; only
// the player's own net sales are its profit), minus operating cost.

double method2_hour_profit(const DemandCurve& curve, const StorageParams& p,
                           double exo, const ClearingResult& r,
                           double own_charge, double own_discharge) {
  const long double block_revenue =
      static_cast<long double>(r.price) *
      (curve.block_floor(r.active_block) + r.partial_fill);
  long double profit = block_revenue;
  profit += static_cast<long double>(r.price) * r.curtailment;
  profit -= static_cast<long double>(r.price) * exo;
  profit -= p.oc * (own_charge + own_discharge);
  return static_cast<double>(profit);
}

enum class Formulation { method1, method2, cleared };

std::vector<HourTable> build_tables(const BestResponseProblem& prob,
                                    Formulation form,
                                    const std::vector<double>& big_m) {
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  const int na = grid::action_count(p);
  std::vector<HourTable> tables(T);
  for (int t = 0; t < T; ++t) {
    const DemandCurve& curve = prob.curves[t];
    const double exo = prob.exogenous_supply(t);
    HourTable& ht = tables[t];
    ht.entries.resize(na);
    ht.delta_min = std::numeric_limits<double>::infinity();
    ht.delta_max = -std::numeric_limits<double>::infinity();
    for (int rank = 0; rank < na; ++rank) {
      ActionEntry& e = ht.entries[rank];
      const Action a = grid::action_from_rank(rank, p.n_levels);
      if (a.type == ActionType::charge) {
        e.own_charge = p.offer_level(a.level);
        e.dc = a.level;
      } else if (a.type == ActionType::discharge) {
        e.own_discharge = p.offer_level(a.level);
        e.dd = a.level;
      }
      e.q_tot = exo + e.own_discharge - e.own_charge;
      if (e.q_tot < -kFeasEps) continue;  // market supply cannot go negative
      e.feasible = true;
      ++ht.n_feasible;
      const ClearingResult r = clear_hour(curve, std::max(e.q_tot, 0.0));
      e.price = r.price;
      switch (form) {
        case Formulation::method1:
          e.profit = method1_hour_profit(curve, p, e.q_tot, rank);
          check_bigm_assignment(curve, e.q_tot, r.active_block, big_m[t]);
          break;
        case Formulation::method2:
          e.profit = method2_hour_profit(curve, p, exo, r, e.own_charge,
                                         e.own_discharge);
          break;
        case Formulation::cleared:
          e.profit = e.own_discharge * (r.price - p.oc) -
                     e.own_charge * (r.price + p.oc);
          break;
      }
      if (!std::isfinite(e.profit)) {
        throw SolverError("internal: non-finite hourly profit");
      }
      const double delta = p.eta * e.own_charge - e.own_discharge;
      ht.best_profit = std::max(ht.best_profit, e.profit);
      ht.delta_min = std::min(ht.delta_min, delta);
      ht.delta_max = std::max(ht.delta_max, delta);
    }
  }
  return tables;
}

// First hour (1-based) with an empty feasible action set, or 0.
int find_dead_hour(const std::vector<HourTable>& tables) {
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (tables[t].n_feasible == 0) return static_cast<int>(t) + 1;
  }
  return 0;
}

BestResponseSolution infeasible_solution(const BestResponseProblem& prob,
                                         int hour) {
  BestResponseSolution sol;
  sol.status = SolveStatus::infeasible;
  sol.infeasible_hour = hour;
  sol.schedule = idle_schedule(prob.player, prob.horizon());
  sol.profit = 0.0;
  return sol;
}

BestResponseSolution assemble(const BestResponseProblem& prob,
                              const std::vector<HourTable>& tables,
                              const std::vector<int>& ranks, double profit) {
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  BestResponseSolution sol;
  sol.status = SolveStatus::optimal;
  sol.profit = profit;
  Schedule& s = sol.schedule;
  s.charge.resize(T);
  s.discharge.resize(T);
  s.actions.resize(T);
  sol.prices.resize(T);
  for (int t = 0; t < T; ++t) {
    const ActionEntry& e = tables[t].entries[ranks[t]];
    s.charge[t] = e.own_charge;
    s.discharge[t] = e.own_discharge;
    s.actions[t] = grid::action_from_rank(ranks[t], p.n_levels);
    sol.prices[t] = e.price;
  }
  s.soc = recompute_soc(p, s.charge, s.discharge);
  return sol;
}

void require_valid(const BestResponseProblem& prob) {
  const std::vector<std::string> v = validate_problem(prob);
  if (!v.empty()) throw DataError("best response problem: " + v.front());
}

// Per-stage window of battery levels from which the terminal band stays
// reachable; a relaxation (interval hull), so it only prunes provably dead
// states. window[t] bounds the SoC after t hours.
struct Window {
  std::vector<double> lo, hi;
  bool infeasible = false;
};

Window band_windows(const BestResponseProblem& prob,
                    const std::vector<HourTable>& tables) {
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  Window w;
  w.lo.resize(T + 1);
  w.hi.resize(T + 1);
  w.lo[T] = std::max(p.terminal_lo() - kFeasEps, -kFeasEps);
  w.hi[T] = std::min(p.terminal_hi() + kFeasEps, p.e_max + kFeasEps);
  for (int t = T - 1; t >= 0; --t) {
    w.lo[t] = std::max(w.lo[t + 1] - tables[t].delta_max, -kFeasEps);
    w.hi[t] = std::min(w.hi[t + 1] - tables[t].delta_min, p.e_max + kFeasEps);
    if (w.lo[t] > w.hi[t]) {
      w.infeasible = true;
      return w;
    }
  }
  const double e0 = p.initial_soc();
  if (e0 < w.lo[0] || e0 > w.hi[0]) w.infeasible = true;
  return w;
}

}  // namespace

std::vector<double> default_big_m(const BestResponseProblem& prob) {
  std::vector<double> m(prob.horizon());
  for (int t = 0; t < prob.horizon(); ++t) {
    m[t] = prob.curves[t].max_volume() + prob.res.values[t] +
           prob.player.q_max + prob.exo_charge[t] + prob.exo_discharge[t];
  }
  return m;
}

BestResponseProblem make_best_response_problem(const Scenario& scenario,
                                               const GameState& state,
                                               int player_index) {
  const int T = scenario.horizon;
  BestResponseProblem prob;
  prob.player = scenario.players.at(player_index);
  prob.res = scenario.res;
  prob.curves = scenario.curves;
  prob.exo_charge.assign(T, 0.0);
  prob.exo_discharge.assign(T, 0.0);
  for (std::size_t o = 0; o < state.schedules.size(); ++o) {
    if (static_cast<int>(o) == player_index) continue;
    for (int t = 0; t < T; ++t) {
      prob.exo_charge[t] += state.schedules[o].charge[t];
      prob.exo_discharge[t] += state.schedules[o].discharge[t];
    }
  }
  double sum_qmax = 0.0;
  for (const StorageParams& p : scenario.players) sum_qmax += p.q_max;
  prob.big_m.resize(T);
  for (int t = 0; t < T; ++t) {
    prob.big_m[t] =
        scenario.curves[t].max_volume() + scenario.res.values[t] + sum_qmax;
  }
  return prob;
}

std::vector<std::string> validate_problem(const BestResponseProblem& prob) {
  std::vector<std::string> v;
  const int T = prob.horizon();
  if (T == 0) v.push_back("no demand curves");
  if (prob.res.horizon() != T) v.push_back("RES length does not match curves");
  if (static_cast<int>(prob.exo_charge.size()) != T ||
      static_cast<int>(prob.exo_discharge.size()) != T) {
    v.push_back("exogenous quantities do not match the horizon");
  }
  if (!v.empty()) return v;
  for (int t = 0; t < T; ++t) {
    validate_curve(prob.curves[t], "hour " + std::to_string(t + 1), &v);
    if (prob.res.values[t] < 0.0) {
      v.push_back("hour " + std::to_string(t + 1) + ": RES is negative");
    }
    if (prob.exo_charge[t] < 0.0 || prob.exo_discharge[t] < 0.0) {
      v.push_back("hour " + std::to_string(t + 1) +
                  ": negative exogenous quantity");
    }
  }
  const StorageParams& p = prob.player;
  if (!(p.q_max >= 0.0)) v.push_back("player: q_max must be nonnegative");
  if (p.e_max < 0.0) v.push_back("player: e_max must be nonnegative");
  if (!(p.eta > 0.0 && p.eta <= 1.0)) v.push_back("player: eta out of (0,1]");
  if (p.oc < 0.0) v.push_back("player: oc must be nonnegative");
  if (p.n_levels < 1) v.push_back("player: n_levels must be positive");
  if (!prob.big_m.empty()) {
    if (static_cast<int>(prob.big_m.size()) != T) {
      v.push_back("big_m length does not match the horizon");
    } else {
      const std::vector<double> floor_m = default_big_m(prob);
      for (int t = 0; t < T; ++t) {
        if (prob.big_m[t] < floor_m[t] - kFeasEps) {
          v.push_back("hour " + std::to_string(t + 1) +
                      ": big_m below the valid bound");
        }
      }
    }
  }
  return v;
}

BestResponseSolution solve_method1(const BestResponseProblem& prob) {
  require_valid(prob);
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  const std::vector<double> big_m =
      prob.big_m.empty() ? default_big_m(prob) : prob.big_m;
  const std::vector<HourTable> tables =
      build_tables(prob, Formulation::method1, big_m);

  if (const int dead = find_dead_hour(tables)) {
    return infeasible_solution(prob, dead);
  }
  const Window w = band_windows(prob, tables);
  if (w.infeasible) return infeasible_solution(prob, 0);

  // Optimistic completion bound: sum of the best hourly profits.
  std::vector<double> suffix(T + 1, 0.0);
  for (int t = T - 1; t >= 0; --t) {
    suffix[t] = suffix[t + 1] + tables[t].best_profit;
  }

  std::vector<int> stack(T, 0), best_ranks;
  double best = kNegInf;
  const int na = grid::action_count(p);

  // Depth-first search in rank order; the first incumbent among equal
  // optima is the lexicographically smallest sequence.
  struct Frame {
    int c, d, rank;
    double acc;
  };
  std::vector<Frame> frames(T + 1);
  frames[0] = {0, 0, 0, 0.0};
  int t = 0;
  while (t >= 0) {
    Frame& f = frames[t];
    if (t == T) {
      const double soc = grid::soc_of(p, f.c, f.d);
      if (soc >= p.terminal_lo() - kFeasEps &&
          soc <= p.terminal_hi() + kFeasEps && f.acc > best) {
        best = f.acc;
        best_ranks = stack;
      }
      --t;
      continue;
    }
    if (best > kNegInf && f.acc + suffix[t] <= best) {
      --t;
      continue;
    }
    bool descended = false;
    while (f.rank < na) {
      const int rank = f.rank++;
      const ActionEntry& e = tables[t].entries[rank];
      if (!e.feasible) continue;
      const int c = f.c + e.dc, d = f.d + e.dd;
      const double soc = grid::soc_of(p, c, d);
      if (soc < -kFeasEps || soc > p.e_max + kFeasEps) continue;
      if (soc < w.lo[t + 1] || soc > w.hi[t + 1]) continue;
      stack[t] = rank;
      frames[t + 1] = {c, d, 0, f.acc + e.profit};
      ++t;
      descended = true;
      break;
    }
    if (!descended) --t;
  }

  if (best == kNegInf) return infeasible_solution(prob, 0);
  return assemble(prob, tables, best_ranks, best);
}

BestResponseSolution solve_method2(const BestResponseProblem& prob) {
  require_valid(prob);
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  const std::vector<HourTable> tables =
      build_tables(prob, Formulation::method2, {});

  if (const int dead = find_dead_hour(tables)) {
    return infeasible_solution(prob, dead);
  }

  // Reachable (charge units, discharge units) lattice per stage.
  struct Node {
    int c, d;
  };
  const int na = grid::action_count(p);
  std::vector<std::vector<Node>> layers(T + 1);
  layers[0].push_back({0, 0});
  {
    std::unordered_set<std::int64_t> seen;
    for (int t = 0; t < T; ++t) {
      seen.clear();
      for (const Node& n : layers[t]) {
        for (int rank = 0; rank < na; ++rank) {
          const ActionEntry& e = tables[t].entries[rank];
          if (!e.feasible) continue;
          const int c = n.c + e.dc, d = n.d + e.dd;
          const double soc = grid::soc_of(p, c, d);
          if (soc < -kFeasEps || soc > p.e_max + kFeasEps) continue;
          if (seen.insert(grid::node_key(c, d)).second) {
            layers[t + 1].push_back({c, d});
          }
        }
      }
    }
  }

  // Value-to-go over the lattice, kept per stage for the path walk. Ranks
  // are scanned in ascending order with a strict improvement rule, so the
  // recovered path is lexicographically smallest among the optima.
  struct Entry {
    double value;
    int best_rank;
  };
  std::vector<std::unordered_map<std::int64_t, Entry>> stage_values(T + 1);
  for (const Node& n : layers[T]) {
    const double soc = grid::soc_of(p, n.c, n.d);
    if (soc >= p.terminal_lo() - kFeasEps && soc <= p.terminal_hi() + kFeasEps) {
      stage_values[T][grid::node_key(n.c, n.d)] = {0.0, -1};
    }
  }
  if (stage_values[T].empty()) return infeasible_solution(prob, 0);
  for (int t = T - 1; t >= 0; --t) {
    for (const Node& n : layers[t]) {
      Entry best{kNegInf, -1};
      for (int rank = 0; rank < na; ++rank) {
        const ActionEntry& e = tables[t].entries[rank];
        if (!e.feasible) continue;
        const auto it = stage_values[t + 1].find(grid::node_key(n.c + e.dc, n.d + e.dd));
        if (it == stage_values[t + 1].end()) continue;
        const double v = e.profit + it->second.value;
        if (v > best.value) best = {v, rank};
      }
      if (best.best_rank >= 0) stage_values[t][grid::node_key(n.c, n.d)] = best;
    }
  }

  const auto root = stage_values[0].find(grid::node_key(0, 0));
  if (root == stage_values[0].end()) return infeasible_solution(prob, 0);

  std::vector<int> ranks(T);
  int c = 0, d = 0;
  for (int t = 0; t < T; ++t) {
    const Entry& en = stage_values[t].at(grid::node_key(c, d));
    ranks[t] = en.best_rank;
    c += tables[t].entries[en.best_rank].dc;
    d += tables[t].entries[en.best_rank].dd;
  }
  return assemble(prob, tables, ranks, root->second.value);
}

BestResponseSolution brute_force_best_response(const BestResponseProblem& prob) {
  require_valid(prob);
  const int T = prob.horizon();
  const StorageParams& p = prob.player;
  const int na = grid::action_count(p);
  double sequences = 1.0;
  for (int t = 0; t < T; ++t) {
    sequences *= na;
    if (sequences > 1e7) {
      throw SolverError("brute force: more than 1e7 action sequences");
    }
  }
  const std::vector<HourTable> tables =
      build_tables(prob, Formulation::cleared, {});
  if (const int dead = find_dead_hour(tables)) {
    return infeasible_solution(prob, dead);
  }

  std::vector<int> stack(T, 0), best_ranks;
  double best = kNegInf;
  struct Frame {
    int c, d, rank;
    long double acc;
  };
  std::vector<Frame> frames(T + 1);
  frames[0] = {0, 0, 0, 0.0L};
  int t = 0;
  while (t >= 0) {
    Frame& f = frames[t];
    if (t == T) {
      const double soc = grid::soc_of(p, f.c, f.d);
      if (soc >= p.terminal_lo() - kFeasEps &&
          soc <= p.terminal_hi() + kFeasEps &&
          static_cast<double>(f.acc) > best) {
        best = static_cast<double>(f.acc);
        best_ranks = stack;
      }
      --t;
      continue;
    }
    bool descended = false;
    while (f.rank < na) {
      const int rank = f.rank++;
      const ActionEntry& e = tables[t].entries[rank];
      if (!e.feasible) continue;
      const int c = f.c + e.dc, d = f.d + e.dd;
      const double soc = grid::soc_of(p, c, d);
      if (soc < -kFeasEps || soc > p.e_max + kFeasEps) continue;
      stack[t] = rank;
      frames[t + 1] = {c, d, 0, f.acc + e.profit};
      ++t;
      descended = true;
      break;
    }
    if (!descended) --t;
  }
  if (best == kNegInf) return infeasible_solution(prob, 0);
  return assemble(prob, tables, best_ranks, best);
}

}  // namespace selfsched
