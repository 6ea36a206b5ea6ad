#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace selfsched {

// Quantities are MWh per hourly step (MW and MWh coincide at a 1 h step).
// Prices are EUR/MWh, money is EUR, all arithmetic is double precision.

// Feasibility slack for state-of-charge bounds, terminal bands and the
// non-negative-supply floor.
inline constexpr double kFeasEps = 1e-9;

// One hour's demand curve: an ordered list of price blocks. Prices are
// strictly descending, cumulative volumes strictly ascending. Block j
// (1-based) covers the supply interval (cum_volumes[j-2], cum_volumes[j-1]],
// with block 1 starting at 0.
struct DemandCurve {
  int hour = 0;  // 1-based hour of day, informational
  std::vector<double> prices;
  std::vector<double> cum_volumes;

  int block_count() const { return static_cast<int>(prices.size()); }
  double max_volume() const { return cum_volumes.back(); }
  double price(int j) const { return prices[j - 1]; }             // 1-based
  double cum_volume(int j) const { return cum_volumes[j - 1]; }   // 1-based
  // Cumulative volume of all blocks strictly above j (0 for block 1).
  double block_floor(int j) const { return j <= 1 ? 0.0 : cum_volumes[j - 2]; }
  double block_width(int j) const { return cum_volumes[j - 1] - block_floor(j); }
};

// Hourly renewable generation, MWh.
struct ResProfile {
  std::vector<double> values;

  int horizon() const { return static_cast<int>(values.size()); }
};

// Physical and economic parameters of one storage player. The offer grid is
// the N equally spaced levels i*q_max/n_levels, i = 1..n_levels, used for
// both charging and discharging.
struct StorageParams {
  int player_id = 0;
  double q_max = 0.0;       // max charge/discharge rate, MW
  double e_max = 0.0;       // energy capacity, MWh
  double eta = 1.0;         // charging efficiency, (0, 1]
  double oc = 0.0;          // operating cost, EUR/MWh moved
  double alpha_batt = 0.5;  // initial state of charge as a fraction of e_max
  double epsilon = 0.05;    // terminal band half-width ratio
  int n_levels = 1;

  double offer_level(int i) const { return q_max / n_levels * i; }  // i in 1..n_levels
  double initial_soc() const { return alpha_batt * e_max; }
  double terminal_lo() const { return alpha_batt * e_max * (1.0 - epsilon); }
  double terminal_hi() const { return alpha_batt * e_max * (1.0 + epsilon); }
};

enum class ActionType : int { idle = 0, charge = 1, discharge = 2 };

// One hour's discrete decision: idle, or charge/discharge at grid level
// `level` (1-based). Ordering for tie-breaks is idle < charge levels <
// discharge levels, lower level first.
struct Action {
  ActionType type = ActionType::idle;
  int level = 0;

  // Position in the tie-break order; n_levels is the owner's grid size.
  int rank(int n_levels) const {
    switch (type) {
      case ActionType::idle: return 0;
      case ActionType::charge: return level;
      case ActionType::discharge: return n_levels + level;
    }
    return 0;
  }

  friend bool operator==(const Action&, const Action&) = default;
};

// One player's day schedule. charge/discharge are the market quantities
// (MWh); soc is the end-of-hour battery level; actions are the discrete
// choices behind the quantities.
struct Schedule {
  std::vector<double> charge;
  std::vector<double> discharge;
  std::vector<double> soc;
  std::vector<Action> actions;

  int horizon() const { return static_cast<int>(charge.size()); }
};

// The joint system state of the game: one schedule per player, aligned with
// Scenario::players.
struct GameState {
  std::vector<Schedule> schedules;
};

// Market outcome of a single hour.
struct MarketOutcome {
  double price = 0.0;
  int active_block = 1;       // 1-based index of the cleared block
  double served = 0.0;        // MWh actually delivered to demand
  double partial_fill = 0.0;  // portion of the active block that is served
  double curtailment = 0.0;   // supply beyond the curve's maximum volume
  double unmet = 0.0;         // demand volume left unserved
  double consumer_surplus = 0.0;
  double producer_surplus = 0.0;
};

enum class UpdateOrder { ascending_id, descending_id };

struct SolverOptions {
  double tolerance = 1e-6;  // EUR, equilibrium certification slack
  int max_sweeps = 100;     // diagonalization sweep cap
  UpdateOrder update_order = UpdateOrder::ascending_id;
};

// A full game instance.
struct Scenario {
  int horizon = 24;
  std::vector<DemandCurve> curves;
  ResProfile res;
  std::vector<StorageParams> players;
  double price_cap = 4000.0;
  SolverOptions options;
};

// Returns every violated invariant with its location; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

// Curve-only checks, reported with the given label (e.g. "hour 7").
void validate_curve(const DemandCurve& curve, const std::string& where,
                    std::vector<std::string>* out);

// Schedule invariants against its owner's parameters: grid-multiple
// quantities, single action per hour, SoC recurrence and bounds, terminal
// band, action/quantity consistency.
std::vector<std::string> validate_schedule(const Schedule& sched,
                                           const StorageParams& player);

// SoC trajectory implied by charge/discharge via e_1 = alpha*E + eta*ch_1 -
// dis_1, e_t = e_{t-1} + eta*ch_t - dis_t.
std::vector<double> recompute_soc(const StorageParams& player,
                                  const std::vector<double>& charge,
                                  const std::vector<double>& discharge);

// All-idle schedule with a flat SoC trajectory at the initial level.
Schedule idle_schedule(const StorageParams& player, int horizon);

GameState idle_state(const Scenario& s);

// True when both states carry identical discrete action sequences.
bool same_actions(const GameState& a, const GameState& b);

// Hourly market supply RES_t + sum_p (dis_p - ch_p). When `split_player` is
// given, own and rival terms are accumulated separately (the Eq.-style own /
// other decomposition); the total is the same.
std::vector<double> net_supply(const GameState& state, const ResProfile& res,
                               std::optional<int> split_player = std::nullopt);

}  // namespace selfsched
