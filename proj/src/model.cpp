#include "selfsched/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "selfsched/errors.hpp"

namespace selfsched {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// A quantity matches the offer grid when it equals some level within 1e-9.
bool on_grid(double q, const StorageParams& p) {
  if (q == 0.0) return true;
  for (int i = 1; i <= p.n_levels; ++i) {
    if (std::abs(q - p.offer_level(i)) <= 1e-9) return true;
  }
  return false;
}

}  // namespace

void validate_curve(const DemandCurve& curve, const std::string& where,
                    std::vector<std::string>* out) {
  if (curve.prices.size() != curve.cum_volumes.size()) {
    out->push_back(where + ": price and volume lists differ in length");
    return;
  }
  if (curve.prices.empty()) {
    out->push_back(where + ": curve has no blocks");
    return;
  }
  const int d = curve.block_count();
  if (curve.prices[d - 1] < 0.0) {
    out->push_back(where + ": last block price is negative");
  }
  for (int j = 1; j < d; ++j) {
    if (!(curve.prices[j - 1] > curve.prices[j])) {
      out->push_back(where + ": prices not strictly descending at block " +
                     std::to_string(j + 1));
    }
  }
  if (!(curve.cum_volumes[0] > 0.0)) {
    out->push_back(where + ": first cumulative volume must be positive");
  }
  for (int j = 1; j < d; ++j) {
    if (!(curve.cum_volumes[j] > curve.cum_volumes[j - 1])) {
      out->push_back(where +
                     ": cumulative volumes not strictly ascending at block " +
                     std::to_string(j + 1));
    }
  }
}

std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> v;
  if (s.horizon <= 0) v.push_back("scenario: horizon must be positive");
  if (static_cast<int>(s.curves.size()) != s.horizon) {
    v.push_back("scenario: curve count " + std::to_string(s.curves.size()) +
                " does not match horizon " + std::to_string(s.horizon));
  }
  if (s.res.horizon() != s.horizon) {
    v.push_back("scenario: RES profile length " +
                std::to_string(s.res.horizon()) + " does not match horizon " +
                std::to_string(s.horizon));
  }
  for (std::size_t t = 0; t < s.curves.size(); ++t) {
    validate_curve(s.curves[t], "hour " + std::to_string(t + 1), &v);
    if (!s.curves[t].prices.empty() && s.curves[t].prices[0] > s.price_cap) {
      v.push_back("hour " + std::to_string(t + 1) +
                  ": top price bid exceeds the price cap " + fmt(s.price_cap));
    }
  }
  for (int t = 0; t < s.res.horizon(); ++t) {
    if (s.res.values[t] < 0.0) {
      v.push_back("hour " + std::to_string(t + 1) + ": RES is negative");
    }
  }
  std::set<int> ids;
  for (const StorageParams& p : s.players) {
    const std::string who = "player " + std::to_string(p.player_id);
    if (!ids.insert(p.player_id).second) {
      v.push_back(who + ": duplicate player id");
    }
    if (!(p.q_max > 0.0)) v.push_back(who + ": q_max must be positive");
    if (p.e_max < 0.0) v.push_back(who + ": e_max must be nonnegative");
    if (!(p.eta > 0.0 && p.eta <= 1.0)) v.push_back(who + ": eta out of (0,1]");
    if (p.oc < 0.0) v.push_back(who + ": oc must be nonnegative");
    if (p.alpha_batt < 0.0 || p.alpha_batt > 1.0) {
      v.push_back(who + ": alpha_batt out of [0,1]");
    }
    if (p.epsilon < 0.0) v.push_back(who + ": epsilon must be nonnegative");
    if (p.n_levels < 1) v.push_back(who + ": n_levels must be positive");
  }
  if (s.price_cap <= 0.0) v.push_back("scenario: price cap must be positive");
  if (s.options.tolerance < 0.0) {
    v.push_back("scenario: tolerance must be nonnegative");
  }
  return v;
}

std::vector<double> recompute_soc(const StorageParams& player,
                                  const std::vector<double>& charge,
                                  const std::vector<double>& discharge) {
  std::vector<double> soc(charge.size());
  double e = player.initial_soc();
  for (std::size_t t = 0; t < charge.size(); ++t) {
    e = e + player.eta * charge[t] - discharge[t];
    soc[t] = e;
  }
  return soc;
}

std::vector<std::string> validate_schedule(const Schedule& sched,
                                           const StorageParams& player) {
  std::vector<std::string> v;
  const std::string who = "player " + std::to_string(player.player_id);
  const int T = sched.horizon();
  if (static_cast<int>(sched.discharge.size()) != T ||
      static_cast<int>(sched.soc.size()) != T) {
    v.push_back(who + ": schedule vectors differ in length");
    return v;
  }
  for (int t = 0; t < T; ++t) {
    const std::string at = who + " hour " + std::to_string(t + 1);
    if (sched.charge[t] < 0.0 || sched.discharge[t] < 0.0) {
      v.push_back(at + ": negative quantity");
    }
    if (sched.charge[t] > 0.0 && sched.discharge[t] > 0.0) {
      v.push_back(at + ": charges and discharges in the same hour");
    }
    if (!on_grid(sched.charge[t], player) || !on_grid(sched.discharge[t], player)) {
      v.push_back(at + ": quantity not on the offer grid");
    }
  }
  const std::vector<double> soc = recompute_soc(player, sched.charge, sched.discharge);
  for (int t = 0; t < T; ++t) {
    const std::string at = who + " hour " + std::to_string(t + 1);
    if (std::abs(soc[t] - sched.soc[t]) > 1e-9) {
      v.push_back(at + ": stored SoC does not match the recurrence");
    }
    if (soc[t] < -kFeasEps || soc[t] > player.e_max + kFeasEps) {
      v.push_back(at + ": SoC out of [0, e_max]");
    }
  }
  if (T > 0) {
    if (soc[T - 1] < player.terminal_lo() - kFeasEps ||
        soc[T - 1] > player.terminal_hi() + kFeasEps) {
      v.push_back(who + ": terminal SoC outside the return band");
    }
  }
  if (!sched.actions.empty()) {
    if (static_cast<int>(sched.actions.size()) != T) {
      v.push_back(who + ": action list length mismatch");
    } else {
      for (int t = 0; t < T; ++t) {
        const Action& a = sched.actions[t];
        const std::string at = who + " hour " + std::to_string(t + 1);
        double want_ch = 0.0, want_dis = 0.0;
        if (a.type == ActionType::charge) want_ch = player.offer_level(a.level);
        if (a.type == ActionType::discharge) want_dis = player.offer_level(a.level);
        if (std::abs(want_ch - sched.charge[t]) > 1e-9 ||
            std::abs(want_dis - sched.discharge[t]) > 1e-9) {
          v.push_back(at + ": action record inconsistent with quantities");
        }
      }
    }
  }
  return v;
}

Schedule idle_schedule(const StorageParams& player, int horizon) {
  Schedule s;
  s.charge.assign(horizon, 0.0);
  s.discharge.assign(horizon, 0.0);
  s.soc.assign(horizon, player.initial_soc());
  s.actions.assign(horizon, Action{});
  return s;
}

GameState idle_state(const Scenario& s) {
  GameState g;
  g.schedules.reserve(s.players.size());
  for (const StorageParams& p : s.players) {
    g.schedules.push_back(idle_schedule(p, s.horizon));
  }
  return g;
}

bool same_actions(const GameState& a, const GameState& b) {
  if (a.schedules.size() != b.schedules.size()) return false;
  for (std::size_t p = 0; p < a.schedules.size(); ++p) {
    if (a.schedules[p].actions != b.schedules[p].actions) return false;
  }
  return true;
}

std::vector<double> net_supply(const GameState& state, const ResProfile& res,
                               std::optional<int> split_player) {
  const int T = res.horizon();
  for (const Schedule& s : state.schedules) {
    if (s.horizon() != T) {
      throw DataError("net_supply: schedule horizon does not match RES profile");
    }
  }
  std::vector<double> supply(T);
  const int np = static_cast<int>(state.schedules.size());
  for (int t = 0; t < T; ++t) {
    if (split_player) {
      const int p = *split_player;
      const Schedule& own = state.schedules.at(p);
      double others_ch = 0.0, others_dis = 0.0;
      for (int o = 0; o < np; ++o) {
        if (o == p) continue;
        others_ch += state.schedules[o].charge[t];
        others_dis += state.schedules[o].discharge[t];
      }
      supply[t] = res.values[t] - own.charge[t] + own.discharge[t] -
                  others_ch + others_dis;
    } else {
      double acc = res.values[t];
      for (int p = 0; p < np; ++p) {
        acc += state.schedules[p].discharge[t] - state.schedules[p].charge[t];
      }
      supply[t] = acc;
    }
  }
  return supply;
}

}  // namespace selfsched
