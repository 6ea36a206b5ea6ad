#include "selfsched/clearing.hpp"

#include <algorithm>
#include <cmath>

#include "selfsched/errors.hpp"

namespace selfsched {

ClearingResult clear_hour(const DemandCurve& curve, double supply) {
  std::vector<std::string> v;
  validate_curve(curve, "curve", &v);
  if (!v.empty()) throw DataError("clear_hour: " + v.front());
  if (supply < 0.0) throw DataError("clear_hour: negative supply");

  const int d = curve.block_count();
  ClearingResult r;
  if (supply > curve.max_volume()) {
    r.active_block = d;
    r.price = curve.price(d);
    r.served = curve.max_volume();
    r.partial_fill = curve.block_width(d);
    r.curtailment = supply - curve.max_volume();
    r.unmet = 0.0;
    return r;
  }
  // First block whose cumulative volume reaches the supply.
  const auto it = std::lower_bound(curve.cum_volumes.begin(),
                                   curve.cum_volumes.end(), supply);
  const int j = static_cast<int>(it - curve.cum_volumes.begin()) + 1;
  r.active_block = j;
  r.price = curve.price(j);
  r.served = supply;
  r.partial_fill = supply - curve.block_floor(j);
  r.curtailment = 0.0;
  r.unmet = curve.max_volume() - supply;
  return r;
}

double consumer_surplus(const DemandCurve& curve, const ClearingResult& r) {
  const int d = curve.block_count();
  if (r.active_block < 1 || r.active_block > d) {
    throw DataError("consumer_surplus: active block outside the curve");
  }
  if (std::abs(curve.price(r.active_block) - r.price) > 1e-9) {
    throw DataError("consumer_surplus: result price does not match the curve");
  }
  long double cs = 0.0L;
  for (int k = 1; k < r.active_block; ++k) {
    cs += static_cast<long double>(curve.price(k) - r.price) *
          curve.block_width(k);
  }
  return static_cast<double>(cs);
}

double consumer_surplus_telescoped(const DemandCurve& curve, int active_block) {
  const int d = curve.block_count();
  if (active_block < 1 || active_block > d) {
    throw DataError("consumer_surplus_telescoped: active block outside the curve");
  }
  long double cs = 0.0L;
  for (int k = 1; k <= d - 1; ++k) {
    const int y = k < active_block ? 1 : 0;
    if (y) {
      cs += static_cast<long double>(curve.price(k) - curve.price(k + 1)) *
            curve.cum_volume(k);
    }
  }
  return static_cast<double>(cs);
}

double producer_surplus(const ClearingResult& r,
                        const std::vector<double>& charge,
                        const std::vector<double>& discharge,
                        const std::vector<double>& ocs, double res_t) {
  if (charge.size() != discharge.size() || charge.size() != ocs.size()) {
    throw DataError("producer_surplus: player vectors differ in length");
  }
  long double ps = 0.0L;
  for (std::size_t p = 0; p < charge.size(); ++p) {
    ps += discharge[p] * (r.price - ocs[p]) - charge[p] * (r.price + ocs[p]);
  }
  // Curtailed renewable output earns nothing.
  ps += r.price * (res_t - r.curtailment);
  return static_cast<double>(ps);
}

std::vector<MarketOutcome> hourly_metrics(const GameState& state,
                                          const Scenario& scenario) {
  const int T = scenario.horizon;
  const std::vector<double> supply = net_supply(state, scenario.res);
  std::vector<double> ocs;
  ocs.reserve(scenario.players.size());
  for (const StorageParams& p : scenario.players) ocs.push_back(p.oc);

  std::vector<MarketOutcome> out(T);
  std::vector<double> ch(state.schedules.size()), dis(state.schedules.size());
  for (int t = 0; t < T; ++t) {
    if (supply[t] < -kFeasEps) {
      throw DataError("hourly_metrics: negative market supply at hour " +
                      std::to_string(t + 1));
    }
    const ClearingResult r = clear_hour(scenario.curves[t], std::max(supply[t], 0.0));
    for (std::size_t p = 0; p < state.schedules.size(); ++p) {
      ch[p] = state.schedules[p].charge[t];
      dis[p] = state.schedules[p].discharge[t];
    }
    MarketOutcome& m = out[t];
    m.price = r.price;
    m.active_block = r.active_block;
    m.served = r.served;
    m.partial_fill = r.partial_fill;
    m.curtailment = r.curtailment;
    m.unmet = r.unmet;
    m.consumer_surplus = consumer_surplus(scenario.curves[t], r);
    m.producer_surplus = producer_surplus(r, ch, dis, ocs, scenario.res.values[t]);
  }
  return out;
}

MetricsTotals totals(const std::vector<MarketOutcome>& outcomes) {
  MetricsTotals tot;
  for (const MarketOutcome& m : outcomes) {
    tot.unmet += m.unmet;
    tot.curtailment += m.curtailment;
    tot.cs += m.consumer_surplus;
    tot.ps += m.producer_surplus;
  }
  tot.sw = tot.cs + tot.ps;
  return tot;
}

std::vector<double> player_profits(const GameState& state,
                                   const Scenario& scenario,
                                   const std::vector<MarketOutcome>& outcomes) {
  std::vector<double> profits(state.schedules.size(), 0.0);
  for (std::size_t p = 0; p < state.schedules.size(); ++p) {
    const Schedule& s = state.schedules[p];
    const double oc = scenario.players[p].oc;
    long double acc = 0.0L;
    for (int t = 0; t < scenario.horizon; ++t) {
      acc += s.discharge[t] * (outcomes[t].price - oc) -
             s.charge[t] * (outcomes[t].price + oc);
    }
    profits[p] = static_cast<double>(acc);
  }
  return profits;
}

}  // namespace selfsched
