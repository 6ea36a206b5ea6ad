#pragma once

#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

// Per-hour clearing payload. Identical shape to the mechanical part of
// MarketOutcome; surpluses are attached by hourly_metrics.
struct ClearingResult {
  double price = 0.0;
  int active_block = 1;
  double served = 0.0;
  double partial_fill = 0.0;
  double curtailment = 0.0;
  double unmet = 0.0;
};

// Uniform-price clearing of one hour. The active block j* is the unique j
// with vol_{j-1} < supply <= vol_j (half-open; supply = 0 clears in block 1).
// Supply beyond the curve's maximum volume clears in the last block at the
// floor price, with the excess reported as curtailment.
ClearingResult clear_hour(const DemandCurve& curve, double supply);

// Block-difference consumer surplus: sum over blocks strictly above the
// active one of (pr_k - price) * block width.
double consumer_surplus(const DemandCurve& curve, const ClearingResult& r);

// Telescoped form: sum_{k=1}^{D-1} (pr_k - pr_{k+1}) * vol_k over blocks
// strictly above the active one. Agrees with consumer_surplus within 1e-9.
double consumer_surplus_telescoped(const DemandCurve& curve, int active_block);

// Producer surplus of one hour: storage profits at the uniform price plus
// revenue of the delivered (non-curtailed) renewable output.
double producer_surplus(const ClearingResult& r,
                        const std::vector<double>& charge,
                        const std::vector<double>& discharge,
                        const std::vector<double>& ocs, double res_t);

// Clears every hour at supply = net_supply(state, res) and attaches both
// surpluses.
std::vector<MarketOutcome> hourly_metrics(const GameState& state,
                                          const Scenario& scenario);

struct MetricsTotals {
  double unmet = 0.0;
  double curtailment = 0.0;
  double cs = 0.0;
  double ps = 0.0;
  double sw = 0.0;  // cs + ps
};

MetricsTotals totals(const std::vector<MarketOutcome>& outcomes);

// Per-player day profits sum_t dis*(price - oc) - ch*(price + oc) at the
// cleared prices.
std::vector<double> player_profits(const GameState& state,
                                   const Scenario& scenario,
                                   const std::vector<MarketOutcome>& outcomes);

}  // namespace selfsched
