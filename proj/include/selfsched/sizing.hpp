#pragma once

#include <vector>

#include "selfsched/model.hpp"

namespace selfsched {

// Storage requirement derived from a residual-demand profile: deficits
// grossed up by 1/eta, running cumulative sum, excursion above the running
// minimum, and the resulting energy/power capacities.
struct CapacityRequirement {
  std::vector<double> corrected;   // R'_t
  std::vector<double> cumulative;  // CR_t
  std::vector<double> level;       // X_t = CR_t - min_{i<=t} CR_i
  double e_max = 0.0;              // max_t X_t
  double q_max = 0.0;              // ceil(c_rate * e_max)
};

struct SizingResult {
  std::vector<double> residual;
  CapacityRequirement capacity;
  std::vector<StorageParams> per_player;
};

// R_t = D_t - RES_t.
std::vector<double> residual_demand(const std::vector<double>& demand,
                                    const ResProfile& res);

CapacityRequirement required_capacity(const std::vector<double>& residual,
                                      double eta, double c_rate);

// Splits (e_max, q_max) by the given positive shares (summing to 1 within
// 1e-9). Power gets floor-with-1MW-minimum; energy splits exactly. The
// returned players carry ids 1..n, the given offer-grid size, and default
// eta/oc/alpha/epsilon for the caller to adjust.
std::vector<StorageParams> partition_players(double e_max, double q_max,
                                             const std::vector<double>& shares,
                                             int n_levels);

// Scales every player's energy capacity and power rating by theta >= 0,
// leaving efficiency, cost and the terminal-band parameters unchanged.
// Fractional megawatts from scaling are kept.
std::vector<StorageParams> apply_theta(std::vector<StorageParams> players,
                                       double theta);

}  // namespace selfsched
