#include "selfsched/sizing.hpp"

#include <algorithm>
#include <cmath>

#include "selfsched/errors.hpp"

namespace selfsched {

std::vector<double> residual_demand(const std::vector<double>& demand,
                                    const ResProfile& res) {
  if (static_cast<int>(demand.size()) != res.horizon()) {
    throw DataError("residual_demand: demand and RES lengths differ");
  }
  std::vector<double> r(demand.size());
  for (std::size_t t = 0; t < demand.size(); ++t) {
    r[t] = demand[t] - res.values[t];
  }
  return r;
}

CapacityRequirement required_capacity(const std::vector<double>& residual,
                                      double eta, double c_rate) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DataError("required_capacity: eta out of (0,1]");
  }
  if (!(c_rate > 0.0)) {
    throw DataError("required_capacity: c_rate must be positive");
  }
  CapacityRequirement out;
  const std::size_t T = residual.size();
  out.corrected.resize(T);
  out.cumulative.resize(T);
  out.level.resize(T);
  double running = 0.0, running_min = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    out.corrected[t] = residual[t] > 0.0 ? residual[t] / eta : residual[t];
    running += out.corrected[t];
    out.cumulative[t] = running;
    running_min = t == 0 ? running : std::min(running_min, running);
    out.level[t] = running - running_min;
    out.e_max = std::max(out.e_max, out.level[t]);
  }
  out.q_max = std::ceil(c_rate * out.e_max - 1e-9);
  return out;
}

std::vector<StorageParams> partition_players(double e_max, double q_max,
                                             const std::vector<double>& shares,
                                             int n_levels) {
  if (shares.empty()) throw DataError("partition_players: no shares given");
  double sum = 0.0;
  for (double w : shares) {
    if (!(w > 0.0)) throw DataError("partition_players: shares must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("partition_players: shares do not sum to 1");
  }
  if (n_levels < 1) throw DataError("partition_players: n_levels must be positive");

  std::vector<StorageParams> players(shares.size());
  for (std::size_t p = 0; p < shares.size(); ++p) {
    StorageParams& sp = players[p];
    sp.player_id = static_cast<int>(p) + 1;
    sp.e_max = shares[p] * e_max;
    // At least 1 MW of power for any positive share.
    sp.q_max = std::max(1.0, std::floor(shares[p] * q_max + 1e-9));
    sp.n_levels = n_levels;
  }
  return players;
}

std::vector<StorageParams> apply_theta(std::vector<StorageParams> players,
                                       double theta) {
  if (theta < 0.0) throw DataError("apply_theta: theta must be nonnegative");
  for (StorageParams& p : players) {
    p.e_max *= theta;
    p.q_max *= theta;
  }
  return players;
}

}  // namespace selfsched
