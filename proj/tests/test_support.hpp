#pragma once

// Shared builders and randomized-instance generators for the test suites.
// Generators keep every market quantity on a 0.25 grid so block-boundary
// comparisons are exact in binary floating point.

#include <random>
#include <vector>

#include "selfsched/best_response.hpp"
#include "selfsched/model.hpp"

namespace testsupport {

using namespace selfsched;

inline DemandCurve make_curve(std::vector<double> prices,
                              std::vector<double> vols, int hour = 1) {
  DemandCurve c;
  c.hour = hour;
  c.prices = std::move(prices);
  c.cum_volumes = std::move(vols);
  return c;
}

inline StorageParams make_player(int id, double q_max, double e_max,
                                 double eta = 1.0, double oc = 0.0,
                                 int n_levels = 1, double alpha = 0.5,
                                 double epsilon = 0.05) {
  StorageParams p;
  p.player_id = id;
  p.q_max = q_max;
  p.e_max = e_max;
  p.eta = eta;
  p.oc = oc;
  p.n_levels = n_levels;
  p.alpha_batt = alpha;
  p.epsilon = epsilon;
  return p;
}

inline int rint(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double quarter(std::mt19937& rng, int lo_quarters, int hi_quarters) {
  return 0.25 * rint(rng, lo_quarters, hi_quarters);
}

inline DemandCurve random_curve(std::mt19937& rng, int max_blocks = 4,
                                int hour = 1) {
  const int d = rint(rng, 1, max_blocks);
  std::vector<double> prices(d), vols(d);
  double price = quarter(rng, 0, 40);  // floor price in [0, 10]
  for (int j = d - 1; j >= 0; --j) {
    prices[j] = price;
    price += quarter(rng, 1, 120);  // strict ascent toward the cap
  }
  double vol = 0.0;
  for (int j = 0; j < d; ++j) {
    vol += quarter(rng, 1, 300);  // strict ascent, blocks up to 75 MWh
    vols[j] = vol;
  }
  return make_curve(std::move(prices), std::move(vols), hour);
}

inline StorageParams random_player(std::mt19937& rng, int id = 1,
                                   int max_levels = 3) {
  const int n = rint(rng, 1, max_levels);
  const double unit = quarter(rng, 1, 40);  // grid step in [0.25, 10]
  static const double etas[] = {1.0, 0.9, 0.8, 0.5};
  static const double ocs[] = {0.0, 0.25, 0.5, 1.0, 2.0};
  static const double alphas[] = {0.0, 0.25, 0.5, 1.0};
  static const double epsilons[] = {0.05, 0.25, 1.0};
  StorageParams p = make_player(id, unit * n,
                                unit * rint(rng, 0, 3 * n),
                                etas[rint(rng, 0, 3)], ocs[rint(rng, 0, 4)], n,
                                alphas[rint(rng, 0, 3)],
                                epsilons[rint(rng, 0, 2)]);
  return p;
}

// A feasible one-player problem: the idle action always clears (exogenous
// supply never negative) and idle satisfies the terminal band.
inline BestResponseProblem random_problem(std::mt19937& rng, int max_horizon = 6,
                                          int max_levels = 3, int max_blocks = 4) {
  BestResponseProblem prob;
  const int T = rint(rng, 1, max_horizon);
  prob.player = random_player(rng, 1, max_levels);
  prob.curves.reserve(T);
  prob.res.values.resize(T);
  prob.exo_charge.resize(T);
  prob.exo_discharge.resize(T);
  for (int t = 0; t < T; ++t) {
    prob.curves.push_back(random_curve(rng, max_blocks, t + 1));
    prob.res.values[t] = quarter(rng, 0, 400);
    prob.exo_discharge[t] = quarter(rng, 0, 80);
    const double cap = prob.res.values[t] + prob.exo_discharge[t];
    prob.exo_charge[t] = std::min(cap, quarter(rng, 0, 200));
  }
  prob.big_m = default_big_m(prob);
  return prob;
}

inline Scenario make_scenario(std::vector<DemandCurve> curves,
                              std::vector<double> res,
                              std::vector<StorageParams> players) {
  Scenario s;
  s.horizon = static_cast<int>(curves.size());
  s.curves = std::move(curves);
  s.res.values = std::move(res);
  s.players = std::move(players);
  return s;
}

}  // namespace testsupport
