#include <doctest.h>

#include <random>

#include "selfsched/model.hpp"
#include "test_support.hpp"

using namespace selfsched;
using namespace testsupport;

namespace {

Scenario two_player_scenario() {
  std::vector<DemandCurve> curves;
  std::vector<double> res;
  for (int t = 0; t < 24; ++t) {
    curves.push_back(make_curve({50.0, 30.0, 10.0}, {100.0, 200.0, 300.0}, t + 1));
    res.push_back(150.0);
  }
  return make_scenario(std::move(curves), std::move(res),
                       {make_player(1, 10, 40), make_player(2, 20, 80)});
}

}  // namespace

TEST_CASE("well-formed 24-hour two-player scenario validates clean") {
  CHECK(validate_scenario(two_player_scenario()).empty());
}

TEST_CASE("ascending prices in one curve are reported with hour and rule") {
  Scenario s = two_player_scenario();
  s.curves[6].prices = {10.0, 30.0, 50.0};
  const auto v = validate_scenario(s);
  REQUIRE(v.size() == 2);  // two adjacent inversions
  CHECK(v[0].find("hour 7") != std::string::npos);
  CHECK(v[0].find("descending") != std::string::npos);
}

TEST_CASE("eta out of (0,1] is reported") {
  Scenario s = two_player_scenario();
  s.players[1].eta = 1.2;
  const auto v = validate_scenario(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("player 2") != std::string::npos);
  CHECK(v[0].find("eta out of (0,1]") != std::string::npos);
}

TEST_CASE("net_supply equals RES under all-idle schedules") {
  const Scenario s = two_player_scenario();
  const auto supply = net_supply(idle_state(s), s.res);
  for (int t = 0; t < s.horizon; ++t) CHECK(supply[t] == s.res.values[t]);
}

TEST_CASE("net_supply subtracts charges and adds discharges") {
  ResProfile res{{100.0}};
  GameState g;
  g.schedules.push_back(Schedule{{30.0}, {0.0}, {0.0}, {}});
  CHECK(net_supply(g, res)[0] == doctest::Approx(70.0));

  GameState duo;
  duo.schedules.push_back(Schedule{{0.0}, {20.0}, {0.0}, {}});
  duo.schedules.push_back(Schedule{{50.0}, {0.0}, {0.0}, {}});
  // Independent summation: 100 + 20 - 50.
  CHECK(net_supply(duo, res)[0] == doctest::Approx(70.0));
}

TEST_CASE("net_supply is invariant to the splitting player") {
  std::mt19937 rng(7);
  ResProfile res{{100.0, 55.25, 210.5}};
  GameState g;
  for (int p = 0; p < 3; ++p) {
    Schedule s;
    for (int t = 0; t < 3; ++t) {
      const bool ch = rint(rng, 0, 1) == 0;
      s.charge.push_back(ch ? quarter(rng, 0, 40) : 0.0);
      s.discharge.push_back(ch ? 0.0 : quarter(rng, 0, 40));
      s.soc.push_back(0.0);
    }
    g.schedules.push_back(std::move(s));
  }
  const auto base = net_supply(g, res);
  for (int p = 0; p < 3; ++p) {
    const auto split = net_supply(g, res, p);
    for (int t = 0; t < 3; ++t) CHECK(split[t] == doctest::Approx(base[t]).epsilon(1e-12));
  }
}

TEST_CASE("net_supply rejects horizon mismatches") {
  ResProfile res{{100.0, 50.0}};
  GameState g;
  g.schedules.push_back(Schedule{{0.0}, {0.0}, {0.0}, {}});
  CHECK_THROWS_AS(net_supply(g, res), DataError);
}

TEST_CASE("recomputing SoC reproduces a valid schedule exactly") {
  const StorageParams p = make_player(1, 10, 40, 0.9, 0.5, 2);
  Schedule s;
  s.charge = {5.0, 10.0, 0.0, 0.0};
  s.discharge = {0.0, 0.0, 0.0, 5.0};
  s.soc = recompute_soc(p, s.charge, s.discharge);
  s.actions = {Action{ActionType::charge, 1}, Action{ActionType::charge, 2},
               Action{}, Action{ActionType::discharge, 1}};
  CHECK(s.soc[0] == doctest::Approx(20.0 + 4.5));
  CHECK(validate_schedule(s, p).empty());

  SUBCASE("tampered SoC is caught") {
    s.soc[2] += 1e-6;
    const auto v = validate_schedule(s, p);
    REQUIRE(!v.empty());
    CHECK(v[0].find("recurrence") != std::string::npos);
  }
  SUBCASE("off-grid quantity is caught") {
    s.charge[2] = 3.3;
    const auto v = validate_schedule(s, p);
    CHECK(!v.empty());
  }
  SUBCASE("simultaneous charge and discharge is caught") {
    s.discharge[0] = 5.0;
    const auto v = validate_schedule(s, p);
    CHECK(!v.empty());
  }
}

TEST_CASE("every engine schedule quantity is a grid multiple") {
  std::mt19937 rng(11);
  for (int it = 0; it < 50; ++it) {
    const BestResponseProblem prob = random_problem(rng);
    const BestResponseSolution sol = solve_method2(prob);
    if (sol.status != SolveStatus::optimal) continue;
    const double unit = prob.player.q_max / prob.player.n_levels;
    for (int t = 0; t < prob.horizon(); ++t) {
      for (double q : {sol.schedule.charge[t], sol.schedule.discharge[t]}) {
        if (q == 0.0) continue;
        const double ratio = q / unit;
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
      }
    }
  }
}

TEST_CASE("idle state satisfies the terminal band by construction") {
  const Scenario s = two_player_scenario();
  const GameState g = idle_state(s);
  for (std::size_t p = 0; p < s.players.size(); ++p) {
    CHECK(validate_schedule(g.schedules[p], s.players[p]).empty());
  }
}
