#pragma once

#include <stdexcept>
#include <string>

namespace selfsched {

// Error categories map onto CLI exit codes: ConfigError -> 2, DataError -> 3,
// SolverError -> 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A best response (or planner solve) with no feasible schedule. hour is
// 1-based when a single offending hour is known, 0 otherwise (e.g. the
// terminal band is unreachable as a whole).
class InfeasibleError : public SolverError {
 public:
  InfeasibleError(int player_id, int hour, const std::string& what)
      : SolverError(what), player_id(player_id), hour(hour) {}

  int player_id = 0;
  int hour = 0;
};

}  // namespace selfsched
