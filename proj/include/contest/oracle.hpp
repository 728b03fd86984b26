#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contest/model.hpp"

namespace contest {

struct GridSpec {
  double dk_step = 0.005;   // state grid spacing h
  double dt = 0;            // period length; must satisfy the stability bound
  double k_max = 2.5;       // state truncation (choose >= 3x the expected stop)
  long max_iter = 20000000; // sweep budget
  double tol = 1e-11;       // sup-norm stopping tolerance (also the tie slack)
};

enum class GridAction : std::int8_t { Drop = 0, Safe = 1, Risky = 2 };

struct OracleResult {
  GridSpec spec;
  std::vector<double> grid;           // node positions, staggered around 0
  std::vector<double> value_on_grid;
  std::vector<GridAction> policy;
  double k_star_est = 0;              // +inf when no follower node drops
  std::optional<double> k_star_star_est;
  double absorb_lo = 0;               // value held at the -k_max boundary
  double absorb_hi = 0;               // value held at the +k_max boundary
  long iterations = 0;
  double sup_change = 0;
};

// Discrete-time best-response value iteration on a trinomial gap chain.
// Completely independent of the closed forms: only the flow payoffs, the
// absorbing continuation constant, and the stability bound enter.
OracleResult solve_grid_mpe(const ContestParams& p, const GridSpec& spec);

// Linear interpolation of the converged grid values; the truncation
// boundaries act as virtual nodes holding the absorbing constants.
double grid_value_at(const OracleResult& result, double dk);

const char* grid_action_name(GridAction a);

// CSV dump with columns dk,value,policy.
void write_oracle_csv(const OracleResult& result, const std::string& path);

}  // namespace contest
