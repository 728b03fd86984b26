#pragma once

#include <string>
#include <utility>
#include <vector>

#include "contest/model.hpp"
#include "contest/solver.hpp"

namespace contest {

// One interval of the state space together with the inequality checked on it
// and the worst (minimum) signed margin found on the sampling grid.  A margin
// of zero sits exactly on the boundary of the requirement; negative means
// violated by that amount.
struct DeviationRegion {
  double lo = 0;
  double hi = 0;
  std::string requirement;
  double margin = 0;
};

struct VerificationReport {
  double max_bellman_residual = 0;
  std::vector<DeviationRegion> deviation_margin_by_region;
  std::vector<std::pair<std::string, bool>> lemma_checks;
  int grid_size = 0;
  double tol = 0;
  bool pass = false;
};

// Max absolute residual of r*V = sum_hazards lambda*(prize - V) - c
//                               + (a_i - a_j)*pi*V' + (a_i + a_j)*sigma^2/2*V''
// over a uniform grid per region (endpoints inset by 1e-10), with both
// players' actions taken from the equilibrium strategy.
double check_bellman(const EquilibriumSolution& sol, const ContestParams& p, int grid_n);

// The four structural invariants of the solution, as named booleans:
//   follower_always_risky      risky on all of (-k*, 0)
//   leader_value_concave       V'' < tol on (0, k*)
//   leader_risky_when_ratio_large   if pi/sigma > sqrt(r+lambda_eff)/2 the
//                                   leader plays risky on all of (0, k*)
//   leader_risky_upper_interval     in the intermediate regime the leader's
//                                   risky set on (0, k*) is exactly [k**, k*)
std::vector<std::pair<std::string, bool>> check_lemmas(const EquilibriumSolution& sol,
                                                       const ContestParams& p, int grid_n,
                                                       double tol);

// Full certification: Bellman residual, the sign of the deviation gain
// D = pi*V' + sigma^2/2*V'' on every region (>= 0 where risky is prescribed,
// <= 0 where safe is), the second-order condition pi*V'' + sigma^2/2*V'''
// where the argument relies on it, indifference |D(k**)| in the intermediate
// regime, and the lemma checks.  pass requires everything within tol.
VerificationReport check_deviations(const EquilibriumSolution& sol, const ContestParams& p,
                                    int grid_n, double tol = 1e-7);

// Convenience wrapper with the default certification grid.
VerificationReport verify(const EquilibriumSolution& sol, const ContestParams& p,
                          int grid_n = 2000, double tol = 1e-7);

}  // namespace contest
