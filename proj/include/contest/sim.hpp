#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contest/model.hpp"
#include "contest/solver.hpp"

namespace contest {

// Monte Carlo configuration.  Paths are split into fixed-size chunks with
// per-path RNG substreams derived from (seed, path index), so results are
// bit-identical for any n_threads.
struct SimConfig {
  long n_paths = 100000;
  double dt = 1e-3;
  double k0 = 0.0;            // initial gap, strictly inside the continuation region
  std::uint64_t seed = 12345;
  double horizon_cap = 1e4;   // paths longer than this are censored, not fatal
  std::vector<double> laplace_thetas;  // empty -> {hazard_lead, hazard_lead + 0.05}
  int n_threads = 0;          // 0 -> hardware concurrency
  std::string trace_path;     // non-empty -> CSV trace of path 0
  long trace_max_rows = 10000;
};

struct LaplaceEstimate {
  double theta;
  double estimate;   // mean of e^{-theta * tau}, tau = first gap exit time
  double std_error;
};

// Player-i estimators with standard errors.  Success and follower times
// include censored paths at the horizon cap.
struct SimResult {
  long n_paths;
  double dt;
  double k0;
  std::uint64_t seed;
  double mean_discounted_payoff;
  double payoff_std_error;
  double win_prob;
  double win_prob_std_error;
  double win_prob_opponent;
  double mean_success_time;
  double success_time_std_error;
  double mean_follower_time;
  double follower_time_std_error;
  std::vector<LaplaceEstimate> laplace_at;
  long horizon_cap_hits;
};

// Simulate the contest under a pair of stationary strategies.  Each step:
// success fires with probability 1 - e^{-(lambda_i + lambda_j) dt} on the
// pre-step state (winner proportional to state hazards); otherwise the gap
// takes an Euler step with drift (a_i - a_j) pi and volatility
// sqrt(a_i + a_j) sigma; the follower drops at the first grid time with the
// gap beyond its stopping boundary, after which the solo phase is sampled
// exactly (success time Exp(hazard_lead), payoffs in closed form).
SimResult simulate(const ContestParams& p, const Strategy& strat_i, const Strategy& strat_j,
                   const SimConfig& cfg);

// Equilibrium convenience overload: both agents play sol's strategy.
SimResult simulate(const ContestParams& p, const EquilibriumSolution& sol, const SimConfig& cfg);

// Laplace transform E[e^{-theta tau}] of the first time |gap| reaches
// k_star when |gap| is reflected Brownian motion started at k0 with outward
// drift drift_mag >= 0 and volatility sigma:
//   q = sqrt(drift_mag^2 + 2 theta sigma^2),
//   Psi = e^{drift_mag (k_star - k0)/sigma^2}
//         * [q cosh(k0 q/sigma^2) + drift_mag sinh(k0 q/sigma^2)]
//         / [q cosh(k_star q/sigma^2) + drift_mag sinh(k_star q/sigma^2)],
// evaluated in overflow-safe exponential form.
double laplace_psi_analytic(double theta, double k_star, double k0, double drift_mag,
                            double sigma);

struct ExpectedTimes {
  double follower_time;  // mean time until the follower exits or success ends the race
  double success_time;   // mean time until someone succeeds
};

// Closed-form expected times for the single-risky gap process (pi <= 0):
//   follower_time = (1 - Psi(hazard_lead + hazard_follow)) / (hazard_lead + hazard_follow)
//   success_time  = follower_time + Psi(hazard_lead) / hazard_lead.
ExpectedTimes expected_times(const ContestParams& p, double k_star, double k0);

}  // namespace contest
