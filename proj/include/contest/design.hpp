#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contest/model.hpp"

namespace contest {

// A designer splits a fixed prize budget between winner and loser to speed
// up the contest.  Maintained assumption: hazard_lead * budget > cost >
// hazard_follow * budget.
struct DesignProblem {
  double budget;
  double hazard_lead;
  double hazard_follow;
  double cost;
  double r;
  double pi;
  double sigma;
  double k0 = 0.0;  // gap at which the objectives are evaluated
};

struct PrizeAllocation {
  double prize_win;
  double prize_lose;
  // Admissible open interval for the split offset, present in the
  // near-equal-split case only.
  std::optional<std::pair<double, double>> epsilon_interval;
  std::optional<double> epsilon;  // canonical choice: midpoint of the interval
  double phi_bar;                 // +infinity in the near-equal-split case
  std::string case_label;         // "winner-takes-all" | "near-equal-split"
};

// The budget-optimal prize split.  Small budget ((hl+hf)B/2 < c): the whole
// budget goes to the winner and the profitability ratio stays finite.  Large
// budget: near-equal prizes (B/2 +- eps) push the profitability denominator
// below zero, so the follower never drops out.  Exact equality is rejected
// as KnifeEdge; a violated maintained assumption as AssumptionViolated.
PrizeAllocation optimize_prizes(const DesignProblem& prob);

struct DesignObjectives {
  bool infinite_continuation;   // follower never drops (phi_bar infinite)
  std::optional<double> k_star; // absent when infinite_continuation
  double follower_time;
  double success_time;
};

// Equilibrium objectives under an allocation: solves the contest with the
// given prizes; expected times in closed form in the single-risky (pi <= 0)
// regime and by simulation otherwise.  With infinite continuation both
// times are the no-dropout limit 1/(hazard_lead + hazard_follow).
DesignObjectives objective_values(const DesignProblem& prob, const PrizeAllocation& alloc);

struct EquivalenceRow {
  double prize_win, prize_lose, phi_bar;
  double k_star, follower_time, success_time;
};

// Ranking agreement across allocations: larger k*, longer follower time,
// and shorter success time must order the allocations identically.
struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;  // input order
  std::vector<std::size_t> rank_by_k_star;         // descending
  std::vector<std::size_t> rank_by_follower_time;  // descending
  std::vector<std::size_t> rank_by_success_time;   // ascending
  bool consistent;
};

// Requires at least two allocations, all with finite phi_bar.
EquivalenceReport check_objective_equivalence(const DesignProblem& prob,
                                              const std::vector<PrizeAllocation>& allocations);

// ContestParams for a problem/allocation pair.
ContestParams design_params(const DesignProblem& prob, double prize_win, double prize_lose);

}  // namespace contest
