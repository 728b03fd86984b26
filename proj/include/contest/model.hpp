#pragma once

#include <string>

namespace contest {

// Primitives of a two-player contest with stochastic progress.
//
// Two agents accumulate progress; the payoff-relevant state is the gap
// dk = k_i - k_j.  Each instant an agent chooses the safe move (drift 0,
// no noise) or the risky move (drift bonus pi, volatility sigma) and pays
// flow cost c.  Success arrives at Poisson rate hazard_lead for the agent
// ahead and hazard_follow for the agent behind; the winner receives
// prize_win, the loser prize_lose, both discounted at rate r.
struct ContestParams {
  double r;              // discount rate, > 0
  double c;              // effort flow cost, > 0
  double prize_win;      // winner prize, >= prize_lose
  double prize_lose;     // loser prize, >= 0
  double hazard_lead;    // leader success rate, > hazard_follow
  double hazard_follow;  // follower success rate, >= 0
  double pi;             // risky-move drift bonus (may be negative)
  double sigma;          // risky-move volatility, > 0
};

enum class RegimeKind { Low, Medium, High };

// Return regime of the risky move.  Low iff pi <= 0; High iff
// pi/sigma >= threshold (ties classify High); Medium otherwise.
struct Regime {
  RegimeKind kind;
  double threshold;  // (sqrt(r + hazard_lead + hazard_follow)/2) * f(phi)
  double ratio;      // pi / sigma
};

// Field-level checks only (positivity, ordering, finiteness).
void validate_fields(const ContestParams& p);

// Field checks plus the effective-profit condition phi > 1.
// Throws InfiniteProfitability when the profitability denominator is <= 0
// and ValidationError when the denominator is positive but phi <= 1.
void validate(const ContestParams& p);

// Generalized profitability
//   phi = (hazard_lead - hazard_follow)*(prize_win - prize_lose)
//         / (c - (hazard_follow*prize_win + hazard_lead*prize_lose)).
// Reduces to hazard_lead*prize_win/c in the baseline (hazard_follow = 0,
// prize_lose = 0).  Throws InfiniteProfitability when the denominator <= 0.
double profitability(const ContestParams& p);

// f(phi) = sqrt(2*phi*(sqrt(phi^2+8)+phi) - 8) / (sqrt(phi^2+8)+phi),
// strictly increasing from f(1) = 0 toward 1.  Requires phi >= 1.
double f_of_phi(double phi);

// Classify the return regime of the risky move.
Regime classify(const ContestParams& p);

// Combined hazard hazard_lead + hazard_follow.
double lambda_eff(const ContestParams& p);

// Leader-region Bellman constant
//   (hazard_lead*prize_win + hazard_follow*prize_lose - c) / (r + lambda_eff).
double lead_const(const ContestParams& p);

// Follower-region Bellman constant
//   (hazard_follow*prize_win + hazard_lead*prize_lose - c) / (r + lambda_eff).
double follow_const(const ContestParams& p);

const char* regime_name(RegimeKind kind);

}  // namespace contest
