#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contest/model.hpp"
#include "contest/valuefn.hpp"

namespace contest {

// Symmetric Markov perfect equilibrium of the contest: the follower drops
// out when the gap reaches -k_star; in the Medium regime the leader
// switches to the risky move at k_star_star.
struct EquilibriumSolution {
  Regime regime;
  double k_star;                      // stopping boundary, > 0
  std::optional<double> k_star_star;  // switching point, present iff Medium
  PiecewiseValueFunction value;       // agent i's value on (-k_star, k_star)
  std::vector<std::pair<std::string, double>> residuals;
};

// One agent's stationary strategy: drop out iff dk <= -stop_at, play the
// risky move on the listed gap intervals (left endpoint inclusive) and the
// safe move elsewhere.
struct Strategy {
  double stop_at;
  std::vector<std::pair<double, double>> risky_regions;
};

// Dispatches on classify(p) to the regime-specific solver.
EquilibriumSolution solve(const ContestParams& p);

// Low regime (pi <= 0): the follower alone plays risky.  k_star is the
// unique positive root of the symmetric first-order condition
//   (xi_p+xi_m)^2 e^{(xi_p+xi_m)k} - 2 xi_p xi_m (e^{2 xi_p k} + e^{2 xi_m k})
//     = phi (xi_p-xi_m)(xi_p e^{xi_p k} - xi_m e^{xi_m k}).
EquilibriumSolution solve_low(const ContestParams& p);

// High regime: both agents always play risky;
//   k_star = (1/eta) log[((sqrt(phi^2+8)+phi) + sqrt(2 phi (sqrt(phi^2+8)+phi) - 8))/4].
EquilibriumSolution solve_high(const ContestParams& p);

// Medium regime: the leader switches to risky at
//   k_star_star = k_star - (1/(2 eta)) log((1 + 2 pi/(eta sigma^2))/(1 - 2 pi/(eta sigma^2)));
// k_star is the root of the outer smooth-pasting residual V'(-k_star) = 0
// of the four-region value function.
EquilibriumSolution solve_medium(const ContestParams& p);

// Low-regime best response: the unique positive root k_i of
//   (xi_p+xi_m)(xi_p e^{xi_m k_i + xi_p k_j} + xi_m e^{xi_p k_i + xi_m k_j})
//     - 2 xi_p xi_m (e^{xi_p(k_i+k_j)} + e^{xi_m(k_i+k_j)})
//     = phi (xi_p-xi_m)(xi_p e^{xi_p k_j} - xi_m e^{xi_m k_j}).
double best_response_kstar(const ContestParams& p, double k_star_opponent);

// The strategy agent i plays in the given equilibrium.
Strategy equilibrium_strategy(const EquilibriumSolution& sol);

// Whether the strategy plays risky at gap dk (undefined past dropout).
bool strategy_risky_at(const Strategy& s, double dk);

// Geometric-expansion overflow guard: 700 / max(|xi_p|, |xi_m|, eta).
double bracket_cap(const CharRoots& cr);

// First-order conditions evaluated in an overflow-safe scaled form
// (multiplied by a positive factor), preserving signs and roots.
double low_foc(const ContestParams& p, double k);
double high_foc(const ContestParams& p, double k);

// High-regime boundary: closed form, and independently as a bracketed root
// of the first-order condition.
double high_kstar_closed_form(const ContestParams& p);
double high_kstar_root(const ContestParams& p);

// Value function assembled for a trial boundary (coefficients from value
// matching at +boundary, C0/C1 at interior kinks, V(-boundary) = 0).
// Used for smooth-pasting perturbation probes.
PiecewiseValueFunction low_value_at_boundary(const ContestParams& p, double k_star);
PiecewiseValueFunction high_value_at_boundary(const ContestParams& p, double k_star);
PiecewiseValueFunction medium_value_at_boundary(const ContestParams& p, double k_star,
                                                double k_star_star);

// Outer residual V'(-k_star) of the Medium four-region system with
// k_star_star tied to k_star by its closed form.
double medium_outer_residual(const ContestParams& p, double k_star);

}  // namespace contest
