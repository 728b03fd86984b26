#include "contest/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "contest/errors.hpp"
#include "contest/sim.hpp"
#include "contest/solver.hpp"
#include "contest/valuefn.hpp"

namespace contest {

namespace {

void check_problem(const DesignProblem& prob) {
  const auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(prob.budget) || prob.budget <= 0) throw ValidationError("budget must be > 0");
  if (bad(prob.cost) || prob.cost <= 0) throw ValidationError("cost must be > 0");
  if (bad(prob.r) || prob.r <= 0) throw ValidationError("r must be > 0");
  if (bad(prob.sigma) || prob.sigma <= 0) throw ValidationError("sigma must be > 0");
  if (bad(prob.pi)) throw ValidationError("pi must be finite");
  if (bad(prob.k0)) throw ValidationError("k0 must be finite");
  if (bad(prob.hazard_lead) || bad(prob.hazard_follow) || prob.hazard_follow < 0 ||
      prob.hazard_lead <= prob.hazard_follow)
    throw ValidationError("hazards must satisfy hazard_lead > hazard_follow >= 0");
  if (!(prob.hazard_lead * prob.budget > prob.cost &&
        prob.cost > prob.hazard_follow * prob.budget)) {
    std::ostringstream os;
    os << "maintained assumption hazard_lead*budget > cost > hazard_follow*budget fails: "
       << prob.hazard_lead * prob.budget << " vs " << prob.cost << " vs "
       << prob.hazard_follow * prob.budget;
    throw AssumptionViolated(os.str());
  }
}

}  // namespace

ContestParams design_params(const DesignProblem& prob, double prize_win, double prize_lose) {
  return ContestParams{prob.r,           prob.cost,          prize_win, prize_lose,
                       prob.hazard_lead, prob.hazard_follow, prob.pi,   prob.sigma};
}

PrizeAllocation optimize_prizes(const DesignProblem& prob) {
  check_problem(prob);
  const double split_hazard_value =
      (prob.hazard_lead + prob.hazard_follow) * prob.budget / 2;
  if (split_hazard_value == prob.cost)
    throw KnifeEdge("(hazard_lead + hazard_follow)*budget/2 equals cost exactly; "
                    "the optimal allocation is discontinuous here");

  PrizeAllocation out;
  if (split_hazard_value < prob.cost) {
    out.prize_win = prob.budget;
    out.prize_lose = 0.0;
    out.phi_bar = (prob.hazard_lead - prob.hazard_follow) * prob.budget /
                  (prob.cost - prob.hazard_follow * prob.budget);
    out.case_label = "winner-takes-all";
  } else {
    // Any offset below eps_max makes the profitability denominator negative;
    // the prize floor prize_lose >= 0 caps it at budget/2.
    const double eps_max =
        std::min((split_hazard_value - prob.cost) / (prob.hazard_lead - prob.hazard_follow),
                 prob.budget / 2);
    const double eps = eps_max / 2;
    out.prize_win = prob.budget / 2 + eps;
    out.prize_lose = prob.budget / 2 - eps;
    out.epsilon_interval = {0.0, eps_max};
    out.epsilon = eps;
    out.phi_bar = std::numeric_limits<double>::infinity();
    out.case_label = "near-equal-split";
  }
  return out;
}

DesignObjectives objective_values(const DesignProblem& prob, const PrizeAllocation& alloc) {
  check_problem(prob);
  const double leff = prob.hazard_lead + prob.hazard_follow;
  DesignObjectives out;
  if (!std::isfinite(alloc.phi_bar)) {
    out.infinite_continuation = true;
    out.follower_time = 1.0 / leff;
    out.success_time = 1.0 / leff;
    return out;
  }
  out.infinite_continuation = false;
  const ContestParams p = design_params(prob, alloc.prize_win, alloc.prize_lose);
  const EquilibriumSolution sol = solve(p);
  out.k_star = sol.k_star;
  if (p.pi <= 0) {
    const ExpectedTimes et = expected_times(p, sol.k_star, prob.k0);
    out.follower_time = et.follower_time;
    out.success_time = et.success_time;
  } else {
    SimConfig cfg;
    cfg.n_paths = 200000;
    cfg.dt = 1e-3;
    cfg.seed = 20240817;
    cfg.k0 = prob.k0;
    cfg.laplace_thetas = {leff};  // skip the default pair; times only
    const SimResult res = simulate(p, sol, cfg);
    out.follower_time = res.mean_follower_time;
    out.success_time = res.mean_success_time;
  }
  return out;
}

EquivalenceReport check_objective_equivalence(const DesignProblem& prob,
                                              const std::vector<PrizeAllocation>& allocations) {
  if (allocations.size() < 2)
    throw ValidationError("objective equivalence needs at least two allocations");
  for (const PrizeAllocation& a : allocations)
    if (!std::isfinite(a.phi_bar))
      throw ValidationError("objective equivalence applies to finite-profitability "
                            "allocations only");

  EquivalenceReport rep;
  for (const PrizeAllocation& a : allocations) {
    const DesignObjectives obj = objective_values(prob, a);
    rep.rows.push_back({a.prize_win, a.prize_lose, a.phi_bar, *obj.k_star,
                        obj.follower_time, obj.success_time});
  }
  const std::size_t n = rep.rows.size();
  const auto order_by = [n, &rep](auto key, bool descending) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const double ka = key(rep.rows[a]), kb = key(rep.rows[b]);
      return descending ? ka > kb : ka < kb;
    });
    return idx;
  };
  rep.rank_by_k_star = order_by([](const EquivalenceRow& r) { return r.k_star; }, true);
  rep.rank_by_follower_time =
      order_by([](const EquivalenceRow& r) { return r.follower_time; }, true);
  rep.rank_by_success_time =
      order_by([](const EquivalenceRow& r) { return r.success_time; }, false);
  rep.consistent = rep.rank_by_k_star == rep.rank_by_follower_time &&
                   rep.rank_by_k_star == rep.rank_by_success_time;
  return rep;
}

}  // namespace contest
