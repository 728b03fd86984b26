// Acceptance gate: one numbered check per release criterion, each printing a
// single [PASS]/[FAIL] line with the measured quantities.  Run "all" or a
// list of criterion numbers; the exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "contest/design.hpp"
#include "contest/model.hpp"
#include "contest/oracle.hpp"
#include "contest/sim.hpp"
#include "contest/solver.hpp"
#include "contest/valuefn.hpp"
#include "contest/verify.hpp"

#include "param_draws.hpp"

using namespace contest;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

ContestParams benchmark(double pi) {
  return ContestParams{0.05, 1.0, 10.0, 0.0, 0.2, 0.0, pi, 0.5};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// 1. Always-risky boundary: closed form against the bracketed root on random
//    draws, plus the benchmark reference digits.
Outcome criterion_1() {
  std::mt19937_64 rng(777);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const ContestParams p = draws::draw(rng, draws::Want::High);
    worst = std::max(worst,
                     std::fabs(high_kstar_closed_form(p) - high_kstar_root(p)));
  }
  const double ks = solve(benchmark(0.1)).k_star;
  const double ref = 0.831362;
  const bool agree = worst < 1e-10;
  const bool digits = std::fabs(ks - ref) <= 1e-6;
  return {agree && digits,
          fmt("closed form vs root max|d| = %.3g over 100 draws (need < 1e-10); "
              "benchmark k* = %.9f vs reference %.6f (|d| = %.3g, need <= 1e-6)",
              worst, ks, ref, std::fabs(ks - ref))};
}

// 2. Follower-only benchmark: first-order and smooth-pasting residuals at the
//    solved boundary, runtime, and the reference digits.
Outcome criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const ContestParams p = benchmark(0.0);
  const EquilibriumSolution sol = solve(p);
  const double elapsed = seconds_since(t0);

  const double foc = std::fabs(low_foc(p, sol.k_star));
  const double sp_value = std::fabs(region_eval(sol.value.regions.front(), -sol.k_star, 0));
  const double sp_slope = std::fabs(region_eval(sol.value.regions.front(), -sol.k_star, 1));
  const double ref = 0.465616;
  const bool resid_ok = foc < 1e-10 && sp_value < 1e-8 && sp_slope < 1e-8;
  const bool digits = std::fabs(sol.k_star - ref) <= 1e-6;
  const bool fast = elapsed < 1.0;
  return {resid_ok && digits && fast,
          fmt("foc = %.3g (< 1e-10), pasting = %.3g/%.3g (< 1e-8), %.3fs (< 1s); "
              "k* = %.9f vs reference %.6f (|d| = %.3g, need <= 1e-6)",
              foc, sp_value, sp_slope, elapsed, sol.k_star, ref,
              std::fabs(sol.k_star - ref))};
}

// 3. Switch-gap identity tanh(eta (k*-k**)) = (pi/sigma) 2/sqrt(r+lambda),
//    plus the benchmark gap digits.
Outcome criterion_3() {
  const ContestParams p = benchmark(0.05);
  const EquilibriumSolution sol = solve(p);
  const double gap = sol.k_star - *sol.k_star_star;
  const CharRoots cr = char_roots(p);
  const double lhs = std::tanh(cr.eta * gap);
  const double rhs = (p.pi / p.sigma) * 2.0 / std::sqrt(p.r + lambda_eff(p));
  const double resid = std::fabs(lhs - rhs);
  const double ref = 0.423649;
  const bool identity = resid < 1e-10;
  const bool digits = std::fabs(gap - ref) <= 1e-6;
  return {identity && digits,
          fmt("identity residual = %.3g (< 1e-10); gap = %.9f vs reference %.6f "
              "(|d| = %.3g, need <= 1e-6)",
              resid, gap, ref, std::fabs(gap - ref))};
}

// 4. Certification of 100 random draws per regime within the runtime budget.
Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(777);
  double worst_bellman = 0, worst_margin = 0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    for (const auto want : {draws::Want::Low, draws::Want::Medium, draws::Want::High}) {
      const ContestParams p = draws::draw(rng, want);
      const VerificationReport rep = verify(solve(p), p);
      if (!rep.pass) ++failures;
      worst_bellman = std::max(worst_bellman, rep.max_bellman_residual);
      for (const auto& region : rep.deviation_margin_by_region)
        worst_margin = std::min(worst_margin, region.margin);
    }
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed < 30.0,
          fmt("%d/300 draws failed; max Bellman residual = %.3g (< 1e-7), worst "
              "deviation margin = %.3g (>= -1e-7), concavity included; %.2fs (< 30s)",
              failures, worst_bellman, worst_margin, elapsed)};
}

// 5. Grid oracle boundary error within 2h at h = 0.005 and at least halving
//    from h = 0.01, per benchmark, within the runtime budget.
Outcome criterion_5() {
  std::ostringstream detail;
  bool ok = true;
  for (const double pi : {0.0, 0.05, 0.1}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ContestParams p = benchmark(pi);
    const double exact = solve(p).k_star;
    double err[2];
    int idx = 0;
    for (const double h : {0.01, 0.005}) {
      GridSpec spec;
      spec.dk_step = h;
      spec.dt = h * h / (2 * p.sigma * p.sigma + std::fabs(p.pi) * h);
      err[idx++] = std::fabs(solve_grid_mpe(p, spec).k_star_est - exact);
    }
    const double elapsed = seconds_since(t0);
    const bool in_band = err[1] < 2 * 0.005;
    const bool halves = err[0] >= 2 * err[1];
    const bool fast = elapsed < 120.0;
    ok = ok && in_band && halves && fast;
    detail << fmt("pi=%.2f: err(0.01)=%.2e err(0.005)=%.2e ratio=%.2f %.2fs; ", pi,
                  err[0], err[1], err[0] / err[1], elapsed);
  }
  return {ok, detail.str() + "need err(0.005) < 0.01, ratio >= 2, < 120s each"};
}

// 6. Simulated mean discounted payoff within 3 standard errors of the exact
//    midpoint value on every benchmark.
Outcome criterion_6() {
  std::ostringstream detail;
  bool ok = true;
  for (const double pi : {0.0, 0.05, 0.1}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ContestParams p = benchmark(pi);
    const EquilibriumSolution sol = solve(p);
    SimConfig cfg;
    cfg.n_paths = 1000000;
    cfg.dt = 1e-3;
    cfg.k0 = 0.0;
    cfg.seed = 9001;
    const SimResult r = simulate(p, sol, cfg);
    const double v0 = eval(sol.value, 0.0, 0);
    const double z = (r.mean_discounted_payoff - v0) / r.payoff_std_error;
    const double elapsed = seconds_since(t0);
    ok = ok && std::fabs(z) < 3.0 && elapsed < 120.0;
    detail << fmt("pi=%.2f: mean=%.6f V(0)=%.6f z=%+.2f %.0fs; ", pi,
                  r.mean_discounted_payoff, v0, z, elapsed);
  }
  return {ok, detail.str() + "need |z| < 3, < 120s each"};
}

// 7. Simulated exit-time transform within 3 standard errors of the closed
//    form at theta in {hazard, hazard + 0.05} on the zero-drift benchmark.
Outcome criterion_7() {
  const ContestParams p = benchmark(0.0);
  const EquilibriumSolution sol = solve(p);
  SimConfig cfg;
  cfg.n_paths = 1000000;
  cfg.dt = 1e-3;
  cfg.k0 = 0.0;
  cfg.seed = 9001;
  cfg.laplace_thetas = {p.hazard_lead, p.hazard_lead + 0.05};
  const SimResult r = simulate(p, sol, cfg);
  std::ostringstream detail;
  bool ok = true;
  for (const auto& l : r.laplace_at) {
    const double exact = laplace_psi_analytic(l.theta, sol.k_star, 0.0, 0.0, p.sigma);
    const double z = (l.estimate - exact) / l.std_error;
    ok = ok && std::fabs(z) < 3.0;
    detail << fmt("theta=%.2f: est=%.6f exact=%.6f z=%+.2f; ", l.theta, l.estimate,
                  exact, z);
  }
  return {ok, detail.str() + "need |z| < 3"};
}

// 8. Boundary monotonicity and shape: strictly increasing along prize/cost
//    and drift/volatility ratio grids, single-peaked in the hazard, and
//    vanishing with the volatility under negative drift.
Outcome criterion_8() {
  std::ostringstream detail;
  bool ok = true;

  {  // prize/cost ratio grids: raise the prize, then raise the cost.
    bool inc = true;
    double prev = -1;
    for (int i = 0; i < 8; ++i) {
      ContestParams p = benchmark(0.0);
      p.prize_win = 6.0 + 2.0 * i;
      const double ks = solve(p).k_star;
      if (i > 0 && ks <= prev) inc = false;
      prev = ks;
    }
    bool dec = true;
    prev = -1;
    for (int i = 0; i < 8; ++i) {
      ContestParams p = benchmark(0.0);
      p.c = 0.5 + 0.15 * i;
      const double ks = solve(p).k_star;
      if (i > 0 && ks >= prev) dec = false;
      prev = ks;
    }
    ok = ok && inc && dec;
    detail << fmt("prize grid increasing=%d, cost grid decreasing=%d; ", inc, dec);
  }

  {  // drift/volatility ratio grid across the single-risky and switching
     // regions (the boundary is flat in the ratio beyond the threshold).
    const double thr = classify(benchmark(0.0)).threshold;
    std::vector<double> ratios;
    for (int i = 0; i < 5; ++i) ratios.push_back(-0.5 + 0.125 * i);
    for (int i = 1; i <= 5; ++i) ratios.push_back(thr * 0.19 * i);
    bool inc = true;
    double prev = -1;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      ContestParams p = benchmark(ratios[i] * 0.5);
      const double ks = solve(p).k_star;
      if (i > 0 && ks <= prev) inc = false;
      prev = ks;
    }
    ok = ok && inc;
    detail << fmt("ratio grid increasing=%d; ", inc);
  }

  {  // hazard grid: the boundary rises, peaks once, then falls.
    int flips = 0, dir = 0;
    bool rose = false, fell = false;
    double prev = -1;
    for (int i = 0; i < 50; ++i) {
      ContestParams p = benchmark(0.0);
      p.hazard_lead = 0.12 + (1.8 - 0.12) * i / 49.0;
      const double ks = solve(p).k_star;
      if (i > 0) {
        const int d = ks > prev ? 1 : -1;
        (d == 1 ? rose : fell) = true;
        if (dir != 0 && d != dir) ++flips;
        dir = d;
      }
      prev = ks;
    }
    const bool single_peak = rose && fell && flips == 1;
    ok = ok && single_peak;
    detail << fmt("hazard grid single-peaked=%d (flips=%d); ", single_peak, flips);
  }

  {  // vanishing volatility under negative drift: immediate-preemption limit.
    bool dec = true;
    double prev = -1, last = 0;
    for (const double sigma : {0.4, 0.2, 0.1, 0.05, 0.025}) {
      ContestParams p = benchmark(-0.1);
      p.sigma = sigma;
      last = solve(p).k_star;
      if (prev >= 0 && last >= prev) dec = false;
      prev = last;
    }
    ok = ok && dec && last < 0.02;
    detail << fmt("k*(sigma) decreasing=%d, k*(0.025)=%.4f (< 0.02)", dec, last);
  }

  return {ok, detail.str()};
}

// 9. Regime continuity: the switching solution collapses onto the
//    single-risky one as the ratio vanishes, and the switching point hits
//    zero at the threshold.
Outcome criterion_9() {
  const ContestParams low = benchmark(0.0);
  const double k_low = solve(low).k_star;

  ContestParams p = low;
  p.pi = 1e-4 * p.sigma;
  const EquilibriumSolution near_zero = solve(p);
  const double gap = near_zero.k_star - *near_zero.k_star_star;
  const double drift_err = std::fabs(near_zero.k_star - k_low);

  const double thr = classify(low).threshold;
  p.pi = p.sigma * thr * (1 - 1e-6);
  const EquilibriumSolution near_thr = solve(p);
  const double kss = *near_thr.k_star_star;

  const bool ok = gap < 1e-3 && drift_err < 1e-3 && kss < 1e-3;
  return {ok, fmt("ratio 1e-4: |k*-k**| = %.2e (< 1e-3), |k* - k*_single| = %.2e "
                  "(< 1e-3); ratio at threshold(1-1e-6): k** = %.2e (< 1e-3)",
                  gap, drift_err, kss)};
}

// 10. Prize design worked cases, exactly, and ranking agreement across five
//     finite allocations.
Outcome criterion_10() {
  std::ostringstream detail;
  bool ok = true;

  DesignProblem small;
  small.budget = 10.0;
  small.hazard_lead = 0.3;
  small.hazard_follow = 0.05;
  small.cost = 2.0;
  small.r = 0.05;
  small.pi = 0.0;
  small.sigma = 0.5;
  const PrizeAllocation wta = optimize_prizes(small);
  const bool wta_ok = wta.case_label == "winner-takes-all" && wta.prize_win == 10.0 &&
                      wta.prize_lose == 0.0 &&
                      std::fabs(wta.phi_bar - 5.0 / 3.0) < 1e-12;
  ok = ok && wta_ok;
  detail << fmt("small budget: %s (%.1f, %.1f) phi=%.6f (exact 5/3) ok=%d; ",
                wta.case_label.c_str(), wta.prize_win, wta.prize_lose, wta.phi_bar,
                wta_ok);

  DesignProblem large = small;
  large.cost = 1.0;
  const PrizeAllocation split = optimize_prizes(large);
  const bool split_ok = split.case_label == "near-equal-split" &&
                        split.epsilon_interval.has_value() &&
                        std::fabs(split.epsilon_interval->second - 3.0) < 1e-12;
  ok = ok && split_ok;
  detail << fmt("large budget: %s eps_max=%.6f (exact 3.0) ok=%d; ",
                split.case_label.c_str(),
                split.epsilon_interval ? split.epsilon_interval->second : -1.0,
                split_ok);

  std::vector<PrizeAllocation> family;
  for (const double frac : {1.0, 0.9, 0.8, 0.7, 0.6}) {
    const double d = (small.budget / 2) * frac;
    PrizeAllocation a;
    a.prize_win = small.budget / 2 + d;
    a.prize_lose = small.budget / 2 - d;
    const double denom = small.cost - (small.hazard_follow * a.prize_win +
                                       small.hazard_lead * a.prize_lose);
    a.phi_bar = (small.hazard_lead - small.hazard_follow) *
                (a.prize_win - a.prize_lose) / denom;
    a.case_label = "spread";
    family.push_back(a);
  }
  const EquivalenceReport rep = check_objective_equivalence(small, family);
  ok = ok && rep.consistent && rep.rows.size() == 5;
  detail << fmt("rankings over %zu allocations consistent=%d", rep.rows.size(),
                rep.consistent);
  return {ok, detail.str()};
}

using CriterionFn = std::function<Outcome()>;

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, CriterionFn>> all = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
      {9, criterion_9}, {10, criterion_10},
  };

  std::vector<int> wanted;
  bool run_all = argc < 2;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "all") == 0) {
      run_all = true;
    } else {
      wanted.push_back(std::atoi(argv[i]));
    }
  }

  int failures = 0;
  for (const auto& [num, fn] : all) {
    if (!run_all) {
      bool selected = false;
      for (const int w : wanted) selected = selected || w == num;
      if (!selected) continue;
    }
    const Outcome outcome = fn();
    std::printf("[%s] criterion %d: %s\n", outcome.pass ? "PASS" : "FAIL", num,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
