#include <cmath>

#include "doctest.h"

#include "contest/errors.hpp"
#include "contest/model.hpp"
#include "contest/solver.hpp"
#include "contest/valuefn.hpp"
#include "contest/verify.hpp"
#include "param_draws.hpp"

using namespace contest;

namespace {

ContestParams benchmark(double pi) {
  return ContestParams{0.05, 1.0, 10.0, 0.0, 0.2, 0.0, pi, 0.5};
}

bool lemma(const VerificationReport& rep, const std::string& name) {
  for (const auto& [n, ok] : rep.lemma_checks)
    if (n == name) return ok;
  FAIL("missing lemma check " << name);
  return false;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("benchmarks certify") {
  for (const double pi : {0.0, 0.05, 0.1, -0.1}) {
    const ContestParams p = benchmark(pi);
    const EquilibriumSolution sol = solve(p);
    const VerificationReport rep = verify(sol, p);
    CAPTURE(pi);
    CHECK(rep.pass);
    CHECK(rep.max_bellman_residual < 1e-7);
    CHECK(lemma(rep, "follower_always_risky"));
    CHECK(lemma(rep, "leader_value_concave"));
    for (const auto& region : rep.deviation_margin_by_region) {
      CAPTURE(region.requirement);
      CHECK(region.margin > -rep.tol);
    }
  }
  const VerificationReport high = verify(solve(benchmark(0.1)), benchmark(0.1));
  CHECK(lemma(high, "leader_risky_when_ratio_large"));
  const VerificationReport med = verify(solve(benchmark(0.05)), benchmark(0.05));
  CHECK(lemma(med, "leader_risky_upper_interval"));
}

TEST_CASE("random draws certify") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 20; ++i) {
    for (const auto want : {draws::Want::Low, draws::Want::Medium, draws::Want::High}) {
      const ContestParams p = draws::draw(rng, want);
      const EquilibriumSolution sol = solve(p);
      const VerificationReport rep = verify(sol, p);
      CAPTURE(p.pi);
      CAPTURE(p.sigma);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("tampered value function fails") {
  const ContestParams p = benchmark(0.0);
  EquilibriumSolution sol = solve(p);

  SUBCASE("shifting a region constant breaks the Bellman equation") {
    // A nudge to an exponential coefficient would still solve the region
    // ODE (it is a homogeneous solution); the constant term is not.
    sol.value.regions[0].constant += 0.01;
    CHECK(check_bellman(sol, p, 2000) > 1e-4);
    CHECK(!verify(sol, p).pass);
  }

  SUBCASE("bending an exponential rate breaks the Bellman equation") {
    sol.value.regions[0].terms[0].rate *= 1.01;
    CHECK(check_bellman(sol, p, 2000) > 1e-4);
    CHECK(!verify(sol, p).pass);
  }

  SUBCASE("wrong boundary fails certification") {
    const double wrong = sol.k_star * 1.02;
    sol.k_star = wrong;
    sol.value = low_value_at_boundary(p, wrong);
    CHECK(!verify(sol, p).pass);
  }
}

TEST_CASE("report bookkeeping") {
  const ContestParams p = benchmark(0.05);
  const VerificationReport rep = verify(solve(p), p, 500, 1e-6);
  CHECK(rep.grid_size == 500);
  CHECK(rep.tol == 1e-6);
  CHECK(!rep.deviation_margin_by_region.empty());
  bool saw_safe = false, saw_risky = false, saw_indiff = false;
  for (const auto& region : rep.deviation_margin_by_region) {
    if (region.requirement == "safe_gain_nonpositive") saw_safe = true;
    if (region.requirement == "risky_gain_nonnegative") saw_risky = true;
    if (region.requirement == "switch_indifference") saw_indiff = true;
  }
  CHECK(saw_safe);
  CHECK(saw_risky);
  CHECK(saw_indiff);
}

}  // TEST_SUITE
