#include <cmath>

#include "doctest.h"

#include "contest/errors.hpp"
#include "contest/model.hpp"
#include "param_draws.hpp"

using namespace contest;

namespace {

ContestParams benchmark(double pi) {
  return ContestParams{0.05, 1.0, 10.0, 0.0, 0.2, 0.0, pi, 0.5};
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("benchmark constants") {
  const ContestParams p = benchmark(0.0);
  CHECK(profitability(p) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lambda_eff(p) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(lead_const(p) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(follow_const(p) == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("profitability generalizes the baseline ratio") {
  ContestParams p = benchmark(0.0);
  p.hazard_follow = 0.05;
  p.prize_lose = 1.0;
  // (0.2 - 0.05) * (10 - 1) / (1 - (0.05*10 + 0.2*1)) = 1.35 / 0.3
  CHECK(profitability(p) == doctest::Approx(4.5).epsilon(1e-14));
  p.hazard_follow = 0.1;  // denominator 1 - (0.1*10 + 0.2*1) < 0
  CHECK_THROWS_AS(profitability(p), InfiniteProfitability);
  CHECK_THROWS_AS(validate(p), InfiniteProfitability);
}

TEST_CASE("f_of_phi shape") {
  CHECK(f_of_phi(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  const double s = std::sqrt(12.0) + 2.0;
  CHECK(f_of_phi(2.0) == doctest::Approx(std::sqrt(2 * 2 * s - 8) / s).epsilon(1e-14));
  double prev = 0.0;
  for (double phi = 1.1; phi < 40.0; phi += 0.7) {
    const double cur = f_of_phi(phi);
    CHECK(cur > prev);
    CHECK(cur < 1.0);
    prev = cur;
  }
  CHECK(f_of_phi(1e8) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("classification of the benchmark family") {
  const Regime low = classify(benchmark(0.0));
  CHECK(low.kind == RegimeKind::Low);
  CHECK(low.ratio == doctest::Approx(0.0));
  CHECK(low.threshold ==
        doctest::Approx(0.5 * std::sqrt(0.25) * f_of_phi(2.0)).epsilon(1e-14));

  CHECK(classify(benchmark(-0.1)).kind == RegimeKind::Low);
  CHECK(classify(benchmark(0.05)).kind == RegimeKind::Medium);
  CHECK(classify(benchmark(0.05)).ratio == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(classify(benchmark(0.1)).kind == RegimeKind::High);
}

TEST_CASE("threshold tie classifies High") {
  ContestParams p = benchmark(0.0);
  p.sigma = 1.0;
  const double thr = classify(p).threshold;
  p.pi = thr * p.sigma;
  const Regime tie = classify(p);
  CHECK(tie.ratio == doctest::Approx(tie.threshold).epsilon(1e-15));
  CHECK(tie.kind == RegimeKind::High);
}

TEST_CASE("field validation") {
  CHECK_NOTHROW(validate(benchmark(0.05)));

  ContestParams p = benchmark(0.0);
  p.r = 0.0;
  CHECK_THROWS_AS(validate_fields(p), ValidationError);
  p = benchmark(0.0);
  p.sigma = -0.5;
  CHECK_THROWS_AS(validate_fields(p), ValidationError);
  p = benchmark(0.0);
  p.c = 0.0;
  CHECK_THROWS_AS(validate_fields(p), ValidationError);
  p = benchmark(0.0);
  p.prize_lose = 11.0;
  CHECK_THROWS_AS(validate_fields(p), ValidationError);
  p = benchmark(0.0);
  p.hazard_follow = 0.3;  // not below hazard_lead
  CHECK_THROWS_AS(validate_fields(p), ValidationError);
  p = benchmark(0.0);
  p.pi = std::nan("");
  CHECK_THROWS_AS(validate_fields(p), ValidationError);

  p = benchmark(0.0);
  p.prize_win = 4.0;  // phi = 0.8 <= 1
  CHECK_NOTHROW(validate_fields(p));
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("regime names") {
  CHECK(std::string(regime_name(RegimeKind::Low)) == "Low");
  CHECK(std::string(regime_name(RegimeKind::Medium)) == "Medium");
  CHECK(std::string(regime_name(RegimeKind::High)) == "High");
}

TEST_CASE("draw recipe lands in the requested regime") {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 200; ++i) {
    CHECK(classify(draws::draw(rng, draws::Want::Low)).kind == RegimeKind::Low);
    CHECK(classify(draws::draw(rng, draws::Want::Medium)).kind == RegimeKind::Medium);
    CHECK(classify(draws::draw(rng, draws::Want::High)).kind == RegimeKind::High);
  }
}

}  // TEST_SUITE
