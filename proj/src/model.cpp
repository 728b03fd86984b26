#include "contest/model.hpp"

#include <cmath>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

double lambda_eff(const ContestParams& p) {
  return p.hazard_lead + p.hazard_follow;
}

double lead_const(const ContestParams& p) {
  return (p.hazard_lead * p.prize_win + p.hazard_follow * p.prize_lose - p.c) /
         (p.r + lambda_eff(p));
}

double follow_const(const ContestParams& p) {
  return (p.hazard_follow * p.prize_win + p.hazard_lead * p.prize_lose - p.c) /
         (p.r + lambda_eff(p));
}

void validate_fields(const ContestParams& p) {
  if (!(p.r > 0) || !std::isfinite(p.r)) throw ValidationError("r must be a finite positive real");
  if (!(p.c > 0) || !std::isfinite(p.c)) throw ValidationError("c must be a finite positive real");
  if (!(p.sigma > 0) || !std::isfinite(p.sigma))
    throw ValidationError("sigma must be a finite positive real");
  if (!(p.prize_lose >= 0) || !std::isfinite(p.prize_lose))
    throw ValidationError("prize_lose must be finite and >= 0");
  if (!(p.prize_win >= p.prize_lose) || !std::isfinite(p.prize_win))
    throw ValidationError("prize_win must be finite and >= prize_lose");
  if (!(p.hazard_follow >= 0) || !std::isfinite(p.hazard_follow))
    throw ValidationError("hazard_follow must be finite and >= 0");
  if (!(p.hazard_lead > p.hazard_follow) || !std::isfinite(p.hazard_lead))
    throw ValidationError("hazard_lead must be finite and > hazard_follow");
  if (!std::isfinite(p.pi)) throw ValidationError("pi must be finite");
}

double profitability(const ContestParams& p) {
  validate_fields(p);
  const double denom = p.c - (p.hazard_follow * p.prize_win + p.hazard_lead * p.prize_lose);
  if (denom <= 0) {
    std::ostringstream os;
    os << "profitability denominator c - (hazard_follow*prize_win + hazard_lead*prize_lose) = "
       << denom << " is <= 0; continuation region is unbounded";
    throw InfiniteProfitability(os.str());
  }
  return (p.hazard_lead - p.hazard_follow) * (p.prize_win - p.prize_lose) / denom;
}

void validate(const ContestParams& p) {
  const double phi = profitability(p);
  if (!(phi > 1)) {
    std::ostringstream os;
    os << "contest not profitable: phi = " << phi << " must exceed 1";
    throw ValidationError(os.str());
  }
}

double f_of_phi(double phi) {
  if (!(phi >= 1))
    throw OutOfDomain("f_of_phi requires phi >= 1 (radicand is negative below 1)");
  const double s = std::sqrt(phi * phi + 8.0) + phi;
  const double radicand = 2.0 * phi * s - 8.0;
  return std::sqrt(radicand > 0 ? radicand : 0.0) / s;
}

Regime classify(const ContestParams& p) {
  validate(p);
  Regime g;
  g.ratio = p.pi / p.sigma;
  g.threshold = 0.5 * std::sqrt(p.r + lambda_eff(p)) * f_of_phi(profitability(p));
  if (p.pi <= 0)
    g.kind = RegimeKind::Low;
  else if (g.ratio >= g.threshold)
    g.kind = RegimeKind::High;
  else
    g.kind = RegimeKind::Medium;
  return g;
}

const char* regime_name(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Low: return "Low";
    case RegimeKind::Medium: return "Medium";
    case RegimeKind::High: return "High";
  }
  return "unknown";
}

}  // namespace contest
