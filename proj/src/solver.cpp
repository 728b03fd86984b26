#include "contest/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "contest/errors.hpp"
#include "contest/roots.hpp"

namespace contest {

namespace {

constexpr double kBracketStart = 1e-6;

// Stages rows as coef * e^{expo} entries so each row can be rescaled by its
// largest exponent before exponentiation (keeps the matrix well conditioned
// and avoids overflow for large rate*boundary products).
struct SystemBuilder {
  double coef[8][8] = {};
  double expo[8][8] = {};
  double rhs[8] = {};

  void set(int row, int col, double c, double e) {
    coef[row][col] = c;
    expo[row][col] = e;
  }

  void solve(int n, double* out) {
    double A[64] = {};
    double b[8] = {};
    for (int i = 0; i < n; ++i) {
      double m = 0;
      for (int j = 0; j < n; ++j)
        if (coef[i][j] != 0 && expo[i][j] > m) m = expo[i][j];
      for (int j = 0; j < n; ++j)
        A[i * 8 + j] = coef[i][j] == 0 ? 0.0 : coef[i][j] * std::exp(expo[i][j] - m);
      b[i] = rhs[i] == 0 ? 0.0 : rhs[i] * std::exp(-m);
    }
    solve_linear(n, A, b, out);
  }
};

void require_regime(const Regime& g, RegimeKind want, const char* who) {
  if (g.kind != want) {
    std::ostringstream os;
    os << who << " requires the " << regime_name(want) << " regime; inputs classify "
       << regime_name(g.kind);
    throw ValidationError(os.str());
  }
}

double c0_jump(const PiecewiseValueFunction& v, std::size_t left, double at) {
  return std::fabs(region_eval(v.regions[left], at, 0) - region_eval(v.regions[left + 1], at, 0));
}

double c1_jump(const PiecewiseValueFunction& v, std::size_t left, double at) {
  return std::fabs(region_eval(v.regions[left], at, 1) - region_eval(v.regions[left + 1], at, 1));
}

}  // namespace

double bracket_cap(const CharRoots& cr) {
  const double m = std::max(std::max(std::fabs(cr.xi_plus), std::fabs(cr.xi_minus)), cr.eta);
  return 700.0 / m;
}

double low_foc(const ContestParams& p, double k) {
  const CharRoots cr = char_roots(p);
  const double phi = profitability(p);
  const double xp = cr.xi_plus, xm = cr.xi_minus;
  const double d = xm - xp;  // < 0
  const double t1 = (xp + xm) * (xp + xm) * std::exp(d * k);
  const double t2 = -2.0 * xp * xm * (1.0 + std::exp(2.0 * d * k));
  const double t3 =
      -phi * (xp - xm) * (xp * std::exp(-xp * k) - xm * std::exp((xm - 2.0 * xp) * k));
  return t1 + t2 + t3;
}

double high_foc(const ContestParams& p, double k) {
  const CharRoots cr = char_roots(p);
  const double phi = profitability(p);
  const double e = cr.eta;
  return 1.0 + std::exp(-4.0 * e * k) - phi * (std::exp(-e * k) + std::exp(-3.0 * e * k));
}

double high_kstar_closed_form(const ContestParams& p) {
  const CharRoots cr = char_roots(p);
  const double phi = profitability(p);
  const double s = std::sqrt(phi * phi + 8.0) + phi;
  const double t = std::sqrt(2.0 * phi * s - 8.0);
  return std::log((s + t) / 4.0) / cr.eta;
}

double high_kstar_root(const ContestParams& p) {
  const CharRoots cr = char_roots(p);
  return find_positive_root([&](double k) { return high_foc(p, k); }, kBracketStart,
                            bracket_cap(cr));
}

PiecewiseValueFunction low_value_at_boundary(const ContestParams& p, double k_star) {
  if (!(k_star > 0)) throw ValidationError("boundary k_star must be > 0");
  const CharRoots cr = char_roots(p);
  const double xp = cr.xi_plus, xm = cr.xi_minus;
  const double mb = lead_const(p), nb = follow_const(p);

  SystemBuilder s;
  // unknowns [A, B, C, D]:
  //   V = nb + A e^{xp dk} + B e^{xm dk}   on (-k*, 0)
  //   V = mb + C e^{-xm dk} + D e^{-xp dk} on (0, k*)
  s.set(0, 2, 1.0, -xm * k_star);  // value matching at +k*
  s.set(0, 3, 1.0, -xp * k_star);
  s.set(1, 0, 1.0, 0);  // C0 at 0
  s.set(1, 1, 1.0, 0);
  s.set(1, 2, -1.0, 0);
  s.set(1, 3, -1.0, 0);
  s.rhs[1] = mb - nb;
  s.set(2, 0, xp, 0);  // C1 at 0
  s.set(2, 1, xm, 0);
  s.set(2, 2, xm, 0);
  s.set(2, 3, xp, 0);
  s.set(3, 0, 1.0, -xp * k_star);  // V(-k*) = 0
  s.set(3, 1, 1.0, -xm * k_star);
  s.rhs[3] = -nb;
  double u[8];
  s.solve(4, u);

  PiecewiseValueFunction v;
  v.domain_lo = -k_star;
  v.domain_hi = k_star;
  v.regions = {{-k_star, 0.0, nb, {{u[0], xp}, {u[1], xm}}},
               {0.0, k_star, mb, {{u[2], -xm}, {u[3], -xp}}}};
  return v;
}

PiecewiseValueFunction high_value_at_boundary(const ContestParams& p, double k_star) {
  if (!(k_star > 0)) throw ValidationError("boundary k_star must be > 0");
  const CharRoots cr = char_roots(p);
  const double e = cr.eta;
  const double mb = lead_const(p), nb = follow_const(p);

  SystemBuilder s;
  // unknowns [A, B, C, D]:
  //   V = nb + A e^{eta dk} + B e^{-eta dk} on (-k*, 0)
  //   V = mb + C e^{eta dk} + D e^{-eta dk} on (0, k*)
  s.set(0, 2, 1.0, e * k_star);  // value matching at +k*
  s.set(0, 3, 1.0, -e * k_star);
  s.set(1, 0, 1.0, 0);  // C0 at 0
  s.set(1, 1, 1.0, 0);
  s.set(1, 2, -1.0, 0);
  s.set(1, 3, -1.0, 0);
  s.rhs[1] = mb - nb;
  s.set(2, 0, 1.0, 0);  // C1 at 0
  s.set(2, 1, -1.0, 0);
  s.set(2, 2, -1.0, 0);
  s.set(2, 3, 1.0, 0);
  s.set(3, 0, 1.0, -e * k_star);  // V(-k*) = 0
  s.set(3, 1, 1.0, e * k_star);
  s.rhs[3] = -nb;
  double u[8];
  s.solve(4, u);

  PiecewiseValueFunction v;
  v.domain_lo = -k_star;
  v.domain_hi = k_star;
  v.regions = {{-k_star, 0.0, nb, {{u[0], e}, {u[1], -e}}},
               {0.0, k_star, mb, {{u[2], e}, {u[3], -e}}}};
  return v;
}

PiecewiseValueFunction medium_value_at_boundary(const ContestParams& p, double k_star,
                                                double k_star_star) {
  if (!(k_star > 0)) throw ValidationError("boundary k_star must be > 0");
  if (!(k_star_star > 0 && k_star_star < k_star))
    throw ValidationError("switching point must satisfy 0 < k_star_star < k_star");
  const CharRoots cr = char_roots(p);
  const double xp = cr.xi_plus, xm = cr.xi_minus, e = cr.eta;
  const double mb = lead_const(p), nb = follow_const(p);
  const double ks = k_star, kss = k_star_star;

  SystemBuilder s;
  // unknowns [A, B, C, D, E, F, G, H]:
  //   V = nb + A e^{eta dk} + B e^{-eta dk}  on (-k*, -k**)   both risky
  //   V = nb + C e^{xp dk}  + D e^{xm dk}    on (-k**, 0)     own risky
  //   V = mb + E e^{-xm dk} + F e^{-xp dk}   on (0, k**)      opponent risky
  //   V = mb + G e^{eta dk} + H e^{-eta dk}  on (k**, k*)     both risky
  s.set(0, 6, 1.0, e * ks);  // value matching at +k*
  s.set(0, 7, 1.0, -e * ks);
  s.set(1, 4, 1.0, -xm * kss);  // C0 at k**
  s.set(1, 5, 1.0, -xp * kss);
  s.set(1, 6, -1.0, e * kss);
  s.set(1, 7, -1.0, -e * kss);
  s.set(2, 4, -xm, -xm * kss);  // C1 at k**
  s.set(2, 5, -xp, -xp * kss);
  s.set(2, 6, -e, e * kss);
  s.set(2, 7, e, -e * kss);
  s.set(3, 2, 1.0, 0);  // C0 at 0
  s.set(3, 3, 1.0, 0);
  s.set(3, 4, -1.0, 0);
  s.set(3, 5, -1.0, 0);
  s.rhs[3] = mb - nb;
  s.set(4, 2, xp, 0);  // C1 at 0
  s.set(4, 3, xm, 0);
  s.set(4, 4, xm, 0);
  s.set(4, 5, xp, 0);
  s.set(5, 0, 1.0, -e * kss);  // C0 at -k**
  s.set(5, 1, 1.0, e * kss);
  s.set(5, 2, -1.0, -xp * kss);
  s.set(5, 3, -1.0, -xm * kss);
  s.set(6, 0, e, -e * kss);  // C1 at -k**
  s.set(6, 1, -e, e * kss);
  s.set(6, 2, -xp, -xp * kss);
  s.set(6, 3, -xm, -xm * kss);
  s.set(7, 0, 1.0, -e * ks);  // V(-k*) = 0
  s.set(7, 1, 1.0, e * ks);
  s.rhs[7] = -nb;
  double u[8];
  s.solve(8, u);

  PiecewiseValueFunction v;
  v.domain_lo = -ks;
  v.domain_hi = ks;
  v.regions = {{-ks, -kss, nb, {{u[0], e}, {u[1], -e}}},
               {-kss, 0.0, nb, {{u[2], xp}, {u[3], xm}}},
               {0.0, kss, mb, {{u[4], -xm}, {u[5], -xp}}},
               {kss, ks, mb, {{u[6], e}, {u[7], -e}}}};
  return v;
}

namespace {

double medium_switch_gap(const ContestParams& p, const CharRoots& cr) {
  const double arg = 2.0 * p.pi / (cr.eta * p.sigma * p.sigma);
  if (!(arg < 1)) {
    std::ostringstream os;
    os << "2*pi/(eta*sigma^2) = " << arg
       << " is >= 1: the switching point k_star_star would be <= 0";
    throw DegenerateRegime(os.str());
  }
  return std::atanh(arg) / cr.eta;
}

std::vector<std::pair<std::string, double>> boundary_residuals(
    const ContestParams& p, const PiecewiseValueFunction& v, double k_star, double foc_residual) {
  const double mb = lead_const(p);
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("foc", std::fabs(foc_residual));
  out.emplace_back("smooth_pasting_value", std::fabs(region_eval(v.regions.front(), -k_star, 0)));
  out.emplace_back("smooth_pasting_derivative",
                   std::fabs(region_eval(v.regions.front(), -k_star, 1)));
  out.emplace_back("value_matching",
                   std::fabs(region_eval(v.regions.back(), k_star, 0) - mb));
  return out;
}

}  // namespace

double medium_outer_residual(const ContestParams& p, double k_star) {
  const CharRoots cr = char_roots(p);
  const double kss = k_star - medium_switch_gap(p, cr);
  const PiecewiseValueFunction v = medium_value_at_boundary(p, k_star, kss);
  return region_eval(v.regions.front(), -k_star, 1);
}

EquilibriumSolution solve_low(const ContestParams& p) {
  const Regime g = classify(p);
  require_regime(g, RegimeKind::Low, "solve_low");
  const CharRoots cr = char_roots(p);
  const double ks =
      find_positive_root([&](double k) { return low_foc(p, k); }, kBracketStart, bracket_cap(cr));

  EquilibriumSolution sol;
  sol.regime = g;
  sol.k_star = ks;
  sol.value = low_value_at_boundary(p, ks);
  sol.residuals = boundary_residuals(p, sol.value, ks, low_foc(p, ks));
  sol.residuals.emplace_back("c0_at_zero", c0_jump(sol.value, 0, 0.0));
  sol.residuals.emplace_back("c1_at_zero", c1_jump(sol.value, 0, 0.0));
  return sol;
}

EquilibriumSolution solve_high(const ContestParams& p) {
  const Regime g = classify(p);
  require_regime(g, RegimeKind::High, "solve_high");
  const double ks = high_kstar_closed_form(p);

  EquilibriumSolution sol;
  sol.regime = g;
  sol.k_star = ks;
  sol.value = high_value_at_boundary(p, ks);
  sol.residuals = boundary_residuals(p, sol.value, ks, high_foc(p, ks));
  sol.residuals.emplace_back("c0_at_zero", c0_jump(sol.value, 0, 0.0));
  sol.residuals.emplace_back("c1_at_zero", c1_jump(sol.value, 0, 0.0));
  return sol;
}

EquilibriumSolution solve_medium(const ContestParams& p) {
  const Regime g = classify(p);
  if (g.kind == RegimeKind::Low)
    throw ValidationError("solve_medium requires the Medium regime; inputs classify Low");
  if (g.kind == RegimeKind::High) {
    std::ostringstream os;
    os << "inputs classify High (pi/sigma = " << g.ratio << " >= threshold " << g.threshold
       << "): the switching point k_star_star would be <= 0";
    throw DegenerateRegime(os.str());
  }
  const CharRoots cr = char_roots(p);
  const double gap = medium_switch_gap(p, cr);
  const double cap = bracket_cap(cr);
  if (cap <= gap)
    throw NoConvergence("overflow guard smaller than the switching gap; cannot bracket");
  const double excess = find_positive_root(
      [&](double x) { return medium_outer_residual(p, gap + x); }, 1e-7, cap - gap);
  const double ks = gap + excess;
  const double kss = ks - gap;
  if (!(kss > 0)) throw DegenerateRegime("computed k_star_star <= 0");

  EquilibriumSolution sol;
  sol.regime = g;
  sol.k_star = ks;
  sol.k_star_star = kss;
  sol.value = medium_value_at_boundary(p, ks, kss);
  sol.residuals = boundary_residuals(p, sol.value, ks, medium_outer_residual(p, ks));
  sol.residuals.emplace_back("c0_at_zero", c0_jump(sol.value, 1, 0.0));
  sol.residuals.emplace_back("c1_at_zero", c1_jump(sol.value, 1, 0.0));
  sol.residuals.emplace_back("c0_at_switch", c0_jump(sol.value, 2, kss));
  sol.residuals.emplace_back("c1_at_switch", c1_jump(sol.value, 2, kss));
  sol.residuals.emplace_back("c0_at_neg_switch", c0_jump(sol.value, 0, -kss));
  sol.residuals.emplace_back("c1_at_neg_switch", c1_jump(sol.value, 0, -kss));
  const double dv = region_eval(sol.value.regions[3], kss, 1);
  const double d2v = region_eval(sol.value.regions[3], kss, 2);
  sol.residuals.emplace_back("switch_indifference",
                             std::fabs(p.pi * dv + 0.5 * p.sigma * p.sigma * d2v));
  return sol;
}

EquilibriumSolution solve(const ContestParams& p) {
  switch (classify(p).kind) {
    case RegimeKind::Low: return solve_low(p);
    case RegimeKind::Medium: return solve_medium(p);
    case RegimeKind::High: return solve_high(p);
  }
  throw ValidationError("unreachable regime");
}

double best_response_kstar(const ContestParams& p, double k_star_opponent) {
  const Regime g = classify(p);
  require_regime(g, RegimeKind::Low, "best_response_kstar");
  if (!(k_star_opponent > 0)) throw ValidationError("k_star_opponent must be > 0");
  const CharRoots cr = char_roots(p);
  const double phi = profitability(p);
  const double xp = cr.xi_plus, xm = cr.xi_minus;
  const double d = xm - xp;  // < 0
  const double kj = k_star_opponent;
  auto foc = [&](double ki) {
    const double t1 = (xp + xm) * (xp * std::exp(d * ki) + xm * std::exp(d * kj));
    const double t2 = -2.0 * xp * xm * (1.0 + std::exp(d * (ki + kj)));
    const double t3 =
        -phi * (xp - xm) * (xp * std::exp(-xp * ki) - xm * std::exp(d * kj - xp * ki));
    return t1 + t2 + t3;
  };
  return find_positive_root(foc, kBracketStart, bracket_cap(cr));
}

Strategy equilibrium_strategy(const EquilibriumSolution& sol) {
  Strategy s;
  s.stop_at = sol.k_star;
  const double inf = std::numeric_limits<double>::infinity();
  switch (sol.regime.kind) {
    case RegimeKind::Low:
      s.risky_regions = {{-sol.k_star, 0.0}};
      break;
    case RegimeKind::High:
      s.risky_regions = {{-sol.k_star, inf}};
      break;
    case RegimeKind::Medium:
      s.risky_regions = {{-sol.k_star, 0.0}, {*sol.k_star_star, inf}};
      break;
  }
  return s;
}

bool strategy_risky_at(const Strategy& s, double dk) {
  for (const auto& [lo, hi] : s.risky_regions)
    if (dk >= lo && dk < hi) return true;
  return false;
}

}  // namespace contest
