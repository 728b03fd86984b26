#include "contest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

namespace {

void check_spec(const ContestParams& p, const GridSpec& s) {
  if (!(s.dk_step > 0) || !std::isfinite(s.dk_step))
    throw StabilityViolation("dk_step must be > 0");
  if (!(s.dt > 0) || !std::isfinite(s.dt)) throw StabilityViolation("dt must be > 0");
  if (!(s.k_max > s.dk_step)) throw StabilityViolation("k_max must exceed dk_step");
  if (!(s.tol > 0)) throw StabilityViolation("tol must be > 0");
  if (s.max_iter <= 0) throw StabilityViolation("max_iter must be > 0");
  const double bound = s.dk_step * s.dk_step / (2 * p.sigma * p.sigma + std::fabs(p.pi) * s.dk_step);
  if (s.dt > bound * (1 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << s.dt << " exceeds the explicit-scheme bound h^2/(2*sigma^2+|pi|h) = "
       << bound;
    throw StabilityViolation(os.str());
  }
  if (!(lambda_eff(p) * s.dt < 0.5))
    throw StabilityViolation("(hazard_lead + hazard_follow) * dt must be < 0.5");
}

// The discrete game for a FIXED dropout frontier: nodes j < b are out (value
// 0), their mirrors hold the absorbed leader constant, everyone else chooses
// safe/risky.  Policy iteration with exact tridiagonal evaluation.
struct FrontierGame {
  const ContestParams& p;
  const GridSpec& spec;
  int n, m;
  double mbar, gamma, flow_lead, flow_follow;
  double pu[4], pd[4];
  std::vector<double> grid, v, cl, cd, cu, rhs, gain;
  std::vector<GridAction> pol, poln, polprev2;
  std::vector<char> sticky_safe;
  long rounds = 0;
  double sup = std::numeric_limits<double>::infinity();

  FrontierGame(const ContestParams& p_, const GridSpec& s_) : p(p_), spec(s_) {
    const double h = spec.dk_step, dt = spec.dt;
    m = static_cast<int>(std::lround(spec.k_max / h));
    n = 2 * m;
    const double disc = std::exp(-p.r * dt);
    gamma = (1.0 - lambda_eff(p) * dt) * disc;
    mbar = lead_const(p);
    for (int a = 0; a < 2; ++a) {
      for (int o = 0; o < 2; ++o) {
        const double mu = (a - o) * p.pi;
        const double var = (a + o) * p.sigma * p.sigma;
        const double q = (var * dt + mu * mu * dt * dt) / (h * h);
        const double drift = mu * dt / h;
        pu[a * 2 + o] = 0.5 * (q + drift);
        pd[a * 2 + o] = 0.5 * (q - drift);
        if (pu[a * 2 + o] < 0 || pd[a * 2 + o] < 0 || pu[a * 2 + o] + pd[a * 2 + o] > 1)
          throw StabilityViolation("trinomial move probabilities out of range");
      }
    }
    flow_lead =
        (p.hazard_lead * p.prize_win + p.hazard_follow * p.prize_lose) * dt * disc - p.c * dt;
    flow_follow =
        (p.hazard_follow * p.prize_win + p.hazard_lead * p.prize_lose) * dt * disc - p.c * dt;
    grid.resize(n);
    for (int j = 0; j < n; ++j) grid[j] = (j - m + 0.5) * h;
    v.assign(n, 0.0);
    cl.resize(n); cd.resize(n); cu.resize(n); rhs.resize(n); gain.resize(n);
    pol.assign(n, GridAction::Risky);
    poln = polprev2 = pol;
    sticky_safe.assign(n, 0);
  }

  bool active(int b, int j) const { return j >= b && j <= n - 1 - b; }

  void evaluate(int b) {
    for (int j = 0; j < n; ++j) {
      cl[j] = cu[j] = 0;
      cd[j] = 1;
      if (j < b) {
        rhs[j] = 0;
      } else if (j > n - 1 - b) {
        rhs[j] = mbar;
      } else {
        const int a = pol[j] == GridAction::Risky ? 1 : 0;
        const int aopp = pol[n - 1 - j] == GridAction::Risky ? 1 : 0;
        const int k = a * 2 + aopp;
        cd[j] = 1 - gamma * (1 - pu[k] - pd[k]);
        rhs[j] = grid[j] > 0 ? flow_lead : flow_follow;
        if (j > 0) cl[j] = -gamma * pd[k];  // the -k_max boundary holds 0
        if (j < n - 1) cu[j] = -gamma * pu[k];
        else rhs[j] += gamma * pu[k] * mbar;
      }
    }
    for (int j = 1; j < n; ++j) {
      const double w = cl[j] / cd[j - 1];
      cd[j] -= w * cu[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    double prev = rhs[n - 1] / cd[n - 1];
    sup = std::fabs(prev - v[n - 1]);
    v[n - 1] = prev;
    for (int j = n - 2; j >= 0; --j) {
      prev = (rhs[j] - cu[j] * v[j + 1]) / cd[j];
      sup = std::max(sup, std::fabs(prev - v[j]));
      v[j] = prev;
    }
  }

  void candidates(int b, int j, double out[2]) const {
    const int aopp = active(b, n - 1 - j) && pol[n - 1 - j] == GridAction::Risky ? 1 : 0;
    const double flow = grid[j] > 0 ? flow_lead : flow_follow;
    const double down = j > 0 ? v[j - 1] : 0.0;
    const double up = j < n - 1 ? v[j + 1] : mbar;
    for (int a = 0; a < 2; ++a) {
      const int k = a * 2 + aopp;
      out[a] = flow + gamma * (pu[k] * up + pd[k] * down + (1 - pu[k] - pd[k]) * v[j]);
    }
  }

  // One synchronized safe/risky best-response pass; returns change count.
  int improve(int b) {
    int changes = 0;
    for (int j = b; j <= n - 1 - b; ++j) {
      double cand[2];
      candidates(b, j, cand);
      GridAction want =
          !sticky_safe[j] && cand[1] > cand[0] + spec.tol ? GridAction::Risky : GridAction::Safe;
      poln[j] = want;
      if (want != pol[j]) {
        ++changes;
        gain[j] = std::fabs(cand[want == GridAction::Risky ? 1 : 0] -
                            cand[pol[j] == GridAction::Risky ? 1 : 0]);
      } else {
        gain[j] = 0;
      }
    }
    return changes;
  }

  // Solve the fixed-frontier subgame to a fixed policy and exact values.
  void settle(int b) {
    std::fill(sticky_safe.begin(), sticky_safe.end(), 0);
    bool single_switch = false;
    int last_single = -1;
    const long cap = std::min<long>(spec.max_iter, 100000);
    for (long round = 0; round < cap; ++round) {
      ++rounds;
      evaluate(b);
      const int changes = improve(b);
      if (changes == 0 && sup < spec.tol) return;
      if (changes > 0 && single_switch) {
        int pick = -1;
        double best = -1;
        for (int j = b; j <= n - 1 - b; ++j)
          if (poln[j] != pol[j] && gain[j] > best) {
            best = gain[j];
            pick = j;
          }
        // A node flipping back within tolerance is indifferent: ties go safe.
        if (pick == last_single) sticky_safe[pick] = 1;
        last_single = pick;
        for (int j = b; j <= n - 1 - b; ++j)
          if (j != pick) poln[j] = pol[j];
        if (sticky_safe[pick]) poln[pick] = GridAction::Safe;
      } else if (changes > 0 && round >= 2 && poln == polprev2 && poln != pol) {
        single_switch = true;
      }
      std::swap(polprev2, pol);
      pol = poln;
    }
    throw NoConvergence("fixed-frontier policy iteration did not settle");
  }
};

}  // namespace

OracleResult solve_grid_mpe(const ContestParams& p, const GridSpec& spec) {
  validate(p);
  check_spec(p, spec);

  FrontierGame game(p, spec);
  const int n = game.n, m = game.m;
  if (m < 2) throw StabilityViolation("k_max too small for the grid spacing");

  // Move the dropout frontier one node at a time with exact re-evaluation in
  // between: the active region shrinks only while its outermost state has
  // negative value, so the loop lands on the equilibrium with the largest
  // sustainable continuation region.
  int b = 0;
  long moves = 0;
  int prev_b = -1, prev_prev_b = -1;
  while (true) {
    if (++moves > 4L * n) throw NoConvergence("dropout frontier failed to stabilize");
    game.settle(b);
    if (b < m && game.v[b] < 0) {
      if (prev_b == b + 1 && prev_prev_b == b) break;  // knife-edge: keep the wider region
      prev_prev_b = prev_b;
      prev_b = b;
      ++b;
      continue;
    }
    if (b > 0) {
      double cand[2];
      game.candidates(b, b - 1, cand);
      if (std::max(cand[0], cand[1]) >= 0) {
        prev_prev_b = prev_b;
        prev_b = b;
        --b;
        continue;
      }
    }
    break;
  }
  if (game.rounds >= spec.max_iter)
    throw NoConvergence("grid policy iteration exceeded max_iter rounds");

  OracleResult res;
  res.spec = spec;
  res.grid = game.grid;
  res.value_on_grid = game.v;
  res.policy.assign(n, GridAction::Drop);
  for (int j = b; j <= n - 1 - b; ++j) res.policy[j] = game.pol[j];
  for (int j = n - b; j < n; ++j) res.policy[j] = GridAction::Safe;
  res.absorb_lo = 0.0;
  res.absorb_hi = game.mbar;
  res.iterations = game.rounds;
  res.sup_change = game.sup;

  res.k_star_est = std::numeric_limits<double>::infinity();
  for (int j = m - 1; j >= 0; --j) {
    if (res.policy[j] == GridAction::Drop) {
      res.k_star_est = -res.grid[j];
      break;
    }
  }
  for (int j = m; j < n; ++j) {
    if (res.policy[j] == GridAction::Risky) {
      if (j > m) res.k_star_star_est = res.grid[j];
      break;
    }
  }
  return res;
}

double grid_value_at(const OracleResult& result, double dk) {
  const double kmax = result.spec.k_max;
  if (!(std::fabs(dk) <= kmax)) throw OutOfDomain("dk outside the oracle truncation");
  const std::vector<double>& g = result.grid;
  const std::vector<double>& val = result.value_on_grid;
  const int n = static_cast<int>(g.size());
  if (dk <= g.front()) {
    const double t = (dk + kmax) / (g.front() + kmax);
    return result.absorb_lo * (1 - t) + val.front() * t;
  }
  if (dk >= g.back()) {
    const double t = (dk - g.back()) / (kmax - g.back());
    return val.back() * (1 - t) + result.absorb_hi * t;
  }
  const double pos = (dk - g.front()) / result.spec.dk_step;
  const int j = std::min(n - 2, std::max(0, static_cast<int>(std::floor(pos))));
  const double t = pos - j;
  return val[j] * (1 - t) + val[j + 1] * t;
}

const char* grid_action_name(GridAction a) {
  switch (a) {
    case GridAction::Drop: return "drop";
    case GridAction::Safe: return "safe";
    case GridAction::Risky: return "risky";
  }
  return "?";
}

void write_oracle_csv(const OracleResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open oracle csv path for writing: " + path);
  out << "dk,value,policy\n";
  char buf[64];
  for (std::size_t j = 0; j < result.grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,", result.grid[j], result.value_on_grid[j]);
    out << buf << grid_action_name(result.policy[j]) << "\n";
  }
}

}  // namespace contest
