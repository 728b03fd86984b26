#include "contest/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "contest/errors.hpp"

namespace contest {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBridgeCutoff = 36.0;  // skip bridge draws when p < e^-36

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Per-path generator: mt19937_64 seeded from a splitmix64 substream of
// (master seed, path index), with (0,1)-open uniforms and cached Box-Muller
// normals.
struct RandomStream {
  std::mt19937_64 eng;
  double cached = 0;
  bool has_cached = false;

  RandomStream(std::uint64_t master, std::uint64_t path) {
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (path + 1));
    std::seed_seq seq{splitmix64(s), splitmix64(s), splitmix64(s), splitmix64(s)};
    eng.seed(seq);
  }
  double uniform() { return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53; }
  double normal() {
    if (has_cached) {
      has_cached = false;
      return cached;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = kTwoPi * uniform();
    cached = r * std::sin(a);
    has_cached = true;
    return r * std::cos(a);
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }
};

struct Cell {
  double hi;         // dynamics apply on [previous hi, hi)
  double mu_dt;
  double vol_sqdt;
  double p_succ;     // per-step success probability on this cell
  double p_win;      // P(player i is the winner | success here)
  char act_i, act_j; // 'r' or 's'
};

struct StepTable {
  std::vector<Cell> cells;
  Cell tie;          // gap exactly 0: both carry the leader hazard and the
                     // follower-side action (each agent is weakly behind)
  double lo_bound, hi_bound;

  const Cell& locate(double x) const {
    if (x == 0.0) return tie;
    std::size_t idx = 0;
    while (idx + 1 < cells.size() && x >= cells[idx].hi) ++idx;
    return cells[idx];
  }
};

struct TraceRow {
  double t, dk;
  char act_i, act_j;
};

// Per-chunk accumulators, reduced sequentially in chunk order.
struct Sums {
  double pay = 0, pay2 = 0;
  double win_i = 0, win_j = 0;
  double st = 0, st2 = 0;
  double ft = 0, ft2 = 0;
  std::vector<double> lap, lap2;
  long caps = 0;
};

Cell make_cell(const ContestParams& p, const SimConfig& cfg, double hi, bool risky_i,
               bool risky_j, double li, double lj) {
  Cell c;
  c.hi = hi;
  const int ai = risky_i ? 1 : 0, aj = risky_j ? 1 : 0;
  c.mu_dt = (ai - aj) * p.pi * cfg.dt;
  c.vol_sqdt = std::sqrt((ai + aj) * p.sigma * p.sigma * cfg.dt);
  c.p_succ = 1.0 - std::exp(-(li + lj) * cfg.dt);
  c.p_win = li / (li + lj);
  c.act_i = risky_i ? 'r' : 's';
  c.act_j = risky_j ? 'r' : 's';
  return c;
}

StepTable build_table(const ContestParams& p, const Strategy& si, const Strategy& sj,
                      const SimConfig& cfg) {
  StepTable tab;
  tab.lo_bound = -si.stop_at;
  tab.hi_bound = sj.stop_at;
  std::vector<double> pts{tab.lo_bound, 0.0, tab.hi_bound};
  for (const auto& iv : si.risky_regions) {
    if (std::isfinite(iv.first)) pts.push_back(iv.first);
    if (std::isfinite(iv.second)) pts.push_back(iv.second);
  }
  for (const auto& iv : sj.risky_regions) {  // agent j sees gap -x
    if (std::isfinite(iv.first)) pts.push_back(-iv.first);
    if (std::isfinite(iv.second)) pts.push_back(-iv.second);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> cuts;
  for (double v : pts) {
    if (v < tab.lo_bound || v > tab.hi_bound) continue;
    if (cuts.empty() || v > cuts.back() + 1e-14) cuts.push_back(v);
  }

  double min_width = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
    const double lo = cuts[t], hi = cuts[t + 1];
    min_width = std::min(min_width, hi - lo);
    const double mid = 0.5 * (lo + hi);
    const bool ri = strategy_risky_at(si, mid);
    const bool rj = strategy_risky_at(sj, -mid);
    const double li = mid > 0 ? p.hazard_lead : p.hazard_follow;
    const double lj = -mid > 0 ? p.hazard_lead : p.hazard_follow;
    tab.cells.push_back(make_cell(p, cfg, hi, ri, rj, li, lj));
  }

  // The tie state: each agent is weakly behind, so both take the
  // follower-side action and both carry the leader hazard.
  const double eps = 1e-9 * std::min(si.stop_at, sj.stop_at);
  tab.tie = make_cell(p, cfg, 0.0, strategy_risky_at(si, -eps), strategy_risky_at(sj, -eps),
                      p.hazard_lead, p.hazard_lead);

  // A step must not be able to leap across a strategy region.
  const double reach =
      std::fabs(p.pi) * cfg.dt + 3.0 * std::sqrt(2.0) * p.sigma * std::sqrt(cfg.dt);
  if (!(reach <= min_width / 4)) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " gives a typical step of " << reach
       << ", too coarse for the narrowest strategy region " << min_width
       << " (need step < width/4)";
    throw ResolutionViolation(os.str());
  }
  return tab;
}

void check_config(const SimConfig& cfg) {
  if (cfg.n_paths < 1) throw ValidationError("n_paths must be >= 1");
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw ValidationError("dt must be > 0");
  if (!(cfg.horizon_cap > 0)) throw ValidationError("horizon_cap must be > 0");
  if (cfg.n_threads < 0) throw ValidationError("n_threads must be >= 0");
  for (double th : cfg.laplace_thetas)
    if (!(th > 0)) throw ValidationError("laplace thetas must be > 0");
}

}  // namespace

SimResult simulate(const ContestParams& p, const Strategy& strat_i, const Strategy& strat_j,
                   const SimConfig& cfg) {
  validate(p);
  check_config(cfg);
  if (!(strat_i.stop_at > 0) || !(strat_j.stop_at > 0))
    throw ValidationError("strategies must carry positive stopping boundaries");
  if (!(cfg.k0 > -strat_i.stop_at && cfg.k0 < strat_j.stop_at))
    throw OutOfDomain("k0 must lie strictly inside the continuation region");

  const StepTable tab = build_table(p, strat_i, strat_j, cfg);
  std::vector<double> thetas = cfg.laplace_thetas;
  if (thetas.empty()) thetas = {p.hazard_lead, p.hazard_lead + 0.05};
  const std::size_t nth = thetas.size();

  const double dt = cfg.dt;
  const long cap_steps = static_cast<long>(std::ceil(cfg.horizon_cap / dt - 1e-9));
  const double r = p.r, pw = p.prize_win, pl = p.prize_lose, cr = p.c / p.r;
  const auto cost_to = [cr, r](double t) { return cr * (1.0 - std::exp(-r * t)); };

  constexpr long kChunk = 4096;
  const long n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
  std::vector<Sums> partial(n_chunks);
  for (auto& s : partial) {
    s.lap.assign(nth, 0.0);
    s.lap2.assign(nth, 0.0);
  }
  std::vector<TraceRow> trace;
  const bool want_trace = !cfg.trace_path.empty();

  auto run_path = [&](std::uint64_t path_idx, Sums& acc, std::vector<TraceRow>* tr) {
    RandomStream rs(cfg.seed, path_idx);
    double x = cfg.k0, t = 0;
    long step = 0;
    bool succeeded = false;
    double payoff = 0, ts = 0, ft = 0;
    double wi = 0, wj = 0;
    double tau = std::numeric_limits<double>::infinity();
    while (true) {
      const Cell& cell = tab.locate(x);
      if (!succeeded) {
        if (tr && static_cast<long>(tr->size()) < cfg.trace_max_rows)
          tr->push_back({t, x, cell.act_i, cell.act_j});
        if (rs.uniform() < cell.p_succ) {
          succeeded = true;
          ts = ft = t + dt;
          if (rs.uniform() < cell.p_win) wi = 1;
          else wj = 1;
          payoff = (wi ? pw : pl) * std::exp(-r * ts) - cost_to(ts);
        }
      }
      const double x_prev = x;
      x += cell.mu_dt + cell.vol_sqdt * rs.normal();
      t += dt;
      ++step;
      // Exit detection.  Endpoints beyond a barrier cross outright; interior
      // steps may still have touched a barrier in between, with the
      // Brownian-bridge probability e^{-2 d0 d1 / (vol^2 dt)} given the two
      // endpoint distances (drift drops out of the bridge law; the dynamics
      // are constant within a cell).  Grid-time-only absorption would
      // overstate first-passage times by O(sqrt(dt)), far beyond the Monte
      // Carlo error the cross-checks run at.
      bool crossed = false, top = false;
      double t_cross = t;
      if (x >= tab.hi_bound) {
        crossed = top = true;
      } else if (x <= tab.lo_bound) {
        crossed = true;
      } else {
        const double v2 = cell.vol_sqdt * cell.vol_sqdt;
        if (v2 > 0) {
          const double eh = 2 * (tab.hi_bound - x_prev) * (tab.hi_bound - x) / v2;
          if (eh < kBridgeCutoff && rs.uniform() < std::exp(-eh)) {
            crossed = top = true;
            t_cross = t - 0.5 * dt;
          } else {
            const double el = 2 * (x_prev - tab.lo_bound) * (x - tab.lo_bound) / v2;
            if (el < kBridgeCutoff && rs.uniform() < std::exp(-el)) {
              crossed = true;
              t_cross = t - 0.5 * dt;
            }
          }
        }
      }
      if (crossed) {
        tau = t_cross;
        if (!succeeded) {
          ft = t_cross;
          const double solo = rs.exponential(p.hazard_lead);
          ts = t_cross + solo;
          if (top) {  // opponent dropped; i finishes alone
            wi = 1;
            payoff = pw * std::exp(-r * ts) - cost_to(ts);
          } else {  // i dropped and stops paying; loser prize at success
            wj = 1;
            payoff = pl * std::exp(-r * ts) - cost_to(t_cross);
          }
        }
        break;
      }
      if (step >= cap_steps) {
        if (!succeeded) {
          payoff = -cost_to(t);
          ts = ft = t;
          ++acc.caps;
        }
        break;
      }
    }
    acc.pay += payoff;
    acc.pay2 += payoff * payoff;
    acc.win_i += wi;
    acc.win_j += wj;
    acc.st += ts;
    acc.st2 += ts * ts;
    acc.ft += ft;
    acc.ft2 += ft * ft;
    for (std::size_t q = 0; q < nth; ++q) {
      const double y = std::isfinite(tau) ? std::exp(-thetas[q] * tau) : 0.0;
      acc.lap[q] += y;
      acc.lap2[q] += y * y;
    }
  };

  auto run_chunk = [&](long chunk) {
    Sums& acc = partial[chunk];
    const long lo = chunk * kChunk;
    const long hi = std::min(cfg.n_paths, lo + kChunk);
    for (long i = lo; i < hi; ++i)
      run_path(static_cast<std::uint64_t>(i), acc,
               want_trace && i == 0 ? &trace : nullptr);
  };

  int workers = cfg.n_threads;
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  workers = static_cast<int>(std::min<long>(workers, n_chunks));
  if (workers <= 1) {
    for (long chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk);
  } else {
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        while (true) {
          const long chunk = next.fetch_add(1);
          if (chunk >= n_chunks) return;
          run_chunk(chunk);
        }
      });
    for (auto& th : pool) th.join();
  }

  Sums total;
  total.lap.assign(nth, 0.0);
  total.lap2.assign(nth, 0.0);
  for (const Sums& s : partial) {
    total.pay += s.pay;
    total.pay2 += s.pay2;
    total.win_i += s.win_i;
    total.win_j += s.win_j;
    total.st += s.st;
    total.st2 += s.st2;
    total.ft += s.ft;
    total.ft2 += s.ft2;
    total.caps += s.caps;
    for (std::size_t q = 0; q < nth; ++q) {
      total.lap[q] += s.lap[q];
      total.lap2[q] += s.lap2[q];
    }
  }

  const double n = static_cast<double>(cfg.n_paths);
  const auto mean_se = [n](double s, double s2, double& mean, double& se) {
    mean = s / n;
    se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
  };
  SimResult res;
  res.n_paths = cfg.n_paths;
  res.dt = cfg.dt;
  res.k0 = cfg.k0;
  res.seed = cfg.seed;
  mean_se(total.pay, total.pay2, res.mean_discounted_payoff, res.payoff_std_error);
  mean_se(total.win_i, total.win_i, res.win_prob, res.win_prob_std_error);
  res.win_prob_opponent = total.win_j / n;
  mean_se(total.st, total.st2, res.mean_success_time, res.success_time_std_error);
  mean_se(total.ft, total.ft2, res.mean_follower_time, res.follower_time_std_error);
  res.laplace_at.resize(nth);
  for (std::size_t q = 0; q < nth; ++q) {
    res.laplace_at[q].theta = thetas[q];
    mean_se(total.lap[q], total.lap2[q], res.laplace_at[q].estimate,
            res.laplace_at[q].std_error);
  }
  res.horizon_cap_hits = total.caps;

  if (want_trace) {
    std::ofstream out(cfg.trace_path);
    if (!out) throw ValidationError("cannot open trace path for writing: " + cfg.trace_path);
    out << "t,dk,action_i,action_j\n";
    char buf[64];
    for (const TraceRow& row : trace) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,", row.t, row.dk);
      out << buf << (row.act_i == 'r' ? "risky" : "safe") << ','
          << (row.act_j == 'r' ? "risky" : "safe") << "\n";
    }
  }
  return res;
}

SimResult simulate(const ContestParams& p, const EquilibriumSolution& sol,
                   const SimConfig& cfg) {
  const Strategy s = equilibrium_strategy(sol);
  return simulate(p, s, s, cfg);
}

double laplace_psi_analytic(double theta, double k_star, double k0, double drift_mag,
                            double sigma) {
  if (!(theta > 0) || !std::isfinite(theta)) throw OutOfDomain("theta must be > 0");
  if (!(k_star > 0)) throw OutOfDomain("k_star must be > 0");
  if (!(k0 >= 0 && k0 <= k_star)) throw OutOfDomain("k0 must lie in [0, k_star]");
  if (!(drift_mag >= 0)) throw OutOfDomain("drift_mag must be >= 0");
  if (!(sigma > 0)) throw OutOfDomain("sigma must be > 0");
  const double s2 = sigma * sigma;
  const double q = std::sqrt(drift_mag * drift_mag + 2 * theta * s2);
  const double num = (q + drift_mag) + std::exp(-2 * k0 * q / s2) * (q - drift_mag);
  const double den = (q + drift_mag) + std::exp(-2 * k_star * q / s2) * (q - drift_mag);
  return std::exp((k_star - k0) * (drift_mag - q) / s2) * num / den;
}

ExpectedTimes expected_times(const ContestParams& p, double k_star, double k0) {
  validate(p);
  if (p.pi > 0)
    throw OutOfDomain("closed-form expected times apply to the single-risky gap process "
                      "(pi <= 0); use simulate otherwise");
  const double leff = lambda_eff(p);
  const double psi_all = laplace_psi_analytic(leff, k_star, k0, -p.pi, p.sigma);
  const double psi_lead = laplace_psi_analytic(p.hazard_lead, k_star, k0, -p.pi, p.sigma);
  ExpectedTimes out;
  out.follower_time = (1.0 - psi_all) / leff;
  out.success_time = out.follower_time + psi_lead / p.hazard_lead;
  return out;
}

}  // namespace contest
