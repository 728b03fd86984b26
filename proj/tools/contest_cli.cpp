#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "contest/design.hpp"
#include "contest/errors.hpp"
#include "contest/io.hpp"
#include "contest/model.hpp"
#include "contest/oracle.hpp"
#include "contest/sim.hpp"
#include "contest/solver.hpp"
#include "contest/verify.hpp"

using namespace contest;

namespace {

struct OutputOpts {
  std::string path;
  bool no_timestamp = false;
};

void add_output_opts(CLI::App* sub, OutputOpts& o) {
  sub->add_option("--output", o.path, "write the result to this file instead of stdout");
  sub->add_flag("--no-timestamp", o.no_timestamp,
                "omit generated_at so identical runs are byte-identical");
}

void emit(const OutputOpts& o, const std::string& text) {
  if (o.path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(o.path, text);
  }
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

int run_classify(const std::string& params_file, const OutputOpts& out) {
  const ContestParams p = params_from_file(params_file);
  const Regime regime = classify(p);
  Json j;
  j["manifest"] = run_manifest("classify", to_json(p), std::nullopt, !out.no_timestamp);
  j["params"] = to_json(p);
  Json reg = to_json(regime);
  reg["phi_bar"] = jnum(profitability(p));
  j["classification"] = reg;
  emit(out, pretty(j));
  return 0;
}

int run_solve(const std::string& params_file, bool with_verify,
              const std::vector<double>& oracle_args, const std::string& oracle_csv,
              const OutputOpts& out) {
  const ContestParams p = params_from_file(params_file);
  const EquilibriumSolution sol = solve(p);
  Json j;
  j["manifest"] = run_manifest("solve", to_json(p), std::nullopt, !out.no_timestamp);
  j["params"] = to_json(p);
  j["solution"] = to_json(sol);
  if (with_verify) j["verification"] = to_json(verify(sol, p));
  std::optional<OracleResult> oracle;
  if (!oracle_args.empty()) {
    GridSpec spec;
    spec.dk_step = oracle_args[0];
    spec.dt = oracle_args[1] > 0
                  ? oracle_args[1]
                  : spec.dk_step * spec.dk_step /
                        (2 * p.sigma * p.sigma + std::fabs(p.pi) * spec.dk_step);
    spec.k_max = std::max(2.5, 3 * sol.k_star);
    oracle = solve_grid_mpe(p, spec);
    Json oj = to_json(*oracle);
    oj["abs_error_k_star"] = jnum(std::fabs(oracle->k_star_est - sol.k_star));
    if (oracle->k_star_star_est && sol.k_star_star)
      oj["abs_error_k_star_star"] = jnum(std::fabs(*oracle->k_star_star_est - *sol.k_star_star));
    j["oracle"] = oj;
  }
  emit(out, pretty(j));
  if (oracle && !oracle_csv.empty()) write_oracle_csv(*oracle, oracle_csv);
  return 0;
}

int run_simulate(const std::string& params_file, const SimConfig& cfg, const OutputOpts& out) {
  const ContestParams p = params_from_file(params_file);
  const EquilibriumSolution sol = solve(p);
  const SimResult res = simulate(p, sol, cfg);
  Json j;
  j["manifest"] = run_manifest("simulate", to_json(p), cfg.seed, !out.no_timestamp);
  j["params"] = to_json(p);
  Json solj = to_json(sol.regime);
  solj["k_star"] = jnum(sol.k_star);
  if (sol.k_star_star) solj["k_star_star"] = jnum(*sol.k_star_star);
  j["solution"] = solj;
  j["simulation"] = to_json(res);
  emit(out, pretty(j));
  return 0;
}

int run_sweep(const std::string& params_file, const std::string& vary, double from, double to,
              long n, const OutputOpts& out) {
  const ContestParams base = params_from_file(params_file);
  if (n < 1) throw ValidationError("--n must be >= 1");
  double ContestParams::*field = nullptr;
  if (vary == "P") field = &ContestParams::prize_win;
  else if (vary == "c") field = &ContestParams::c;
  else if (vary == "pi") field = &ContestParams::pi;
  else if (vary == "sigma") field = &ContestParams::sigma;
  else if (vary == "lambda") field = &ContestParams::hazard_lead;
  else throw ValidationError("--vary must be one of P, c, pi, sigma, lambda");

  std::string text =
      "# manifest: " +
      run_manifest("sweep", to_json(base), std::nullopt, !out.no_timestamp).dump() + "\n";
  text += vary + ",k_star,k_star_star,regime,error\n";
  char buf[64];
  for (long i = 0; i < n; ++i) {
    const double v = n == 1 ? from : from + (to - from) * static_cast<double>(i) / (n - 1);
    ContestParams p = base;
    p.*field = v;
    std::snprintf(buf, sizeof buf, "%.12g", v);
    text += buf;
    try {
      const EquilibriumSolution sol = solve(p);
      std::snprintf(buf, sizeof buf, ",%.12g,", sol.k_star);
      text += buf;
      if (sol.k_star_star) {
        std::snprintf(buf, sizeof buf, "%.12g", *sol.k_star_star);
        text += buf;
      }
      text += std::string(",") + regime_name(sol.regime.kind) + ",";
    } catch (const ContestError& e) {
      std::string msg = e.what();
      for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      text += ",,,," + msg;
    }
    text += "\n";
  }
  emit(out, text);
  return 0;
}

int run_design(const std::string& problem_file, const OutputOpts& out) {
  const DesignProblem prob = design_from_file(problem_file);
  const PrizeAllocation best = optimize_prizes(prob);
  Json j;
  Json probj;
  probj["budget"] = jnum(prob.budget);
  probj["hazard_lead"] = jnum(prob.hazard_lead);
  probj["hazard_follow"] = jnum(prob.hazard_follow);
  probj["cost"] = jnum(prob.cost);
  probj["r"] = jnum(prob.r);
  probj["pi"] = jnum(prob.pi);
  probj["sigma"] = jnum(prob.sigma);
  probj["k0"] = jnum(prob.k0);
  j["manifest"] = run_manifest("design", probj, std::nullopt, !out.no_timestamp);
  j["problem"] = probj;
  j["allocation"] = to_json(best);
  j["objectives"] = to_json(objective_values(prob, best));

  // Ranking agreement across a default family of spreads around the optimum,
  // reported whenever at least two of them keep the profitability finite.
  std::vector<PrizeAllocation> family;
  for (const double frac : {1.0, 0.9, 0.8, 0.7, 0.6}) {
    const double d = (prob.budget / 2) * frac;
    PrizeAllocation a;
    a.prize_win = prob.budget / 2 + d;
    a.prize_lose = prob.budget / 2 - d;
    const double denom = prob.cost - (prob.hazard_follow * a.prize_win +
                                      prob.hazard_lead * a.prize_lose);
    a.phi_bar = denom > 0
                    ? (prob.hazard_lead - prob.hazard_follow) * (a.prize_win - a.prize_lose) /
                          denom
                    : std::numeric_limits<double>::infinity();
    a.case_label = "spread";
    if (std::isfinite(a.phi_bar) && a.phi_bar > 1) family.push_back(a);
  }
  if (family.size() >= 2) {
    j["equivalence"] = to_json(check_objective_equivalence(prob, family));
  } else {
    j["equivalence"] = nullptr;
  }
  emit(out, pretty(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov perfect equilibria of two-player dynamic contests: closed-form "
               "solver, grid oracle, Monte Carlo simulation, and prize design"};
  app.require_subcommand(1);

  std::string params_file;
  OutputOpts out_classify, out_solve, out_sim, out_sweep, out_design;

  CLI::App* sub_classify =
      app.add_subcommand("classify", "report the return regime of the risky move");
  sub_classify->add_option("params", params_file, "parameter JSON file")->required();
  add_output_opts(sub_classify, out_classify);

  bool with_verify = false;
  std::vector<double> oracle_args;
  std::string oracle_csv;
  CLI::App* sub_solve = app.add_subcommand("solve", "solve for the equilibrium boundaries");
  sub_solve->add_option("params", params_file, "parameter JSON file")->required();
  sub_solve->add_flag("--verify", with_verify,
                      "append Bellman/deviation/shape verification of the solution");
  sub_solve
      ->add_option("--oracle", oracle_args,
                   "append an independent grid cross-check; takes H DT (DT 0 picks the "
                   "stability bound)")
      ->expected(2);
  sub_solve->add_option("--oracle-csv", oracle_csv, "also dump the oracle grid to this CSV")
      ->needs(sub_solve->get_option("--oracle"));
  add_output_opts(sub_solve, out_solve);

  SimConfig cfg;
  CLI::App* sub_sim = app.add_subcommand("simulate", "Monte Carlo the equilibrium play");
  sub_sim->add_option("params", params_file, "parameter JSON file")->required();
  sub_sim->add_option("--paths", cfg.n_paths, "number of paths")->capture_default_str();
  sub_sim->add_option("--dt", cfg.dt, "Euler step")->capture_default_str();
  sub_sim->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  sub_sim->add_option("--k0", cfg.k0, "initial gap")->capture_default_str();
  sub_sim->add_option("--horizon-cap", cfg.horizon_cap, "censoring horizon")
      ->capture_default_str();
  sub_sim->add_option("--trace", cfg.trace_path, "CSV trace of path 0 (t, gap, actions)");
  sub_sim->add_option("--threads", cfg.n_threads, "worker threads (0 = hardware)")
      ->capture_default_str();
  add_output_opts(sub_sim, out_sim);

  std::string vary;
  double from = 0, to = 0;
  long npoints = 0;
  CLI::App* sub_sweep = app.add_subcommand("sweep", "solve along a parameter grid (CSV)");
  sub_sweep->add_option("params", params_file, "parameter JSON file")->required();
  sub_sweep->add_option("--vary", vary, "P, c, pi, sigma, or lambda")->required();
  sub_sweep->add_option("--from", from, "grid start")->required();
  sub_sweep->add_option("--to", to, "grid end")->required();
  sub_sweep->add_option("--n", npoints, "grid points")->required();
  add_output_opts(sub_sweep, out_sweep);

  CLI::App* sub_design =
      app.add_subcommand("design", "budget-optimal prize split and objective report");
  sub_design->add_option("problem", params_file, "design problem JSON file")->required();
  add_output_opts(sub_design, out_design);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sub_classify)) return run_classify(params_file, out_classify);
    if (app.got_subcommand(sub_solve))
      return run_solve(params_file, with_verify, oracle_args, oracle_csv, out_solve);
    if (app.got_subcommand(sub_sim)) return run_simulate(params_file, cfg, out_sim);
    if (app.got_subcommand(sub_sweep))
      return run_sweep(params_file, vary, from, to, npoints, out_sweep);
    if (app.got_subcommand(sub_design)) return run_design(params_file, out_design);
  } catch (const ResolutionViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const NoConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const DegenerateRegime& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const AssumptionViolated& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const KnifeEdge& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const ContestError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
