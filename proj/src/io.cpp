#include "contest/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

const char* const kToolVersion = "1.0.0";

double round12(double value) {
  if (!std::isfinite(value)) return value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

Json jnum(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round12(value);
}

namespace {

Json parse_object(const std::string& text, const char* what) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
  return j;
}

Json load_object(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(what) + ": cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_object(buf.str(), what);
}

// Exactly the listed keys, each a finite-or-not number; anything else is
// rejected by name so CLI errors point at the offending field.
void extract_exact(const Json& j, const char* what,
                   std::initializer_list<std::pair<const char*, double*>> fields) {
  for (const auto& [key, slot] : fields) {
    const auto it = j.find(key);
    if (it == j.end())
      throw ValidationError(std::string(what) + ": missing key \"" + key + "\"");
    if (!it->is_number())
      throw ValidationError(std::string(what) + ": key \"" + key + "\" must be a number");
    *slot = it->get<double>();
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, slot] : fields)
      if (key == name) known = true;
    if (!known) throw ValidationError(std::string(what) + ": unknown key \"" + key + "\"");
  }
}

ContestParams params_from_object(const Json& j) {
  ContestParams p{};
  extract_exact(j, "params",
                {{"r", &p.r},
                 {"c", &p.c},
                 {"prize_win", &p.prize_win},
                 {"prize_lose", &p.prize_lose},
                 {"hazard_lead", &p.hazard_lead},
                 {"hazard_follow", &p.hazard_follow},
                 {"pi", &p.pi},
                 {"sigma", &p.sigma}});
  return p;
}

DesignProblem design_from_object(const Json& j) {
  DesignProblem d{};
  extract_exact(j, "design problem",
                {{"budget", &d.budget},
                 {"hazard_lead", &d.hazard_lead},
                 {"hazard_follow", &d.hazard_follow},
                 {"cost", &d.cost},
                 {"r", &d.r},
                 {"pi", &d.pi},
                 {"sigma", &d.sigma},
                 {"k0", &d.k0}});
  return d;
}

}  // namespace

ContestParams params_from_json(const Json& j) { return params_from_object(j); }

ContestParams params_from_file(const std::string& path) {
  return params_from_object(load_object(path, "params"));
}

DesignProblem design_from_json(const Json& j) { return design_from_object(j); }

DesignProblem design_from_file(const std::string& path) {
  return design_from_object(load_object(path, "design problem"));
}

Json to_json(const ContestParams& p) {
  Json j;
  j["r"] = jnum(p.r);
  j["c"] = jnum(p.c);
  j["prize_win"] = jnum(p.prize_win);
  j["prize_lose"] = jnum(p.prize_lose);
  j["hazard_lead"] = jnum(p.hazard_lead);
  j["hazard_follow"] = jnum(p.hazard_follow);
  j["pi"] = jnum(p.pi);
  j["sigma"] = jnum(p.sigma);
  return j;
}

Json to_json(const Regime& regime) {
  Json j;
  j["regime"] = regime_name(regime.kind);
  j["ratio"] = jnum(regime.ratio);
  j["threshold"] = jnum(regime.threshold);
  return j;
}

Json to_json(const EquilibriumSolution& sol) {
  Json j = to_json(sol.regime);
  j["k_star"] = jnum(sol.k_star);
  if (sol.k_star_star) j["k_star_star"] = jnum(*sol.k_star_star);
  const Strategy strat = equilibrium_strategy(sol);
  Json regions = Json::array();
  for (const auto& iv : strat.risky_regions)
    regions.push_back(Json::array({jnum(iv.first), jnum(iv.second)}));
  j["strategy"] = Json{{"stop_at", jnum(strat.stop_at)}, {"risky_regions", regions}};
  Json residuals;
  for (const auto& [name, value] : sol.residuals) residuals[name] = jnum(value);
  j["residuals"] = residuals;
  Json value;
  value["domain"] = Json::array({jnum(sol.value.domain_lo), jnum(sol.value.domain_hi)});
  Json vregions = Json::array();
  for (const Region& reg : sol.value.regions) {
    Json terms = Json::array();
    for (const ExpTerm& term : reg.terms)
      terms.push_back(Json{{"coef", jnum(term.coef)}, {"rate", jnum(term.rate)}});
    vregions.push_back(Json{{"lower", jnum(reg.lower)},
                            {"upper", jnum(reg.upper)},
                            {"constant", jnum(reg.constant)},
                            {"terms", terms}});
  }
  value["regions"] = vregions;
  j["value"] = value;
  return j;
}

Json to_json(const VerificationReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["grid_size"] = report.grid_size;
  j["tol"] = jnum(report.tol);
  j["max_bellman_residual"] = jnum(report.max_bellman_residual);
  Json regions = Json::array();
  for (const DeviationRegion& reg : report.deviation_margin_by_region)
    regions.push_back(Json{{"lo", jnum(reg.lo)},
                           {"hi", jnum(reg.hi)},
                           {"requirement", reg.requirement},
                           {"margin", jnum(reg.margin)}});
  j["deviation_regions"] = regions;
  Json lemmas;
  for (const auto& [name, ok] : report.lemma_checks) lemmas[name] = ok;
  j["lemma_checks"] = lemmas;
  return j;
}

Json to_json(const OracleResult& result) {
  Json j;
  j["dk_step"] = jnum(result.spec.dk_step);
  j["dt"] = jnum(result.spec.dt);
  j["k_max"] = jnum(result.spec.k_max);
  j["tol"] = jnum(result.spec.tol);
  j["grid_points"] = result.grid.size();
  j["k_star_est"] = jnum(result.k_star_est);
  if (result.k_star_star_est) j["k_star_star_est"] = jnum(*result.k_star_star_est);
  j["iterations"] = result.iterations;
  j["sup_change"] = jnum(result.sup_change);
  j["absorb_hi"] = jnum(result.absorb_hi);
  return j;
}

Json to_json(const SimResult& result) {
  Json j;
  j["n_paths"] = result.n_paths;
  j["dt"] = jnum(result.dt);
  j["k0"] = jnum(result.k0);
  j["seed"] = result.seed;
  j["mean_discounted_payoff"] = jnum(result.mean_discounted_payoff);
  j["payoff_std_error"] = jnum(result.payoff_std_error);
  j["win_prob"] = jnum(result.win_prob);
  j["win_prob_std_error"] = jnum(result.win_prob_std_error);
  j["win_prob_opponent"] = jnum(result.win_prob_opponent);
  j["mean_success_time"] = jnum(result.mean_success_time);
  j["success_time_std_error"] = jnum(result.success_time_std_error);
  j["mean_follower_time"] = jnum(result.mean_follower_time);
  j["follower_time_std_error"] = jnum(result.follower_time_std_error);
  Json lap = Json::array();
  for (const LaplaceEstimate& le : result.laplace_at)
    lap.push_back(Json{{"theta", jnum(le.theta)},
                       {"estimate", jnum(le.estimate)},
                       {"std_error", jnum(le.std_error)}});
  j["laplace_at"] = lap;
  j["horizon_cap_hits"] = result.horizon_cap_hits;
  return j;
}

Json to_json(const PrizeAllocation& alloc) {
  Json j;
  j["case"] = alloc.case_label;
  j["prize_win"] = jnum(alloc.prize_win);
  j["prize_lose"] = jnum(alloc.prize_lose);
  j["phi_bar"] = jnum(alloc.phi_bar);  // null when infinite
  if (alloc.epsilon) j["epsilon"] = jnum(*alloc.epsilon);
  if (alloc.epsilon_interval)
    j["epsilon_interval"] =
        Json::array({jnum(alloc.epsilon_interval->first), jnum(alloc.epsilon_interval->second)});
  return j;
}

Json to_json(const DesignObjectives& objectives) {
  Json j;
  j["infinite_continuation"] = objectives.infinite_continuation;
  if (objectives.k_star) j["k_star"] = jnum(*objectives.k_star);
  j["follower_time"] = jnum(objectives.follower_time);
  j["success_time"] = jnum(objectives.success_time);
  return j;
}

Json to_json(const EquivalenceReport& report) {
  Json j;
  Json rows = Json::array();
  for (const EquivalenceRow& r : report.rows)
    rows.push_back(Json{{"prize_win", jnum(r.prize_win)},
                        {"prize_lose", jnum(r.prize_lose)},
                        {"phi_bar", jnum(r.phi_bar)},
                        {"k_star", jnum(r.k_star)},
                        {"follower_time", jnum(r.follower_time)},
                        {"success_time", jnum(r.success_time)}});
  j["rows"] = rows;
  j["rank_by_k_star"] = report.rank_by_k_star;
  j["rank_by_follower_time"] = report.rank_by_follower_time;
  j["rank_by_success_time"] = report.rank_by_success_time;
  j["consistent"] = report.consistent;
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json run_manifest(const std::string& command, const Json& params,
                  std::optional<std::uint64_t> seed, bool with_timestamp) {
  Json j;
  j["command"] = command;
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(params.dump())));
  j["params_hash"] = hex;
  j["tool_version"] = kToolVersion;
  if (seed) j["seed"] = *seed;
  if (with_timestamp) {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    j["generated_at"] = stamp;
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output path for writing: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace contest
