#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "contest/design.hpp"
#include "contest/model.hpp"
#include "contest/oracle.hpp"
#include "contest/sim.hpp"
#include "contest/solver.hpp"
#include "contest/verify.hpp"

namespace contest {

// Insertion-ordered JSON so identical inputs produce byte-identical output.
using Json = nlohmann::ordered_json;

// All doubles pass through jnum: rounded to 12 significant digits, with
// non-finite values mapped to null.
double round12(double value);
Json jnum(double value);

// Strict parsers: the object must carry exactly the expected numeric keys
// (ContestParams: r, c, prize_win, prize_lose, hazard_lead, hazard_follow,
// pi, sigma; DesignProblem: budget, hazard_lead, hazard_follow, cost, r, pi,
// sigma, k0).  Unknown, missing, or non-numeric keys raise ValidationError.
ContestParams params_from_json(const Json& j);
ContestParams params_from_file(const std::string& path);
DesignProblem design_from_json(const Json& j);
DesignProblem design_from_file(const std::string& path);

Json to_json(const ContestParams& p);
Json to_json(const Regime& regime);
Json to_json(const EquilibriumSolution& sol);
Json to_json(const VerificationReport& report);
Json to_json(const OracleResult& result);
Json to_json(const SimResult& result);
Json to_json(const PrizeAllocation& alloc);
Json to_json(const DesignObjectives& objectives);
Json to_json(const EquivalenceReport& report);

std::uint64_t fnv1a64(const std::string& bytes);

// Reproducibility block embedded in every output: the command, an FNV-1a
// hash of the canonical parameter JSON, the tool version, the seed when one
// applies, and (unless suppressed) the UTC generation time.
Json run_manifest(const std::string& command, const Json& params,
                  std::optional<std::uint64_t> seed, bool with_timestamp);

// Write the full text, replacing any existing file.  Callers compute the
// complete payload before touching the filesystem.
void write_text_file(const std::string& path, const std::string& text);

extern const char* const kToolVersion;

}  // namespace contest
