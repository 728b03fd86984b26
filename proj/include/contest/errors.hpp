#pragma once

#include <stdexcept>
#include <string>

namespace contest {

// Base class for all library errors.
struct ContestError : std::runtime_error {
  explicit ContestError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or inconsistent inputs (fields, JSON shape, preconditions).
struct ValidationError : ContestError {
  explicit ValidationError(const std::string& msg) : ContestError(msg) {}
};

// Profitability denominator <= 0: the continuation region is unbounded.
// The design layer interprets this case; the solver refuses it.
struct InfiniteProfitability : ContestError {
  explicit InfiniteProfitability(const std::string& msg) : ContestError(msg) {}
};

// Evaluation outside a function's domain.
struct OutOfDomain : ContestError {
  explicit OutOfDomain(const std::string& msg) : ContestError(msg) {}
};

// Root bracketing/iteration failed within its guard limits.
struct NoConvergence : ContestError {
  explicit NoConvergence(const std::string& msg) : ContestError(msg) {}
};

// Medium-regime solve produced a non-positive switching point
// (signals misclassified inputs).
struct DegenerateRegime : ContestError {
  explicit DegenerateRegime(const std::string& msg) : ContestError(msg) {}
};

// Grid scheme violates the explicit-stability bounds.
struct StabilityViolation : ContestError {
  explicit StabilityViolation(const std::string& msg) : ContestError(msg) {}
};

// Simulation step size too coarse for the continuation region.
struct ResolutionViolation : ContestError {
  explicit ResolutionViolation(const std::string& msg) : ContestError(msg) {}
};

// Design problem violates the maintained budget assumption.
struct AssumptionViolated : ContestError {
  explicit AssumptionViolated(const std::string& msg) : ContestError(msg) {}
};

// Design problem sits exactly on the rejected knife-edge case.
struct KnifeEdge : ContestError {
  explicit KnifeEdge(const std::string& msg) : ContestError(msg) {}
};

}  // namespace contest
