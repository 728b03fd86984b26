#pragma once

#include <vector>

#include "contest/model.hpp"

namespace contest {

// Roots of the characteristic equation r = -lambda_eff + pi*xi + (1/2)sigma^2 xi^2:
//   xi_pm = (-pi +- sqrt(pi^2 + 2(r+lambda_eff)sigma^2)) / sigma^2,
// together with eta = sqrt(r+lambda_eff)/sigma, the positive rate of the
// zero-relative-drift (both-risky) equation.
struct CharRoots {
  double xi_plus;   // > 0
  double xi_minus;  // < 0
  double eta;       // > 0
};

CharRoots char_roots(const ContestParams& p);

// One exponential term coef * e^{rate * dk}.
struct ExpTerm {
  double coef;
  double rate;
};

// V(dk) = constant + sum_t coef_t * e^{rate_t * dk} on [lower, upper).
struct Region {
  double lower;
  double upper;
  double constant;
  std::vector<ExpTerm> terms;
};

// Piecewise-exponential value function on the open domain
// (domain_lo, domain_hi); regions tile the domain in increasing order.
// V is C0/C1 across interior boundaries; second and third derivatives may
// jump there, and evaluation at a boundary returns the right-limit.
struct PiecewiseValueFunction {
  double domain_lo;
  double domain_hi;
  std::vector<Region> regions;
};

// order-th derivative (order in 0..3) at dk, which must lie strictly
// inside the domain.  Throws OutOfDomain otherwise.
double eval(const PiecewiseValueFunction& v, double dk, int order);

// Same mechanics as eval restricted to one region's formula, with no
// domain restriction.  Used for boundary-residual diagnostics.
double region_eval(const Region& region, double dk, int order);

}  // namespace contest
