#include "contest/valuefn.hpp"

#include <cmath>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

CharRoots char_roots(const ContestParams& p) {
  validate(p);
  const double s2 = p.sigma * p.sigma;
  const double le = lambda_eff(p);
  const double disc = std::sqrt(p.pi * p.pi + 2.0 * (p.r + le) * s2);
  CharRoots cr;
  cr.xi_plus = (-p.pi + disc) / s2;
  cr.xi_minus = (-p.pi - disc) / s2;
  cr.eta = std::sqrt(p.r + le) / p.sigma;
  return cr;
}

double region_eval(const Region& region, double dk, int order) {
  double out = (order == 0) ? region.constant : 0.0;
  for (const ExpTerm& t : region.terms) {
    double factor = t.coef;
    for (int j = 0; j < order; ++j) factor *= t.rate;
    out += factor * std::exp(t.rate * dk);
  }
  return out;
}

double eval(const PiecewiseValueFunction& v, double dk, int order) {
  if (order < 0 || order > 3) throw ValidationError("eval order must be in 0..3");
  if (!(dk > v.domain_lo && dk < v.domain_hi)) {
    std::ostringstream os;
    os << "dk = " << dk << " outside value-function domain (" << v.domain_lo << ", "
       << v.domain_hi << ")";
    throw OutOfDomain(os.str());
  }
  for (const Region& region : v.regions) {
    if (dk < region.upper) return region_eval(region, dk, order);
  }
  return region_eval(v.regions.back(), dk, order);
}

}  // namespace contest
