#include "contest/roots.hpp"

#include <cmath>
#include <sstream>

#include "contest/errors.hpp"

namespace contest {

double find_positive_root(const std::function<double(double)>& f, double k_start, double k_cap,
                          double tol) {
  if (!(k_start > 0) || !(k_cap > 0))
    throw ValidationError("find_positive_root requires positive k_start and k_cap");
  if (k_start > k_cap) {
    std::ostringstream os;
    os << "bracket start " << k_start << " already exceeds overflow guard " << k_cap;
    throw NoConvergence(os.str());
  }

  double lo = k_start;
  double flo = f(lo);
  if (!std::isfinite(flo)) throw NoConvergence("non-finite function value at bracket start");
  if (flo == 0) return lo;

  double hi = 2 * lo;
  double fhi;
  for (;;) {
    if (hi > k_cap) {
      std::ostringstream os;
      os << "no sign change found expanding to k <= " << k_cap;
      throw NoConvergence(os.str());
    }
    fhi = f(hi);
    if (!std::isfinite(fhi)) throw NoConvergence("non-finite function value during bracketing");
    if (fhi == 0) return hi;
    if ((fhi < 0) != (flo < 0)) break;
    lo = hi;
    flo = fhi;
    hi *= 2;
  }

  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    double x;
    if (iter % 2 == 0 && fhi != flo) {
      x = (lo * fhi - hi * flo) / (fhi - flo);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
    }
    if (x <= lo || x >= hi) break;
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NoConvergence("non-finite function value during refinement");
    if (fx == 0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

void solve_linear(int n, double* A, double* b, double* x) {
  constexpr int kStride = 8;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::fabs(A[col * kStride + col]);
    for (int row = col + 1; row < n; ++row) {
      const double v = std::fabs(A[row * kStride + col]);
      if (v > best) {
        best = v;
        pivot = row;
      }
    }
    if (!(best > 1e-300)) throw NoConvergence("singular linear system in coefficient solve");
    if (pivot != col) {
      for (int j = col; j < n; ++j) std::swap(A[col * kStride + j], A[pivot * kStride + j]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / A[col * kStride + col];
    for (int row = col + 1; row < n; ++row) {
      const double factor = A[row * kStride + col] * inv;
      if (factor == 0) continue;
      A[row * kStride + col] = 0;
      for (int j = col + 1; j < n; ++j) A[row * kStride + j] -= factor * A[col * kStride + j];
      b[row] -= factor * b[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double s = b[row];
    for (int j = row + 1; j < n; ++j) s -= A[row * kStride + j] * x[j];
    x[row] = s / A[row * kStride + row];
  }
}

}  // namespace contest
