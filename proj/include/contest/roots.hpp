#pragma once

#include <functional>

namespace contest {

// Finds a root of f on (k_start, k_cap).  The bracket is located by
// geometric expansion from k_start, doubling until the sign changes, then
// refined by bisection alternated with secant steps to absolute tolerance
// tol on k.  Throws NoConvergence if no sign change is found before the
// expansion exceeds k_cap.
double find_positive_root(const std::function<double(double)>& f, double k_start, double k_cap,
                          double tol = 1e-12);

// Solves the n x n system A x = b (n <= 8) by Gaussian elimination with
// partial pivoting.  A is row-major with row stride 8; A and b are
// destroyed.  Throws NoConvergence on a (numerically) singular matrix.
void solve_linear(int n, double* A, double* b, double* x);

}  // namespace contest
