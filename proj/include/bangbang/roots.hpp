#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bangbang {

struct BracketOptions {
  double x_tol = 1e-12;
  int max_iters = 200;
};

/// Root of a continuous f on [a, b] with f(a), f(b) of opposite sign (or one
/// of them zero). Illinois regula falsi, falling back to a bisection step
/// whenever the secant step fails to halve the bracket. Throws SolverError
/// when the endpoints do not bracket a root.
double bracket_root(const std::function<double(double)>& f, double a, double b, BracketOptions opts = {});

/// Same, with the endpoint values already known.
double bracket_root(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                    BracketOptions opts = {});

/// Ascending polynomial coefficients; value at x by Horner's rule.
double poly_eval(std::span<const double> coeffs, double x);
std::vector<double> poly_derivative(std::span<const double> coeffs);

/// Sign-changing roots of a polynomial inside the open interval (a, b),
/// ascending. Isolation recurses on the derivative: between consecutive
/// critical points the polynomial is monotone, so each such interval holds at
/// most one simple crossing, which is then bracketed. Roots of even
/// multiplicity (no sign change) are not reported.
std::vector<double> sign_change_roots(std::span<const double> coeffs, double a, double b, BracketOptions opts = {});

}  // namespace bangbang
