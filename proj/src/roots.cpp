#include "bangbang/roots.hpp"

#include <cmath>
#include <sstream>

#include "bangbang/error.hpp"

namespace bangbang {

double bracket_root(const std::function<double(double)>& f, double a, double b, BracketOptions opts) {
  return bracket_root(f, a, f(a), b, f(b), opts);
}

double bracket_root(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                    BracketOptions opts) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb) || !std::isfinite(fa) || !std::isfinite(fb)) {
    std::ostringstream os;
    os.precision(17);
    os << "bracket_root: [" << a << ", " << b << "] does not bracket a root (f = " << fa << ", " << fb << ")";
    throw SolverError(os.str());
  }
  int stale_side = 0;  // +1: a kept twice in a row, -1: b kept twice in a row
  for (int it = 0; it < opts.max_iters; ++it) {
    if (std::abs(b - a) <= opts.x_tol) break;
    const double width = b - a;
    double x = (a * fb - b * fa) / (fb - fa);
    // Fall back to bisection when the secant point is degenerate.
    if (!(x > std::min(a, b) && x < std::max(a, b))) x = 0.5 * (a + b);
    double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
      if (stale_side == -1) fb *= 0.5;  // Illinois modification
      stale_side = -1;
    } else {
      b = x;
      fb = fx;
      if (stale_side == 1) fa *= 0.5;
      stale_side = 1;
    }
    if (std::abs(b - a) > 0.5 * std::abs(width)) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) return m;
      if (std::signbit(fm) == std::signbit(fa)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      stale_side = 0;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

double poly_eval(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> poly_derivative(std::span<const double> coeffs) {
  if (coeffs.size() <= 1) return {};
  std::vector<double> d(coeffs.size() - 1);
  for (std::size_t j = 1; j < coeffs.size(); ++j) d[j - 1] = coeffs[j] * static_cast<double>(j);
  return d;
}

namespace {

std::vector<double> trimmed(std::span<const double> coeffs) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

}  // namespace

std::vector<double> sign_change_roots(std::span<const double> coeffs, double a, double b, BracketOptions opts) {
  const auto c = trimmed(coeffs);
  if (c.size() <= 1) return {};
  if (c.size() == 2) {
    const double x = -c[0] / c[1];
    if (x > a && x < b) return {x};
    return {};
  }
  const auto d = poly_derivative(c);
  std::vector<double> points{a};
  for (double x : sign_change_roots(d, a, b, opts)) points.push_back(x);
  points.push_back(b);

  const auto p = [&c](double x) { return poly_eval(c, x); };
  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    const double x0 = points[k];
    const double x1 = points[k + 1];
    const double f0 = p(x0);
    const double f1 = p(x1);
    if (f0 == 0.0 || f1 == 0.0) {
      // A zero exactly on an interior critical point is a touching root; a
      // zero on the outer ends lies outside the open interval.
      continue;
    }
    if (std::signbit(f0) != std::signbit(f1)) roots.push_back(bracket_root(p, x0, f0, x1, f1, opts));
  }
  return roots;
}

}  // namespace bangbang
