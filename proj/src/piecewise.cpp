#include "bangbang/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bangbang/error.hpp"

namespace bangbang {

LaurentPoly::LaurentPoly(int lowest, std::vector<double> coeffs)
    : lowest_(lowest), coeffs_(std::move(coeffs)) {
  trim();
}

void LaurentPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  lowest_ += static_cast<int>(first - coeffs_.begin());
  coeffs_.erase(coeffs_.begin(), first);
  if (coeffs_.empty()) lowest_ = 0;
}

double LaurentPoly::coeff(int power) const {
  const int j = power - lowest_;
  if (j < 0 || j >= static_cast<int>(coeffs_.size())) return 0.0;
  return coeffs_[static_cast<std::size_t>(j)];
}

double LaurentPoly::operator()(double r) const {
  if (coeffs_.empty()) return 0.0;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + *it;
  return lowest_ == 0 ? acc : acc * std::pow(r, lowest_);
}

LaurentPoly LaurentPoly::derivative() const {
  std::vector<double> d(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    d[j] = coeffs_[j] * static_cast<double>(lowest_ + static_cast<int>(j));
  }
  return {lowest_ - 1, std::move(d)};
}

LaurentPoly LaurentPoly::antiderivative() const {
  std::vector<double> a(coeffs_.size());
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = lowest_ + static_cast<int>(j);
    if (k == -1) {
      if (coeffs_[j] != 0.0) throw SolverError("antiderivative: r^-1 term has no Laurent antiderivative");
      a[j] = 0.0;
      continue;
    }
    a[j] = coeffs_[j] / static_cast<double>(k + 1);
  }
  return {lowest_ + 1, std::move(a)};
}

double LaurentPoly::integrate(double a, double b) const {
  double total = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const double c = coeffs_[j];
    if (c == 0.0) continue;
    const int k = lowest_ + static_cast<int>(j);
    if (k == -1) {
      total += c * std::log(b / a);
    } else {
      total += c * (std::pow(b, k + 1) - std::pow(a, k + 1)) / static_cast<double>(k + 1);
    }
  }
  return total;
}

LaurentPoly LaurentPoly::shifted(int by) const {
  if (coeffs_.empty()) return {};
  return {lowest_ + by, coeffs_};
}

std::vector<double> LaurentPoly::numerator() const { return coeffs_; }

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int lo = std::min(a.lowest_, b.lowest_);
  const int hi = std::max(a.highest(), b.highest());
  std::vector<double> c(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (int k = lo; k <= hi; ++k) c[static_cast<std::size_t>(k - lo)] = a.coeff(k) + b.coeff(k);
  return {lo, std::move(c)};
}

LaurentPoly operator*(double s, const LaurentPoly& a) {
  std::vector<double> c = a.coeffs_;
  for (double& x : c) x *= s;
  return {a.lowest_, std::move(c)};
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-1.0) * b; }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return {a.lowest_ + b.lowest_, std::move(c)};
}

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<LaurentPoly> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size()) {
    throw Error("PiecewisePoly: need M+1 breakpoints for M >= 1 pieces");
  }
  for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
    if (!(breaks_[p] < breaks_[p + 1])) {
      throw Error("PiecewisePoly: breakpoints must be strictly increasing (index " + std::to_string(p) + ")");
    }
  }
}

std::size_t PiecewisePoly::locate(double r) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  if (it == breaks_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, pieces_.size() - 1);
}

double PiecewisePoly::operator()(double r) const { return pieces_[locate(r)](r); }

PiecewisePoly PiecewisePoly::refined(std::span<const double> breakpoints) const {
  std::vector<double> b(breakpoints.begin(), breakpoints.end());
  std::vector<LaurentPoly> p;
  p.reserve(b.size() - 1);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) p.push_back(pieces_[locate(0.5 * (b[i] + b[i + 1]))]);
  return {std::move(b), std::move(p)};
}

double PiecewisePoly::max_abs_jump() const {
  double jump = 0.0;
  for (std::size_t p = 1; p < pieces_.size(); ++p) {
    const double r = breaks_[p];
    jump = std::max(jump, std::abs(pieces_[p](r) - pieces_[p - 1](r)));
  }
  return jump;
}

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace bangbang
