#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bangbang {

// Finite sum  sum_j c[j] * r^(lowest + j)  with possibly negative powers.
// Radial fluxes and psi contain terms like 1/r and 1/r^2, so plain
// polynomials are not closed under the operations the radial pipeline needs.
class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(int lowest, std::vector<double> coeffs);

  static LaurentPoly constant(double c) { return LaurentPoly(0, {c}); }
  static LaurentPoly monomial(int power, double c) { return LaurentPoly(power, {c}); }

  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] int lowest() const { return lowest_; }
  // Highest power with a non-zero coefficient; meaningless when is_zero().
  [[nodiscard]] int highest() const { return lowest_ + static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] double coeff(int power) const;
  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }

  [[nodiscard]] double operator()(double r) const;

  [[nodiscard]] LaurentPoly derivative() const;
  // Antiderivative with zero constant; throws SolverError on an r^-1 term.
  [[nodiscard]] LaurentPoly antiderivative() const;
  // Exact integral over [a, b] with 0 < a or all powers >= 0; r^-1 terms
  // integrate to a logarithm.
  [[nodiscard]] double integrate(double a, double b) const;
  [[nodiscard]] LaurentPoly shifted(int by) const;  // times r^by

  // Coefficients of r^(-lowest) * p as an ordinary polynomial (ascending).
  [[nodiscard]] std::vector<double> numerator() const;

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(double s, const LaurentPoly& a);
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  void trim();

  int lowest_ = 0;
  std::vector<double> coeffs_;
};

// Piecewise Laurent polynomial on [b_0, b_M]; piece p lives on [b_p, b_{p+1}].
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<double> breakpoints, std::vector<LaurentPoly> pieces);

  [[nodiscard]] std::size_t size() const { return pieces_.size(); }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breaks_; }
  [[nodiscard]] const std::vector<LaurentPoly>& pieces() const { return pieces_; }
  [[nodiscard]] const LaurentPoly& piece(std::size_t p) const { return pieces_[p]; }
  [[nodiscard]] double lower() const { return breaks_.front(); }
  [[nodiscard]] double upper() const { return breaks_.back(); }

  // Index of the piece containing r; r on a breakpoint belongs to the piece
  // on its right, except at the upper end.
  [[nodiscard]] std::size_t locate(double r) const;
  [[nodiscard]] double operator()(double r) const;

  // Same function on a finer breakpoint set (must contain the current one).
  [[nodiscard]] PiecewisePoly refined(std::span<const double> breakpoints) const;
  [[nodiscard]] double max_abs_jump() const;

 private:
  std::vector<double> breaks_;
  std::vector<LaurentPoly> pieces_;
};

std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b);

}  // namespace bangbang
