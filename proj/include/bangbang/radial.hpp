#pragma once

// Exact pipeline for radial sources on a ball B(0, R) in R^d: the unique
// radial flux, psi = sum_i mu_i sigma_i^2, its monotone pieces and
// continuous distribution function, the optimal banded design, the state it
// induces, and the optimality certificates for that pair.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bangbang/core.hpp"
#include "bangbang/measure_alloc.hpp"
#include "bangbang/piecewise.hpp"

namespace bangbang::radial {

// Highest power allowed in a source piece.
inline constexpr int kMaxSourceDegree = 16;
// Radii below this evaluate psi and sigma by their limit at r = 0.
inline constexpr double kZeroRadius = 1e-14;

/// sigma(r) = -P(r) / r^(d-1) with P(r) = int_0^r rho^(d-1) f(rho) d rho.
struct RadialFlux {
  int dimension = 2;
  PiecewisePoly antiderivative;  // P
  PiecewisePoly sigma;

  double operator()(double r) const;
};

/// Requires a source covering exactly [0, R] whose first piece is an
/// ordinary polynomial (bounded at the origin). Later pieces may carry
/// negative powers except r^(-d), whose antiderivative is logarithmic.
RadialFlux radial_flux(const PiecewisePoly& source, int dimension, double radius);

struct PsiFunction {
  int dimension = 2;
  double radius = 1.0;
  PiecewisePoly psi;

  double operator()(double r) const;
};

PsiFunction assemble_psi(std::span<const RadialFlux> fluxes, std::span<const double> weights);

enum class Trend { Increasing, Decreasing, Constant };

struct Segment {
  double a = 0.0;
  double b = 0.0;
  Trend trend = Trend::Constant;
  double psi_a = 0.0;
  double psi_b = 0.0;

  [[nodiscard]] double psi_min() const { return std::min(psi_a, psi_b); }
  [[nodiscard]] double psi_max() const { return std::max(psi_a, psi_b); }
};

struct MonotoneSegmentation {
  std::vector<Segment> segments;
};

/// Splits (0, R) into maximal intervals where psi is strictly monotone or
/// constant. Interior turning points are sign changes of the numerator of
/// psi', isolated per piece and refined to 1e-12 in r.
MonotoneSegmentation monotone_segments(const PsiFunction& psi);

/// alpha -> d-volume of {psi > alpha}, evaluated segment by segment.
class RadialDistribution {
 public:
  RadialDistribution(PsiFunction psi, MonotoneSegmentation segmentation);

  double operator()(double alpha) const;
  [[nodiscard]] double left_limit(double alpha) const;

  [[nodiscard]] const PsiFunction& psi() const { return psi_; }
  [[nodiscard]] const MonotoneSegmentation& segmentation() const { return seg_; }
  [[nodiscard]] double total_measure() const { return total_; }
  [[nodiscard]] double max_psi() const { return max_psi_; }
  /// Values of psi on constant segments (the jumps of the distribution), descending.
  [[nodiscard]] std::vector<double> fat_levels() const;
  /// Segment endpoint values and fat levels, ascending, deduplicated.
  [[nodiscard]] std::vector<double> breakpoint_levels() const;

  /// Radius in a monotone segment where psi equals alpha (alpha within the
  /// segment's range).
  [[nodiscard]] double crossing(const Segment& s, double alpha) const;

 private:
  [[nodiscard]] double evaluate(double alpha, bool include_level) const;

  PsiFunction psi_;
  MonotoneSegmentation seg_;
  double total_ = 0.0;
  double max_psi_ = 0.0;
};

struct AlphaSearch {
  double volume_tol = 1e-11;  // relative to mu(Omega)
  int max_iters = 200;
  // Scales the initial bisection bracket [0, max psi * (1 + bracket_stretch)].
  double bracket_stretch = 0.0;
};

/// Thresholds alpha_k on the continuous distribution: fat levels are matched
/// exactly, everything else by bisection on alpha until the volume residual
/// is below volume_tol * mu(Omega).
Thresholds radial_thresholds(const RadialDistribution& dist, std::span<const double> quantities,
                             AlphaSearch search = {});

struct RadialBand {
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::vector<double> theta;  // fractions over the reduced materials
};

struct RadialDesign {
  int dimension = 2;
  double radius = 1.0;
  std::vector<RadialBand> bands;  // ascending, covering [0, R]
  Thresholds thresholds;
  std::vector<FatLevel> ledger;

  [[nodiscard]] std::vector<double> interfaces() const;
  [[nodiscard]] const RadialBand& band_at(double r) const;
  [[nodiscard]] DesignField as_design_field() const;
  [[nodiscard]] std::vector<double> material_volumes() const;
};

/// Optimal banded design for psi. Materials are the reduced list (strictly
/// increasing lambda_min), quantities exact. Material k fills the open strip
/// alpha_k < psi < alpha_{k-1}; constant segments at a threshold level are
/// shared by the admissible materials in ascending index, inner radii first.
RadialDesign solve_radial_design(const RadialDistribution& dist, std::span<const Material> materials,
                                 std::span<const double> quantities, AlphaSearch search = {});

/// H(theta, sigma) = sum_bands (1/lambda_-(theta)) * int_band psi dx, exact.
double radial_objective(const RadialDesign& design, const PsiFunction& psi, std::span<const Material> materials);

/// u(r) = -int_r^R sigma / lambda_-(theta) d rho, from exact per-interval
/// antiderivatives.
class RadialState {
 public:
  RadialState(const RadialFlux& flux, const RadialDesign& design, std::span<const Material> materials);

  double operator()(double r) const;
  /// sigma(r) / lambda_-(theta(r)), one-sided from the right on interfaces.
  [[nodiscard]] double derivative(double r) const;
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  [[nodiscard]] std::size_t locate(double r) const;

  std::vector<double> breaks_;
  std::vector<LaurentPoly> sigma_;
  std::vector<double> weight_;  // 1 / lambda_- on each interval
  std::vector<double> node_;    // u at breaks_
};

RadialState reconstruct_state(const RadialFlux& flux, const RadialDesign& design, std::span<const Material> materials);

struct CertifyOptions {
  int residual_samples = 200;
  int saddle_samples = 100;
  std::uint64_t seed = 1;
  double saddle_slack = 1e-10;
};

struct CertificateReport {
  std::vector<double> state_residual;  // per load, sampled max |sigma - lambda_- u'|
  double laminate_residual = 0.0;      // max |A^-1 sigma - sigma / lambda_-| over bands
  double objective = 0.0;              // H(theta*, sigma*)
  int saddle_samples = 0;
  int saddle_violations = 0;
  double saddle_max_excess = 0.0;  // max over samples of H(theta', sigma*) - H*
  std::string flux_side_note;
  double volume_error = 0.0;  // max |band volume - q_i| / mu
  bool passed = false;
};

/// Checks the optimality conditions for a radial design: the state relation
/// sigma = lambda_-(theta) u' (with u' by finite differences of the
/// reconstructed state), the radial laminate identity, and the theta-side
/// saddle inequality on random volume-preserving band rearrangements.
/// Failed checks are reported, never thrown.
CertificateReport certify(const RadialDesign& design, std::span<const RadialFlux> fluxes, const PsiFunction& psi,
                          std::span<const Material> materials, std::span<const double> quantities,
                          CertifyOptions options = {});

/// A random design with the same material volumes: every material is cut
/// into 1-3 shells and the shells are laid out from the centre in random
/// order.
RadialDesign random_rearrangement(const RadialDesign& design, std::span<const double> quantities,
                                  std::uint64_t seed);

/// Uniform radii plus every breakpoint of psi and every interface.
std::vector<double> sample_radii(const RadialDesign& design, const PsiFunction& psi, int count);

}  // namespace bangbang::radial
