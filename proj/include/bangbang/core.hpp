#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bangbang/error.hpp"
#include "bangbang/piecewise.hpp"

namespace bangbang {

// Per-component tolerance for simplex membership. Rows within it are
// renormalized; rows outside it are rejected.
inline constexpr double kSimplexTol = 1e-12;
// Relative tolerance for sum(q) == mu(Omega) in exact mode.
inline constexpr double kQuantityRelTol = 1e-12;

/// A pure phase, reduced to the extreme eigenvalues of its conductivity
/// tensor. Only `lambda_min` enters the energy; `lambda_max` is kept for the
/// upper mixture bound.
struct Material {
  std::string label;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
};

void validate(const Material& m);

enum class ConstraintMode { Exact, UpperBound };

struct VolumeConstraint {
  std::vector<double> quantities;  // absolute, in domain-measure units
  ConstraintMode mode = ConstraintMode::Exact;

  // Throws ConstraintError (negative entries, exact-mode mismatch) or
  // InfeasibleError (upper-bound total below the domain measure).
  void validate(double domain_measure) const;
};

/// Rejects rows that leave the simplex by more than kSimplexTol per component
/// and returns the renormalized row otherwise.
std::vector<double> checked_simplex(std::span<const double> theta);

/// sum_i theta_i / lambda_min_i, i.e. 1 / lambda_-(theta). No simplex check.
double inverse_lambda_minus(std::span<const double> theta, std::span<const Material> materials);

/// Harmonic mixture bound lambda_-(theta).
double lambda_minus(std::span<const double> theta, std::span<const Material> materials);
/// Arithmetic mixture bound lambda_+(theta).
double lambda_plus(std::span<const double> theta, std::span<const Material> materials);

struct Ball {
  int dimension = 2;
  double radius = 1.0;
};

// Axis-aligned [0, width] x [0, height]; with disk_mask the domain is the
// inscribed disk of radius min(width, height)/2 centred in the rectangle.
struct Rectangle {
  double width = 1.0;
  double height = 1.0;
  bool disk_mask = false;
};

using Domain = std::variant<Ball, Rectangle>;

double unit_ball_volume(int dimension);
/// Volume of the shell a <= r <= b in R^d.
double shell_volume(int dimension, double a, double b);
double measure(const Domain& domain);
int dimension(const Domain& domain);

/// Cell-centred samples of a source on an nx-by-ny grid (row-major, x fastest).
struct SampledField {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;
};

struct LoadCase {
  std::variant<PiecewisePoly, SampledField> source;
  double weight = 1.0;
};

struct ProblemSpec {
  Domain domain = Ball{};
  std::vector<Material> materials;
  VolumeConstraint constraint;
  std::vector<LoadCase> loads;

  void validate() const;
  [[nodiscard]] double domain_measure() const { return measure(domain); }
};

/// Simplex-valued volume fractions over a set of measured cells (grid cells
/// or radial bands). Rows are stored contiguously, cell-major.
class DesignField {
 public:
  DesignField() = default;
  DesignField(std::vector<double> cell_measures, std::size_t materials);
  DesignField(std::vector<double> cell_measures, std::size_t materials, std::vector<double> theta);

  /// Every cell set to the same fractions.
  static DesignField uniform(std::vector<double> cell_measures, std::span<const double> fractions);

  [[nodiscard]] std::size_t cells() const { return measures_.size(); }
  [[nodiscard]] std::size_t materials() const { return materials_; }
  [[nodiscard]] double measure(std::size_t c) const { return measures_[c]; }
  [[nodiscard]] std::span<const double> measures() const { return measures_; }
  [[nodiscard]] std::span<const double> row(std::size_t c) const {
    return {theta_.data() + c * materials_, materials_};
  }
  [[nodiscard]] std::span<double> row(std::size_t c) { return {theta_.data() + c * materials_, materials_}; }
  [[nodiscard]] std::span<const double> data() const { return theta_; }

  [[nodiscard]] double total_measure() const;
  [[nodiscard]] std::vector<double> material_volumes() const;
  [[nodiscard]] double max_simplex_defect() const;

  /// Exact mode: per-material volume equals q_i within rel_tol * mu.
  /// Upper-bound mode: volume <= q_i + rel_tol * mu. Throws ConstraintError.
  void audit(const VolumeConstraint& constraint, double rel_tol = 1e-10) const;

 private:
  std::vector<double> measures_;
  std::size_t materials_ = 0;
  std::vector<double> theta_;
};

/// Stable sort by lambda_min. `order[k]` is the original index of the
/// material at sorted position k; `tie_groups` lists runs of equal
/// lambda_min (sorted positions) of length >= 2.
struct SortedMaterials {
  std::vector<Material> materials;
  std::vector<double> quantities;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> tie_groups;
};

SortedMaterials sort_materials(std::span<const Material> materials, std::span<const double> quantities);

bool same_lambda(double a, double b);

}  // namespace bangbang
