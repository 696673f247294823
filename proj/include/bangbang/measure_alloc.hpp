#pragma once

// Discrete bathtub allocation: distribution functions of a nonnegative cell
// density, the thresholds alpha_k that cut the domain into bands of
// prescribed cumulative volume, and the allocation that fills those bands
// with materials in order of increasing lambda_min.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bangbang/core.hpp"

namespace bangbang {

struct WeightedCells {
  std::vector<double> measure;
  std::vector<double> psi;

  WeightedCells() = default;
  WeightedCells(std::vector<double> measure, std::vector<double> psi);

  [[nodiscard]] std::size_t size() const { return measure.size(); }
  [[nodiscard]] double total_measure() const { return total_; }

 private:
  double total_ = 0.0;
};

/// alpha -> mu({psi > alpha}) as an exact step function over the distinct
/// psi values. Levels are grouped by bitwise equality of psi.
class DistributionFunction {
 public:
  explicit DistributionFunction(const WeightedCells& cells);

  double operator()(double alpha) const;
  /// mu({psi >= alpha}), the left limit at alpha.
  [[nodiscard]] double left_limit(double alpha) const;

  /// Distinct psi values, ascending.
  [[nodiscard]] std::span<const double> levels() const { return levels_; }
  [[nodiscard]] double level_mass(std::size_t j) const { return suffix_[j] - suffix_[j + 1]; }
  [[nodiscard]] double total_measure() const { return suffix_.front(); }
  [[nodiscard]] double max_level() const { return levels_.back(); }

 private:
  std::vector<double> levels_;
  std::vector<double> suffix_;  // suffix_[j] = mass of levels j.., suffix_.back() = 0
};

struct Thresholds {
  std::vector<double> alphas;   // alpha_1 >= ... >= alpha_N = 0 (0-based storage)
  std::vector<bool> attained;   // lambda(alpha_k) == sum_{i<=k} q_i within tolerance
};

/// alpha_k = min{alpha >= 0 : lambda(alpha) <= q_1 + ... + q_k}, searched over
/// the breakpoints of the step function. Requires sum(q) == total measure.
Thresholds thresholds(const DistributionFunction& dist, std::span<const double> quantities);

/// Admissible material range on a level set {psi = alpha_k} and the amounts
/// the allocation placed there. Indices are 0-based positions in the
/// (sorted, merged) material list.
struct FatLevel {
  double level = 0.0;
  double measure = 0.0;
  std::size_t k_minus = 0;
  std::size_t k_plus = 0;
  std::vector<double> amounts;  // amounts[i - k_minus], i in [k_minus, k_plus]
};

struct Allocation {
  DesignField theta;
  std::vector<FatLevel> ledger;
};

/// The admissible range on the level alpha = alphas[k] (0-based k):
/// [min{l : alpha_l = alpha}, min(max{l : alpha_l = alpha} + 1, N - 1)].
std::pair<std::size_t, std::size_t> admissible_range(std::span<const double> alphas, std::size_t k);

/// Bathtub allocation. Materials must have strictly increasing lambda_min
/// (merge ties first); `quantities` are exact amounts summing to the total
/// measure; `th` must come from thresholds() on the same cells. Level sets
/// shared by several materials are filled in ascending cell-index order, so
/// at most (materials on the level - 1) cells end up fractional.
Allocation allocate(const WeightedCells& cells, std::span<const Material> materials,
                    std::span<const double> quantities, const Thresholds& th);

/// sum_c measure_c * psi_c * sum_j theta_cj / lambda_min_j.
double objective(const WeightedCells& cells, const DesignField& theta, std::span<const Material> materials);

/// Exact-mode quantities for sorted upper bounds: keeps materials
/// 1..Ntilde+1 with Ntilde = max{k : q_1 + ... + q_k < mu}. The last kept
/// material receives mu - (q_1 + ... + q_Ntilde).
std::vector<double> reduce_upper_bounds(std::span<const double> sorted_quantities, double domain_measure);

struct MergedMaterials {
  std::vector<Material> materials;
  std::vector<double> quantities;
  std::vector<std::vector<std::size_t>> members;  // input positions per merged material
};

/// Collapses runs of equal lambda_min (relative 1e-12) in a sorted list.
MergedMaterials merge_equal_materials(std::span<const Material> sorted, std::span<const double> quantities);

/// Maps a user problem (any material order, ties, upper bounds) onto an
/// exact-mode problem with strictly increasing lambda_min, and maps designs
/// back. Expansion splits a merged fraction among its members in proportion
/// to their quantities; discarded materials get zero.
class MaterialReduction {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  static MaterialReduction build(std::span<const Material> materials, const VolumeConstraint& constraint,
                                 double domain_measure);

  [[nodiscard]] const std::vector<Material>& materials() const { return materials_; }
  [[nodiscard]] const std::vector<double>& quantities() const { return quantities_; }
  [[nodiscard]] std::size_t original_count() const { return group_.size(); }
  [[nodiscard]] std::size_t reduced_index(std::size_t original) const { return group_[original]; }
  [[nodiscard]] double share(std::size_t original) const { return share_[original]; }
  /// Amount each original material receives after reduction.
  [[nodiscard]] std::vector<double> effective_quantities() const;

  [[nodiscard]] std::vector<double> expand(std::span<const double> reduced_row) const;
  [[nodiscard]] DesignField expand(const DesignField& reduced) const;

 private:
  std::vector<Material> materials_;
  std::vector<double> quantities_;
  std::vector<std::size_t> group_;
  std::vector<double> share_;
};

}  // namespace bangbang
