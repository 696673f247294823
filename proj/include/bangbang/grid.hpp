#pragma once

// Cell-centred finite differences for -div(lambda_-(theta) grad u) = f on a
// rectangle, optionally masked to its inscribed disk, with u = 0 on the
// boundary. Fields are stored on the full nx-by-ny array (row-major, x
// fastest) and are zero outside the mask; designs are stored per active
// cell.

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "bangbang/core.hpp"
#include "bangbang/kernels.hpp"
#include "bangbang/measure_alloc.hpp"

namespace bangbang::grid {

enum class MeasureRule {
  Staircase,  // every active cell weighs h^2
  CutCell,    // exact area of cell intersected with the disk
};

enum Direction : std::size_t { West = 0, East = 1, South = 2, North = 3 };

class Grid2D {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Grid2D(const Rectangle& rect, std::size_t nx, std::size_t ny, MeasureRule rule = MeasureRule::Staircase);
  /// nx = width / h and ny = height / h, both rounded; the extents must be
  /// multiples of h.
  static Grid2D with_spacing(const Rectangle& rect, double h, MeasureRule rule = MeasureRule::Staircase);

  [[nodiscard]] std::size_t nx() const { return nx_; }
  [[nodiscard]] std::size_t ny() const { return ny_; }
  [[nodiscard]] std::size_t size() const { return nx_ * ny_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] const Rectangle& rect() const { return rect_; }
  [[nodiscard]] MeasureRule rule() const { return rule_; }

  [[nodiscard]] double x(std::size_t c) const { return (static_cast<double>(c % nx_) + 0.5) * h_; }
  [[nodiscard]] double y(std::size_t c) const { return (static_cast<double>(c / nx_) + 0.5) * h_; }
  /// Distance of the cell centre from the rectangle's centre.
  [[nodiscard]] double radius(std::size_t c) const;
  [[nodiscard]] double disk_radius() const { return 0.5 * std::min(rect_.width, rect_.height); }

  [[nodiscard]] bool active(std::size_t c) const { return active_index_[c] != npos; }
  [[nodiscard]] std::size_t active_index(std::size_t c) const { return active_index_[c]; }
  [[nodiscard]] std::span<const std::size_t> active_cells() const { return active_; }
  [[nodiscard]] std::size_t active_count() const { return active_.size(); }

  /// Measures of the active cells, in active order.
  [[nodiscard]] const std::vector<double>& measures() const { return measures_; }
  [[nodiscard]] double total_measure() const { return total_; }

  /// Distance from the centre of active cell c to the Dirichlet boundary in
  /// direction dir, or 0 when the neighbour in that direction is active.
  [[nodiscard]] double boundary_distance(std::size_t c, Direction dir) const {
    return bdist_[4 * active_index_[c] + dir];
  }

 private:
  Rectangle rect_;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  double h_ = 0.0;
  MeasureRule rule_ = MeasureRule::Staircase;
  std::vector<std::size_t> active_index_;
  std::vector<std::size_t> active_;
  std::vector<double> measures_;
  std::vector<double> bdist_;
  double total_ = 0.0;
};

/// Area of [x0, x1] x [y0, y1] intersected with the disk of radius r centred
/// at the origin.
double disk_rectangle_area(double r, double x0, double x1, double y0, double y1);

using Field = std::vector<double>;

/// f sampled at active cell centres.
Field sample(const Grid2D& grid, const std::function<double(double, double)>& f);
/// A radial function of the distance to the rectangle's centre.
Field sample_radial(const Grid2D& grid, const std::function<double(double)>& f);

/// lambda_-(theta) per grid cell; 1 outside the mask.
Field lambda_field(const Grid2D& grid, const DesignField& theta, std::span<const Material> materials);

kernels::Stencil assemble(const Grid2D& grid, std::span<const double> lambda);

struct StateOptions {
  kernels::CgOptions cg;
};

struct StateSolution {
  Field u;
  kernels::CgResult cg;
};

/// Solves the state equation. `warm_start`, when non-empty, seeds CG.
/// Throws SolverError carrying the residual history on non-convergence.
StateSolution solve_state(const Grid2D& grid, const DesignField& theta, std::span<const double> f,
                          std::span<const Material> materials, StateOptions options = {},
                          std::span<const double> warm_start = {});

/// Normal fluxes sigma = lambda grad u on cell faces. x_faces has
/// (nx + 1) * ny entries (face i is the west face of cell i in its row),
/// y_faces nx * (ny + 1). Faces between a cell and the boundary carry
/// lambda_P * (0 - u_P) / d with d the boundary distance.
struct FaceFluxField {
  std::size_t nx = 0;
  std::size_t ny = 0;
  Field x_faces;
  Field y_faces;

  [[nodiscard]] double west(std::size_t c) const { return x_faces[c / nx * (nx + 1) + c % nx]; }
  [[nodiscard]] double east(std::size_t c) const { return x_faces[c / nx * (nx + 1) + c % nx + 1]; }
  [[nodiscard]] double south(std::size_t c) const { return y_faces[c]; }
  [[nodiscard]] double north(std::size_t c) const { return y_faces[c + nx]; }
};

FaceFluxField face_fluxes(const Grid2D& grid, std::span<const double> lambda, std::span<const double> u);

/// div sigma per active cell (outward flux times face length over the cell
/// measure), in active order.
std::vector<double> divergence(const Grid2D& grid, const FaceFluxField& sigma);

enum class PsiRule {
  // Per axis, the mean of |sigma_f|^2 over the two faces weighted by each
  // face's reach into the domain (h/2 interior, d at the boundary); psi is
  // the sum of the two axis means. On a rectangle this coincides with
  // FaceEnergy; near a curved boundary it stays a pointwise density.
  FaceDensity,
  // sum over the four faces of |sigma_f|^2 times the face's share of the
  // cell (1/2 for interior faces, d/h for boundary faces), over the cell
  // measure. Makes H(theta, sigma(theta)) equal u . A u exactly.
  FaceEnergy,
  // (mean of the two x-faces)^2 + (mean of the two y-faces)^2.
  AxisAverage,
};

/// psi per active cell, in active order: sum_i weight_i * |sigma_i|^2.
std::vector<double> psi_field(const Grid2D& grid, std::span<const FaceFluxField> fluxes,
                              std::span<const double> weights, PsiRule rule = PsiRule::FaceDensity);

/// sum_i weight_i * sum_cells f_i u_i * measure.
double energy(const Grid2D& grid, std::span<const Field> u, std::span<const Field> f, std::span<const double> weights);

/// Cell-centred flux vector (x- and y-face means).
std::array<double, 2> cell_flux(const FaceFluxField& sigma, std::size_t c);

/// Bathtub input for psi on the active cells.
WeightedCells weighted_cells(const Grid2D& grid, std::vector<double> psi);

}  // namespace bangbang::grid
