#pragma once

// Damped alternation between the state solve and the bathtub allocation on a
// grid, with the duality sandwich L = I(theta) <= optimum <= U = max_theta'
// H(theta', sigma) reported at every iteration.

#include <functional>
#include <string>
#include <vector>

#include "bangbang/core.hpp"
#include "bangbang/grid.hpp"
#include "bangbang/measure_alloc.hpp"

namespace bangbang::saddle {

struct GridLoad {
  grid::Field f;  // full nx * ny array
  double weight = 1.0;
};

/// Materials must have strictly increasing lambda_min and the quantities
/// must sum to grid.total_measure() (grid units, exact mode).
struct GridProblem {
  const grid::Grid2D* grid = nullptr;
  std::vector<Material> materials;
  std::vector<double> quantities;
  std::vector<GridLoad> loads;
  grid::PsiRule psi_rule = grid::PsiRule::FaceDensity;

  void validate() const;
};

/// Constant: theta <- (1 - omega) theta + omega theta_bb every iteration.
/// Backtracking: the same blend, but a step that lowers L is rejected, omega
/// is halved and the step is retaken from the last accepted design; after an
/// accepted step omega grows back (doubling) up to `damping`.
enum class StepRule { Constant, Backtracking };

struct SaddleOptions {
  int max_iters = 100;
  double damping = 1.0;  // omega, or its upper limit under Backtracking
  StepRule step_rule = StepRule::Backtracking;
  double tol_gap = 1e-3;     // relative to |L|
  double tol_change = 1e-9;  // relative L1 change of theta
  grid::StateOptions state;
};

struct IterationRecord {
  int iter = 0;
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;       // upper - lower of this iterate
  double change = 0.0;    // sum_c m_c |theta_next - theta|_1 / (2 mu)
  double residual = 0.0;  // relative L2 change of the flux since the previous iterate (0 on the first)
  double omega = 0.0;     // step used to form the next iterate
  bool accepted = true;   // false when this iterate lowered L and was rolled back
};

struct SaddleDiagnostics {
  std::vector<IterationRecord> iterations;
  double best_lower = 0.0;  // max over iterations of L
  double best_upper = 0.0;  // min over iterations of U
  [[nodiscard]] double certified_gap() const { return best_upper - best_lower; }
};

/// Everything that follows from a design: states, fluxes, psi, L.
struct Evaluation {
  std::vector<grid::Field> u;
  std::vector<grid::FaceFluxField> sigma;
  std::vector<double> psi;  // per active cell
  double lower = 0.0;       // H(theta, sigma(theta)) = I(theta)
  std::size_t cg_iterations = 0;
};

Evaluation evaluate(const GridProblem& problem, const DesignField& theta, const grid::StateOptions& options,
                    const std::vector<grid::Field>* warm_start = nullptr);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
  Thresholds thresholds;
  Allocation bathtub;  // exact maximiser of H(., sigma)
};

/// L = H(theta, sigma) and U = max over feasible theta' of H(theta', sigma),
/// for fluxes sigma given through their psi field.
Bounds bounds(const GridProblem& problem, const DesignField& theta, const std::vector<double>& psi);

struct SaddleResult {
  DesignField theta;  // best-L iterate
  Evaluation state;   // evaluation of theta
  Bounds bounds;      // bounds at theta
  SaddleDiagnostics diagnostics;
  int best_iteration = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Uniform fractions q_i / mu in every cell.
DesignField uniform_design(const GridProblem& problem);

double design_change(const DesignField& a, const DesignField& b);

/// `on_iteration` is called once per iteration, after the record is final.
SaddleResult alternate(const GridProblem& problem, const DesignField& theta0, SaddleOptions options = {},
                       const std::function<void(const IterationRecord&)>& on_iteration = {});

struct GridCertificate {
  double flux_residual = 0.0;             // ||sigma - lambda_-(theta) grad u(theta)|| / ||lambda_-(theta) grad u(theta)||
  double strip_violation_fraction = 0.0;  // measure fraction of cells breaking the strip conditions
  // Part of the above more than `interface_cells` cells away from any change of
  // the bathtub allocation.
  double far_violation_fraction = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double relative_gap = 0.0;
  bool passed = false;
};

struct CertifyGridOptions {
  double fraction_tol = 1e-6;       // theta_i below this counts as absent
  double flux_residual_tol = 1e-6;
  int interface_cells = 2;
  double violation_tol = 0.01;  // bound on far_violation_fraction
  grid::StateOptions state;
};

/// Solves the state for theta again and compares the given fluxes with
/// lambda_-(theta) grad u; checks theta against the strips of the bathtub
/// thresholds of psi(sigma).
GridCertificate certify_grid(const GridProblem& problem, const DesignField& theta,
                             const std::vector<grid::FaceFluxField>& sigma, CertifyGridOptions options = {});

/// Measure-weighted face L2 norm of a - b relative to the norm of b.
double relative_flux_difference(const std::vector<grid::FaceFluxField>& a, const std::vector<grid::FaceFluxField>& b);

}  // namespace bangbang::saddle
