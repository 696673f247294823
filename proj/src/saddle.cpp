#include "bangbang/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bangbang::saddle {

void GridProblem::validate() const {
  if (grid == nullptr) throw Error("saddle: problem has no grid");
  if (materials.empty() || quantities.size() != materials.size()) {
    throw Error("saddle: one quantity per material required");
  }
  for (std::size_t i = 1; i < materials.size(); ++i) {
    if (!(materials[i - 1].lambda_min < materials[i].lambda_min)) {
      throw Error("saddle: lambda_min must be strictly increasing (merge equal materials first)");
    }
  }
  const double total = std::accumulate(quantities.begin(), quantities.end(), 0.0);
  if (std::abs(total - grid->total_measure()) > 1e-12 * grid->total_measure()) {
    throw ConstraintError("saddle: quantities must sum to the grid measure");
  }
  if (loads.empty()) throw Error("saddle: at least one load required");
  for (const auto& l : loads) {
    if (l.f.size() != grid->size()) throw Error("saddle: load does not match the grid");
    if (!(l.weight > 0.0)) throw ConstraintError("saddle: load weights must be positive");
  }
}

Evaluation evaluate(const GridProblem& problem, const DesignField& theta, const grid::StateOptions& options,
                    const std::vector<grid::Field>* warm_start) {
  const auto& g = *problem.grid;
  Evaluation ev;
  const grid::Field lambda = grid::lambda_field(g, theta, problem.materials);
  std::vector<double> weights;
  for (std::size_t l = 0; l < problem.loads.size(); ++l) {
    std::span<const double> warm;
    if (warm_start != nullptr && l < warm_start->size()) warm = (*warm_start)[l];
    auto sol = grid::solve_state(g, theta, problem.loads[l].f, problem.materials, options, warm);
    ev.cg_iterations += sol.cg.iterations;
    ev.sigma.push_back(grid::face_fluxes(g, lambda, sol.u));
    ev.u.push_back(std::move(sol.u));
    weights.push_back(problem.loads[l].weight);
  }
  ev.psi = grid::psi_field(g, ev.sigma, weights, problem.psi_rule);
  ev.lower = objective(grid::weighted_cells(g, ev.psi), theta, problem.materials);
  return ev;
}

Bounds bounds(const GridProblem& problem, const DesignField& theta, const std::vector<double>& psi) {
  const auto cells = grid::weighted_cells(*problem.grid, psi);
  const DistributionFunction dist(cells);
  Bounds b;
  b.thresholds = thresholds(dist, problem.quantities);
  b.bathtub = allocate(cells, problem.materials, problem.quantities, b.thresholds);
  b.lower = objective(cells, theta, problem.materials);
  b.upper = objective(cells, b.bathtub.theta, problem.materials);
  return b;
}

DesignField uniform_design(const GridProblem& problem) {
  const double total = problem.grid->total_measure();
  std::vector<double> fractions;
  for (double q : problem.quantities) fractions.push_back(q / total);
  return DesignField::uniform(problem.grid->measures(), fractions);
}

double design_change(const DesignField& a, const DesignField& b) {
  double acc = 0.0;
  for (std::size_t c = 0; c < a.cells(); ++c) {
    const auto ra = a.row(c);
    const auto rb = b.row(c);
    double row = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) row += std::abs(ra[i] - rb[i]);
    acc += a.measure(c) * row;
  }
  return acc / (2.0 * a.total_measure());
}

double relative_flux_difference(const std::vector<grid::FaceFluxField>& a,
                                const std::vector<grid::FaceFluxField>& b) {
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    for (std::size_t k = 0; k < a[l].x_faces.size(); ++k) {
      diff += std::pow(a[l].x_faces[k] - b[l].x_faces[k], 2);
      norm += std::pow(b[l].x_faces[k], 2);
    }
    for (std::size_t k = 0; k < a[l].y_faces.size(); ++k) {
      diff += std::pow(a[l].y_faces[k] - b[l].y_faces[k], 2);
      norm += std::pow(b[l].y_faces[k], 2);
    }
  }
  if (norm == 0.0) return std::sqrt(diff);
  return std::sqrt(diff / norm);
}

namespace {

DesignField blend(const DesignField& theta, const DesignField& target, double omega) {
  std::vector<double> data(theta.data().size());
  const auto t = theta.data();
  const auto s = target.data();
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = (1.0 - omega) * t[k] + omega * s[k];
  DesignField out(std::vector<double>(theta.measures().begin(), theta.measures().end()), theta.materials(),
                  std::move(data));
  for (std::size_t c = 0; c < out.cells(); ++c) {
    auto row = out.row(c);
    const auto fixed = checked_simplex(row);
    std::copy(fixed.begin(), fixed.end(), row.begin());
  }
  return out;
}

}  // namespace

SaddleResult alternate(const GridProblem& problem, const DesignField& theta0, SaddleOptions options,
                       const std::function<void(const IterationRecord&)>& on_iteration) {
  problem.validate();
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw Error("alternate: damping must lie in (0, 1]");
  if (theta0.cells() != problem.grid->active_count() || theta0.materials() != problem.materials.size()) {
    throw Error("alternate: initial design does not match the problem");
  }
  theta0.audit({problem.quantities, ConstraintMode::Exact});

  SaddleResult result;
  result.diagnostics.best_lower = -std::numeric_limits<double>::infinity();
  result.diagnostics.best_upper = std::numeric_limits<double>::infinity();
  result.stop_reason = "max_iters";

  DesignField theta = theta0;
  DesignField anchor;  // last accepted design and its bathtub target
  DesignField target;
  double anchor_lower = -std::numeric_limits<double>::infinity();
  double omega = options.damping;
  std::vector<grid::Field> warm;
  std::vector<grid::FaceFluxField> previous_sigma;
  for (int it = 1; it <= options.max_iters; ++it) {
    Evaluation ev = evaluate(problem, theta, options.state, warm.empty() ? nullptr : &warm);
    Bounds b = bounds(problem, theta, ev.psi);

    IterationRecord rec;
    rec.iter = it;
    rec.lower = b.lower;
    rec.upper = b.upper;
    rec.gap = b.upper - b.lower;
    rec.residual = previous_sigma.empty() ? 0.0 : relative_flux_difference(ev.sigma, previous_sigma);

    rec.accepted = options.step_rule == StepRule::Constant || b.lower >= anchor_lower;
    if (rec.accepted) {
      if (options.step_rule == StepRule::Backtracking && it > 1) omega = std::min(options.damping, 2.0 * omega);
      anchor = theta;
      target = b.bathtub.theta;
      anchor_lower = b.lower;
    } else {
      omega *= 0.5;
    }
    rec.omega = omega;
    DesignField next = blend(anchor, target, omega);
    rec.change = design_change(next, anchor);

    auto& diag = result.diagnostics;
    diag.best_upper = std::min(diag.best_upper, b.upper);
    if (b.lower > diag.best_lower) {
      diag.best_lower = b.lower;
      result.best_iteration = it;
      result.theta = theta;
      result.bounds = b;
      result.state = ev;
    }
    diag.iterations.push_back(rec);
    if (on_iteration) on_iteration(rec);

    warm = ev.u;
    previous_sigma = std::move(ev.sigma);
    if (diag.certified_gap() <= options.tol_gap * std::abs(diag.best_lower)) {
      result.converged = true;
      result.stop_reason = "gap";
      break;
    }
    if (rec.change <= options.tol_change) {
      result.converged = true;
      result.stop_reason = "change";
      break;
    }
    theta = std::move(next);
  }
  return result;
}

GridCertificate certify_grid(const GridProblem& problem, const DesignField& theta,
                             const std::vector<grid::FaceFluxField>& sigma, CertifyGridOptions options) {
  problem.validate();
  const auto& g = *problem.grid;
  GridCertificate cert;

  const Evaluation own = evaluate(problem, theta, options.state);
  cert.flux_residual = relative_flux_difference(sigma, own.sigma);

  std::vector<double> weights;
  for (const auto& l : problem.loads) weights.push_back(l.weight);
  const auto psi = grid::psi_field(g, sigma, weights, problem.psi_rule);
  const Bounds b = bounds(problem, theta, psi);
  cert.lower = b.lower;
  cert.upper = b.upper;
  cert.relative_gap = b.lower != 0.0 ? (b.upper - b.lower) / std::abs(b.lower) : b.upper - b.lower;

  const auto& alphas = b.thresholds.alphas;
  const std::size_t n = problem.materials.size();
  // Dominant bathtub material per cell; cells on a shared level get n.
  std::vector<std::size_t> label(g.size(), n + 1);
  for (std::size_t k = 0; k < theta.cells(); ++k) {
    const auto row = b.bathtub.theta.row(k);
    std::size_t lab = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (row[i] >= 1.0 - options.fraction_tol) lab = i;
    }
    label[g.active_cells()[k]] = lab;
  }
  const auto near_interface = [&](std::size_t k) {
    const std::size_t c = g.active_cells()[k];
    const auto ci = static_cast<long long>(c % g.nx());
    const auto cj = static_cast<long long>(c / g.nx());
    const long long w = options.interface_cells;
    for (long long j = std::max(0LL, cj - w); j <= std::min<long long>(g.ny() - 1, cj + w); ++j) {
      for (long long i = std::max(0LL, ci - w); i <= std::min<long long>(g.nx() - 1, ci + w); ++i) {
        const std::size_t lab = label[static_cast<std::size_t>(j) * g.nx() + static_cast<std::size_t>(i)];
        if (lab == n || (lab <= n && lab != label[c])) return true;
      }
    }
    return label[c] == n;
  };

  double violated = 0.0;
  double far = 0.0;
  for (std::size_t c = 0; c < theta.cells(); ++c) {
    const auto row = theta.row(c);
    const double v = psi[c];
    bool bad = false;
    for (std::size_t i = 0; i < n && !bad; ++i) {
      const double upper = i == 0 ? std::numeric_limits<double>::infinity() : alphas[i - 1];
      const bool in_band = alphas[i] <= v && v <= upper;
      if (row[i] > options.fraction_tol && !in_band) bad = true;
      // Open strip: the material must fill the cell.
      if (alphas[i] < v && v < upper && row[i] < 1.0 - options.fraction_tol) bad = true;
    }
    if (bad) {
      violated += theta.measure(c);
      if (!near_interface(c)) far += theta.measure(c);
    }
  }
  cert.strip_violation_fraction = violated / theta.total_measure();
  cert.far_violation_fraction = far / theta.total_measure();
  cert.passed = cert.flux_residual <= options.flux_residual_tol && cert.far_violation_fraction <= options.violation_tol;
  return cert;
}

}  // namespace bangbang::saddle
