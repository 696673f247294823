#include "bangbang/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace bangbang::grid {

namespace {

// int sqrt(r^2 - x^2) dx
double half_chord_integral(double r, double x) {
  const double xc = std::clamp(x, -r, r);
  return 0.5 * (xc * std::sqrt(std::max(0.0, r * r - xc * xc)) + r * r * std::asin(xc / r));
}

}  // namespace

double disk_rectangle_area(double r, double x0, double x1, double y0, double y1) {
  x0 = std::max(x0, -r);
  x1 = std::min(x1, r);
  if (!(x1 > x0) || !(y1 > y0)) return 0.0;
  std::vector<double> cuts{x0, x1};
  for (double yy : {y0, y1}) {
    if (std::abs(yy) < r) {
      const double s = std::sqrt(r * r - yy * yy);
      for (double c : {-s, s}) {
        if (c > x0 && c < x1) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(b > a)) continue;
    const double m = 0.5 * (a + b);
    const double s = std::sqrt(std::max(0.0, r * r - m * m));
    const bool upper_is_chord = s < y1;
    const bool lower_is_chord = -s > y0;
    const double upper = upper_is_chord ? s : y1;
    const double lower = lower_is_chord ? -s : y0;
    if (!(upper > lower)) continue;
    const double chord = half_chord_integral(r, b) - half_chord_integral(r, a);
    area += (upper_is_chord ? chord : y1 * (b - a)) - (lower_is_chord ? -chord : y0 * (b - a));
  }
  return area;
}

Grid2D::Grid2D(const Rectangle& rect, std::size_t nx, std::size_t ny, MeasureRule rule)
    : rect_(rect), nx_(nx), ny_(ny), rule_(rule) {
  if (nx == 0 || ny == 0) throw Error("grid: nx and ny must be positive");
  if (!(rect.width > 0.0) || !(rect.height > 0.0)) throw Error("grid: extents must be positive");
  h_ = rect.width / static_cast<double>(nx);
  const double hy = rect.height / static_cast<double>(ny);
  if (std::abs(h_ - hy) > 1e-12 * h_) throw Error("grid: cells must be square (width/nx == height/ny)");

  const double cx = 0.5 * rect.width;
  const double cy = 0.5 * rect.height;
  const double R = disk_radius();
  active_index_.assign(size(), npos);
  for (std::size_t c = 0; c < size(); ++c) {
    const bool inside = !rect.disk_mask || radius(c) < R;
    if (inside) {
      active_index_[c] = active_.size();
      active_.push_back(c);
    }
  }
  if (active_.empty()) throw Error("grid: the mask contains no cell centre");

  // Connectivity of the active set.
  std::vector<char> seen(size(), 0);
  std::deque<std::size_t> queue{active_.front()};
  seen[active_.front()] = 1;
  std::size_t reached = 0;
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    ++reached;
    const std::size_t i = c % nx_;
    const std::size_t j = c / nx_;
    const std::size_t nb[4] = {i > 0 ? c - 1 : npos, i + 1 < nx_ ? c + 1 : npos, j > 0 ? c - nx_ : npos,
                               j + 1 < ny_ ? c + nx_ : npos};
    for (std::size_t q : nb) {
      if (q != npos && active(q) && !seen[q]) {
        seen[q] = 1;
        queue.push_back(q);
      }
    }
  }
  if (reached != active_.size()) throw Error("grid: masked-in cells are not connected");

  measures_.resize(active_.size());
  bdist_.assign(4 * active_.size(), 0.0);
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const std::size_t c = active_[k];
    const std::size_t i = c % nx_;
    const std::size_t j = c / nx_;
    const double xc = x(c);
    const double yc = y(c);
    if (rect.disk_mask && rule == MeasureRule::CutCell) {
      measures_[k] = disk_rectangle_area(R, xc - 0.5 * h_ - cx, xc + 0.5 * h_ - cx, yc - 0.5 * h_ - cy,
                                         yc + 0.5 * h_ - cy);
    } else {
      measures_[k] = h_ * h_;
    }
    total_ += measures_[k];

    const bool nb_active[4] = {i > 0 && active(c - 1), i + 1 < nx_ && active(c + 1), j > 0 && active(c - nx_),
                               j + 1 < ny_ && active(c + nx_)};
    for (std::size_t dir = 0; dir < 4; ++dir) {
      if (nb_active[dir]) continue;
      double d = 0.5 * h_;
      if (rect.disk_mask) {
        const double dx = xc - cx;
        const double dy = yc - cy;
        const double along = dir < 2 ? dx : dy;
        const double across = dir < 2 ? dy : dx;
        const double half = std::sqrt(std::max(0.0, R * R - across * across));
        d = (dir % 2 == 1) ? half - along : along + half;
        d = std::clamp(d, 1e-8 * h_, h_);
      }
      bdist_[4 * k + dir] = d;
    }
  }
}

Grid2D Grid2D::with_spacing(const Rectangle& rect, double h, MeasureRule rule) {
  if (!(h > 0.0)) throw Error("grid: spacing must be positive");
  const double fx = rect.width / h;
  const double fy = rect.height / h;
  const double nx = std::round(fx);
  const double ny = std::round(fy);
  if (std::abs(fx - nx) > 1e-9 * fx || std::abs(fy - ny) > 1e-9 * fy || nx < 1 || ny < 1) {
    std::ostringstream os;
    os << "grid: extents " << rect.width << " x " << rect.height << " are not multiples of h = " << h;
    throw Error(os.str());
  }
  return {rect, static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), rule};
}

double Grid2D::radius(std::size_t c) const {
  return std::hypot(x(c) - 0.5 * rect_.width, y(c) - 0.5 * rect_.height);
}

Field sample(const Grid2D& grid, const std::function<double(double, double)>& f) {
  Field out(grid.size(), 0.0);
  for (std::size_t c : grid.active_cells()) out[c] = f(grid.x(c), grid.y(c));
  return out;
}

Field sample_radial(const Grid2D& grid, const std::function<double(double)>& f) {
  Field out(grid.size(), 0.0);
  for (std::size_t c : grid.active_cells()) out[c] = f(grid.radius(c));
  return out;
}

Field lambda_field(const Grid2D& grid, const DesignField& theta, std::span<const Material> materials) {
  if (theta.cells() != grid.active_count()) throw Error("lambda_field: design does not match the grid");
  Field out(grid.size(), 1.0);
  for (std::size_t k = 0; k < grid.active_count(); ++k) {
    out[grid.active_cells()[k]] = 1.0 / inverse_lambda_minus(theta.row(k), materials);
  }
  return out;
}

kernels::Stencil assemble(const Grid2D& grid, std::span<const double> lambda) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const double h = grid.h();
  kernels::Stencil a{nx, ny, std::vector<double>(grid.size(), 1.0), std::vector<double>(grid.size(), 0.0),
                     std::vector<double>(grid.size(), 0.0)};
  const auto harmonic = [](double p, double q) { return 2.0 / (1.0 / p + 1.0 / q); };
  for (std::size_t c : grid.active_cells()) {
    double diag = 0.0;
    for (std::size_t dir = 0; dir < 4; ++dir) {
      const double d = grid.boundary_distance(c, static_cast<Direction>(dir));
      if (d > 0.0) {
        diag += lambda[c] * h / d;
        continue;
      }
      const std::size_t q = dir == West ? c - 1 : dir == East ? c + 1 : dir == South ? c - nx : c + nx;
      const double k = harmonic(lambda[c], lambda[q]);
      diag += k;
      if (dir == East) a.east[c] = k;
      if (dir == North) a.north[c] = k;
    }
    a.diag[c] = diag;
  }
  return a;
}

StateSolution solve_state(const Grid2D& grid, const DesignField& theta, std::span<const double> f,
                          std::span<const Material> materials, StateOptions options,
                          std::span<const double> warm_start) {
  if (f.size() != grid.size()) throw Error("solve_state: source does not match the grid");
  const Field lambda = lambda_field(grid, theta, materials);
  const auto a = assemble(grid, lambda);
  Field b(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.active_count(); ++k) {
    const std::size_t c = grid.active_cells()[k];
    if (!std::isfinite(f[c])) throw SolverError("solve_state: non-finite source value");
    b[c] = f[c] * grid.measures()[k];
  }
  StateSolution sol;
  sol.u = warm_start.size() == grid.size() ? Field(warm_start.begin(), warm_start.end()) : Field(grid.size(), 0.0);
  sol.cg = kernels::conjugate_gradient(a, b, sol.u, options.cg);
  if (!sol.cg.converged) {
    std::ostringstream os;
    os.precision(6);
    os << "solve_state: conjugate gradients stopped after " << sol.cg.iterations
       << " iterations at relative residual " << sol.cg.relative_residual << "; history:";
    const auto& hist = sol.cg.history;
    const std::size_t step = std::max<std::size_t>(1, hist.size() / 10);
    for (std::size_t k = 0; k < hist.size(); k += step) os << ' ' << hist[k];
    throw SolverError(os.str());
  }
  return sol;
}

FaceFluxField face_fluxes(const Grid2D& grid, std::span<const double> lambda, std::span<const double> u) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  const double h = grid.h();
  FaceFluxField s{nx, ny, Field((nx + 1) * ny, 0.0), Field(nx * (ny + 1), 0.0)};
  const auto harmonic = [](double p, double q) { return 2.0 / (1.0 / p + 1.0 / q); };
  for (std::size_t c : grid.active_cells()) {
    const std::size_t i = c % nx;
    const std::size_t j = c / nx;
    const std::size_t xw = j * (nx + 1) + i;
    const std::size_t ys = c;
    // Each interior face is written from its west/south cell; boundary faces
    // from the single active side.
    for (std::size_t dir = 0; dir < 4; ++dir) {
      const double d = grid.boundary_distance(c, static_cast<Direction>(dir));
      const double outward_sign = (dir == East || dir == North) ? 1.0 : -1.0;
      if (d > 0.0) {
        const double outward = lambda[c] * (0.0 - u[c]) / d;
        const double value = outward_sign * outward;
        if (dir == West) s.x_faces[xw] = value;
        if (dir == East) s.x_faces[xw + 1] = value;
        if (dir == South) s.y_faces[ys] = value;
        if (dir == North) s.y_faces[ys + nx] = value;
        continue;
      }
      if (dir == East) s.x_faces[xw + 1] = harmonic(lambda[c], lambda[c + 1]) * (u[c + 1] - u[c]) / h;
      if (dir == North) s.y_faces[ys + nx] = harmonic(lambda[c], lambda[c + nx]) * (u[c + nx] - u[c]) / h;
    }
  }
  return s;
}

std::vector<double> divergence(const Grid2D& grid, const FaceFluxField& sigma) {
  std::vector<double> out(grid.active_count());
  const double h = grid.h();
  for (std::size_t k = 0; k < grid.active_count(); ++k) {
    const std::size_t c = grid.active_cells()[k];
    const double outflow = sigma.east(c) - sigma.west(c) + sigma.north(c) - sigma.south(c);
    out[k] = outflow * h / grid.measures()[k];
  }
  return out;
}

std::vector<double> psi_field(const Grid2D& grid, std::span<const FaceFluxField> fluxes,
                              std::span<const double> weights, PsiRule rule) {
  if (fluxes.size() != weights.size()) throw Error("psi_field: one weight per flux field required");
  std::vector<double> psi(grid.active_count(), 0.0);
  const double h = grid.h();
  for (std::size_t k = 0; k < grid.active_count(); ++k) {
    const std::size_t c = grid.active_cells()[k];
    double acc = 0.0;
    for (std::size_t l = 0; l < fluxes.size(); ++l) {
      const auto& s = fluxes[l];
      double value = 0.0;
      if (rule == PsiRule::AxisAverage) {
        const auto v = cell_flux(s, c);
        value = v[0] * v[0] + v[1] * v[1];
      } else if (rule == PsiRule::FaceDensity) {
        const double face[4] = {s.west(c), s.east(c), s.south(c), s.north(c)};
        double reach[4];
        for (std::size_t dir = 0; dir < 4; ++dir) {
          const double d = grid.boundary_distance(c, static_cast<Direction>(dir));
          reach[dir] = d > 0.0 ? d : 0.5 * h;
        }
        value = (face[0] * face[0] * reach[0] + face[1] * face[1] * reach[1]) / (reach[0] + reach[1]) +
                (face[2] * face[2] * reach[2] + face[3] * face[3] * reach[3]) / (reach[2] + reach[3]);
      } else {
        const double face[4] = {s.west(c), s.east(c), s.south(c), s.north(c)};
        for (std::size_t dir = 0; dir < 4; ++dir) {
          const double d = grid.boundary_distance(c, static_cast<Direction>(dir));
          const double share = d > 0.0 ? d * h : 0.5 * h * h;
          value += face[dir] * face[dir] * share;
        }
        value /= grid.measures()[k];
      }
      acc += weights[l] * value;
    }
    if (!std::isfinite(acc)) throw SolverError("psi_field: non-finite value in cell " + std::to_string(c));
    psi[k] = acc;
  }
  return psi;
}

double energy(const Grid2D& grid, std::span<const Field> u, std::span<const Field> f,
              std::span<const double> weights) {
  if (u.size() != f.size() || u.size() != weights.size()) throw Error("energy: mismatched load lists");
  double total = 0.0;
  for (std::size_t l = 0; l < u.size(); ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < grid.active_count(); ++k) {
      const std::size_t c = grid.active_cells()[k];
      acc += f[l][c] * u[l][c] * grid.measures()[k];
    }
    total += weights[l] * acc;
  }
  return total;
}

std::array<double, 2> cell_flux(const FaceFluxField& sigma, std::size_t c) {
  return {0.5 * (sigma.west(c) + sigma.east(c)), 0.5 * (sigma.south(c) + sigma.north(c))};
}

WeightedCells weighted_cells(const Grid2D& grid, std::vector<double> psi) {
  return {grid.measures(), std::move(psi)};
}

}  // namespace bangbang::grid
