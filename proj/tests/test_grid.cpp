#include <cmath>
#include <numbers>

#include "bangbang/grid.hpp"
#include "doctest.h"

using namespace bangbang;
using namespace bangbang::grid;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<Material> kOne{{"m", 1.0, 1.0}};

DesignField single(const Grid2D& g) { return DesignField::uniform(g.measures(), std::vector<double>{1.0}); }

double max_error(const Grid2D& g, const Field& u, const std::function<double(double, double)>& exact) {
  double err = 0.0;
  for (std::size_t c : g.active_cells()) err = std::max(err, std::abs(u[c] - exact(g.x(c), g.y(c))));
  return err;
}

StateOptions tight() {
  StateOptions o;
  o.cg.rel_tol = 1e-12;
  return o;
}

double square_error(double h) {
  const auto g = Grid2D::with_spacing({1.0, 1.0, false}, h);
  const auto f = sample(g, [](double x, double y) { return 2 * kPi * kPi * std::sin(kPi * x) * std::sin(kPi * y); });
  const auto s = solve_state(g, single(g), f, kOne, tight());
  return max_error(g, s.u, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
}

double disk_error(double h) {
  const double R = 1.0;
  const auto g = Grid2D::with_spacing({2 * R, 2 * R, true}, h, MeasureRule::CutCell);
  const auto f = sample_radial(g, [&](double r) { return 8 * R * R - 16 * r * r; });
  const auto s = solve_state(g, single(g), f, kOne, tight());
  return max_error(g, s.u, [&](double x, double y) {
    const double r2 = (x - R) * (x - R) + (y - R) * (y - R);
    return (R * R - r2) * (R * R - r2);
  });
}

}  // namespace

TEST_CASE("grid geometry") {
  const auto g = Grid2D::with_spacing({2.0, 1.0, false}, 0.25);
  CHECK(g.nx() == 8);
  CHECK(g.ny() == 4);
  CHECK(g.active_count() == 32);
  CHECK(g.total_measure() == doctest::Approx(2.0));
  CHECK(g.boundary_distance(0, West) == doctest::Approx(0.125));
  CHECK(g.boundary_distance(0, East) == 0.0);

  const auto d = Grid2D::with_spacing({2.0, 2.0, true}, 1.0 / 16);
  for (std::size_t c : d.active_cells()) CHECK(d.radius(c) < 1.0);
  for (std::size_t c = 0; c < d.size(); ++c) CHECK(d.active(c) == (d.radius(c) < 1.0));
}

TEST_CASE("disk-rectangle intersection areas") {
  const double r = 1.0;
  // Whole plane tiled by cells: areas add up to the disk.
  double total = 0.0;
  const int n = 37;
  const double h = 2.4 / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += disk_rectangle_area(r, -1.2 + i * h, -1.2 + (i + 1) * h, -1.2 + j * h, -1.2 + (j + 1) * h);
    }
  }
  CHECK(total == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(disk_rectangle_area(r, 0.0, 2.0, 0.0, 2.0) == doctest::Approx(kPi / 4));
  CHECK(disk_rectangle_area(r, -0.1, 0.1, -0.1, 0.1) == doctest::Approx(0.04));
  CHECK(disk_rectangle_area(r, 1.5, 2.0, 0.0, 1.0) == 0.0);
  // A boundary cell against a midpoint-rule count.
  const double x0 = 0.6, x1 = 0.8, y0 = 0.6, y1 = 0.8;
  const int m = 2000;
  double count = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double x = x0 + (i + 0.5) * (x1 - x0) / m, y = y0 + (j + 0.5) * (y1 - y0) / m;
      if (x * x + y * y < 1.0) count += 1.0;
    }
  }
  CHECK(disk_rectangle_area(r, x0, x1, y0, y1) == doctest::Approx(count * 0.04 / (m * m)).epsilon(1e-4));
}

TEST_CASE("cut-cell measures stay within the disk and approach its area") {
  for (double h : {1.0 / 16, 1.0 / 64}) {
    const auto g = Grid2D::with_spacing({2.0, 2.0, true}, h, MeasureRule::CutCell);
    for (double m : g.measures()) CHECK(m <= h * h * (1 + 1e-14));
    // Only slivers of cells whose centres lie outside are missing.
    CHECK(g.total_measure() <= kPi);
    CHECK(kPi - g.total_measure() <= 2 * kPi * h);
  }
}

TEST_CASE("manufactured solutions converge at second order") {
  const double e1 = square_error(1.0 / 16), e2 = square_error(1.0 / 32), e3 = square_error(1.0 / 64);
  CHECK(e1 / e2 >= 3.5);
  CHECK(e1 / e2 <= 4.5);
  CHECK(e2 / e3 >= 3.5);
  CHECK(e2 / e3 <= 4.5);
  const double d1 = disk_error(1.0 / 32), d2 = disk_error(1.0 / 64);
  CHECK(d1 / d2 >= 3.5);
  CHECK(d1 / d2 <= 4.5);
}

TEST_CASE("discrete conservation: div sigma = -f cell by cell") {
  const auto g = Grid2D::with_spacing({2.0, 2.0, true}, 1.0 / 32, MeasureRule::CutCell);
  const std::vector<Material> two{{"a", 1.0, 1.0}, {"b", 5.0, 5.0}};
  DesignField theta(g.measures(), 2);
  for (std::size_t k = 0; k < g.active_count(); ++k) {
    const double r = g.radius(g.active_cells()[k]);
    theta.row(k)[r < 0.5 ? 1 : 0] = 1.0;
  }
  const auto f = sample_radial(g, [](double r) { return r < 0.3 ? 1.0 : 0.2; });
  const auto s = solve_state(g, theta, f, two, tight());
  const auto lambda = lambda_field(g, theta, two);
  const auto sigma = face_fluxes(g, lambda, s.u);
  const auto div = divergence(g, sigma);
  double scale = 0.0, worst = 0.0, net = 0.0, load = 0.0;
  for (std::size_t k = 0; k < g.active_count(); ++k) {
    const std::size_t c = g.active_cells()[k];
    worst = std::max(worst, std::abs(div[k] + f[c]));
    scale = std::max(scale, std::abs(f[c]));
    net += div[k] * g.measures()[k];
    load += f[c] * g.measures()[k];
  }
  CHECK(worst <= 1e-8 * scale);
  CHECK(net == doctest::Approx(-load).epsilon(1e-9));
}

TEST_CASE("solutions respect the symmetry of the data") {
  const auto g = Grid2D::with_spacing({2.0, 2.0, true}, 1.0 / 16, MeasureRule::CutCell);
  const auto f = sample_radial(g, [](double r) { return 1.0 + r; });
  const auto s = solve_state(g, single(g), f, kOne, tight());
  const std::size_t n = g.nx();
  for (std::size_t c : g.active_cells()) {
    const std::size_t i = c % n, j = c / n;
    const double ref = s.u[c];
    CHECK(s.u[j * n + (n - 1 - i)] == doctest::Approx(ref).epsilon(1e-9));
    CHECK(s.u[(n - 1 - j) * n + i] == doctest::Approx(ref).epsilon(1e-9));
    CHECK(s.u[i * n + j] == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("serial and parallel state solves are identical") {
  const auto g = Grid2D::with_spacing({2.0, 1.0, false}, 1.0 / 64);
  const auto f = sample(g, [](double x, double y) { return x * (2 - x) + y; });
  StateOptions serial, parallel;
  serial.cg.exec = kernels::Exec::Serial;
  parallel.cg.exec = kernels::Exec::Parallel;
  const auto a = solve_state(g, single(g), f, kOne, serial);
  const auto b = solve_state(g, single(g), f, kOne, parallel);
  CHECK(a.cg.iterations == b.cg.iterations);
  CHECK(a.u == b.u);
}

TEST_CASE("psi rules and the energy identity on a rectangle") {
  const auto g = Grid2D::with_spacing({1.0, 1.0, false}, 1.0 / 32);
  const double lam = 2.0;
  const std::vector<Material> m{{"m", lam, lam}};
  const auto f = sample(g, [](double x, double y) { return 1.0 + x * y; });
  const auto s = solve_state(g, single(g), f, m, tight());
  const auto lambda = lambda_field(g, single(g), m);
  const std::vector<FaceFluxField> sigma{face_fluxes(g, lambda, s.u)};
  const std::vector<double> w{1.0};
  const auto density = psi_field(g, sigma, w, PsiRule::FaceDensity);
  const auto face = psi_field(g, sigma, w, PsiRule::FaceEnergy);
  const auto axis = psi_field(g, sigma, w, PsiRule::AxisAverage);
  double h_value = 0.0;
  for (std::size_t k = 0; k < g.active_count(); ++k) {
    CHECK(density[k] == doctest::Approx(face[k]).epsilon(1e-12));
    CHECK(axis[k] <= face[k] * (1 + 1e-12));  // (mean)^2 <= mean of squares
    h_value += g.measures()[k] * face[k] / lam;
  }
  const std::vector<Field> us{s.u}, fs{f};
  CHECK(h_value == doctest::Approx(energy(g, us, fs, w)).epsilon(1e-9));
}

TEST_CASE("solve_state rejects bad input") {
  const auto g = Grid2D::with_spacing({1.0, 1.0, false}, 0.25);
  const Field short_f(3, 1.0);
  CHECK_THROWS(solve_state(g, single(g), short_f, kOne));
  Field nan_f(g.size(), 1.0);
  nan_f[5] = std::nan("");
  CHECK_THROWS(solve_state(g, single(g), nan_f, kOne));
}
