#include <algorithm>
#include <cmath>
#include <numbers>

#include "bangbang/error.hpp"
#include "bangbang/radial.hpp"
#include "doctest.h"

using namespace bangbang;
using namespace bangbang::radial;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<Material> kThree{{"a", 1.0, 1.0}, {"b", 2.0, 2.0}, {"c", 4.0, 4.0}};

PiecewisePoly inner_indicator() { return {{0.0, 0.5, 1.0}, {LaurentPoly::constant(1.0), LaurentPoly()}}; }
PiecewisePoly outer_indicator() { return {{0.0, 0.5, 1.0}, {LaurentPoly(), LaurentPoly::constant(1.0)}}; }
// f = -2 on [0, 1] and -1/r on (1, 2]: sigma = r, then 1, so psi = r^2 then 1.
PiecewisePoly plateau_source() {
  return {{0.0, 1.0, 2.0}, {LaurentPoly::constant(-2.0), LaurentPoly::monomial(-1, -1.0)}};
}

struct Pipeline {
  std::vector<RadialFlux> fluxes;
  PsiFunction psi;
  RadialDistribution dist;
  RadialDesign design;
};

Pipeline run(const std::vector<PiecewisePoly>& sources, const std::vector<double>& weights, int d, double R,
             const std::vector<Material>& m, const std::vector<double>& eta, AlphaSearch search = {}) {
  std::vector<RadialFlux> fl;
  for (const auto& s : sources) fl.push_back(radial_flux(s, d, R));
  auto psi = assemble_psi(fl, weights);
  RadialDistribution dist(psi, monotone_segments(psi));
  std::vector<double> q;
  for (double e : eta) q.push_back(e * unit_ball_volume(d) * std::pow(R, d));
  auto design = solve_radial_design(dist, m, q, search);
  return {std::move(fl), std::move(psi), std::move(dist), std::move(design)};
}

std::vector<double> unit_disk_radii() {
  return {std::sqrt((-0.8 + std::sqrt(0.89)) / 2.0), std::sqrt((-0.4 + std::sqrt(0.41)) / 2.0),
          std::sqrt((0.4 + std::sqrt(0.41)) / 2.0), std::sqrt((0.8 + std::sqrt(0.89)) / 2.0)};
}

// d-volume of {psi > alpha} by a fine midpoint rule over shells.
double shell_quadrature(const PsiFunction& psi, double alpha, int n = 200000) {
  double v = 0.0;
  const double h = psi.radius / n;
  for (int k = 0; k < n; ++k) {
    const double r = (k + 0.5) * h;
    if (psi(r) > alpha) v += shell_volume(psi.dimension, k * h, (k + 1) * h);
  }
  return v;
}

}  // namespace

TEST_CASE("radial flux of the unit-disk source") {
  const auto fl = radial_flux(inner_indicator(), 2, 1.0);
  for (double r : {0.1, 0.3, 0.49}) CHECK(fl(r) == doctest::Approx(-r / 2.0));
  for (double r : {0.5, 0.7, 1.0}) CHECK(fl(r) == doctest::Approx(-1.0 / (8.0 * r)));
  const auto fo = radial_flux(outer_indicator(), 2, 1.0);
  CHECK(fo(0.3) == 0.0);
  for (double r : {0.6, 0.9}) CHECK(fo(r) == doctest::Approx(-(r * r - 0.25) / (2.0 * r)));
}

TEST_CASE("divergence identity holds coefficient-wise on every example source") {
  struct Case {
    PiecewisePoly f;
    int d;
    double R;
  };
  const std::vector<Case> cases{{inner_indicator(), 2, 1.0},
                                {outer_indicator(), 2, 1.0},
                                {plateau_source(), 2, 2.0},
                                {PiecewisePoly({0.0, 1.0}, {LaurentPoly(0, {1.0, -2.0, 3.0})}), 3, 1.0}};
  for (const auto& c : cases) {
    const auto fl = radial_flux(c.f, c.d, c.R);
    const auto& br = fl.sigma.breakpoints();
    for (std::size_t p = 0; p < fl.sigma.size(); ++p) {
      // (r^(d-1) sigma)' + r^(d-1) f = 0 as a Laurent polynomial.
      const double mid = 0.5 * (br[p] + br[p + 1]);
      const LaurentPoly lhs = fl.sigma.piece(p).shifted(c.d - 1).derivative();
      const LaurentPoly rhs = c.f.piece(c.f.locate(mid)).shifted(c.d - 1);
      const LaurentPoly sum = lhs + rhs;
      for (double v : sum.coeffs()) CHECK(std::abs(v) <= 1e-14);
    }
  }
}

TEST_CASE("psi formulas and monotone pieces") {
  const auto p1 = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  for (double r : {0.2, 0.45}) CHECK(p1.psi(r) == doctest::Approx(r * r / 4.0));
  for (double r : {0.55, 0.9}) CHECK(p1.psi(r) == doctest::Approx(1.0 / (64.0 * r * r)));
  const auto& s1 = p1.dist.segmentation().segments;
  REQUIRE(s1.size() == 2);
  CHECK(s1[0].trend == Trend::Increasing);
  CHECK(s1[1].trend == Trend::Decreasing);
  CHECK(s1[0].b == doctest::Approx(0.5));

  const auto p3 = run({inner_indicator(), outer_indicator()}, {3.0, 1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  for (double r : {0.2, 0.45}) CHECK(p3.psi(r) == doctest::Approx(3.0 * r * r / 4.0));
  for (double r : {0.55, 0.8, 0.99}) {
    CHECK(p3.psi(r) == doctest::Approx((4 * std::pow(r, 4) - 2 * r * r + 1) / (16 * r * r)));
  }
  const auto& s3 = p3.dist.segmentation().segments;
  REQUIRE(s3.size() == 3);
  CHECK(s3[0].trend == Trend::Increasing);
  CHECK(s3[1].trend == Trend::Decreasing);
  CHECK(s3[2].trend == Trend::Increasing);
  CHECK(std::abs(s3[1].b - 1.0 / std::sqrt(2.0)) <= 1e-10);
  CHECK(std::abs(p3.psi(s3[1].b) - 0.125) <= 1e-10);
}

TEST_CASE("distribution function against shell quadrature") {
  const auto p = run({inner_indicator(), outer_indicator()}, {3.0, 1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  for (double alpha : {0.0, 0.05, 0.1, 0.125, 0.13, 0.15, 0.18, 0.2}) {
    CHECK(p.dist(alpha) == doctest::Approx(shell_quadrature(p.psi, alpha)).epsilon(1e-4));
  }
  const auto p1 = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  CHECK(p1.dist(1.0 / 64.0) / kPi == doctest::Approx(15.0 / 16.0).epsilon(1e-13));
}

TEST_CASE("unit-disk three-material radii match the closed forms") {
  const auto p = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const auto got = p.design.interfaces();
  const auto want = unit_disk_radii();
  REQUIRE(got.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-9);
  // Band order from the centre: strong, medium, weak, medium, strong.
  const std::vector<std::size_t> order{2, 1, 0, 1, 2};
  for (std::size_t b = 0; b < 5; ++b) CHECK(p.design.bands[b].theta[order[b]] == 1.0);
}

TEST_CASE("two-load radii match the tabulated values") {
  const auto p = run({inner_indicator(), outer_indicator()}, {3.0, 1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const std::vector<double> table{0.4085, 0.4395, 0.5800, 0.6955, 0.7189, 0.8621};
  const auto got = p.design.interfaces();
  REQUIRE(got.size() == table.size());
  for (std::size_t k = 0; k < table.size(); ++k) CHECK(std::abs(got[k] - table[k]) <= 5e-4);
}

TEST_CASE("alpha_2 exceeds the interior minimum exactly when eta_1 + eta_2 < 5/6") {
  for (double s : {0.6, 0.7, 0.8, 0.82, 0.85, 0.9}) {
    const std::vector<double> eta{s / 2.0, s / 2.0, 1.0 - s};
    const auto p = run({inner_indicator(), outer_indicator()}, {3.0, 1.0}, 2, 1.0, kThree, eta);
    CAPTURE(s);
    CHECK((p.design.thresholds.alphas[1] > 0.125) == (s < 5.0 / 6.0));
  }
}

TEST_CASE("plateau level: jump 3/4 at alpha = 1 and the admissible family") {
  const auto p = run({plateau_source()}, {1.0}, 2, 2.0, kThree, {0.5, 0.3, 0.2});
  const double mu = 4.0 * kPi;
  CHECK((p.dist.left_limit(1.0) - p.dist(1.0)) / mu == doctest::Approx(0.75).epsilon(1e-13));
  REQUIRE(p.dist.fat_levels().size() == 1);
  CHECK(p.dist.fat_levels()[0] == doctest::Approx(1.0));

  // eta_1 <= 3/4 < eta_1 + eta_2: the plateau holds materials 1 and 2.
  REQUIRE(p.design.ledger.size() == 1);
  const auto& level = p.design.ledger[0];
  CHECK(level.level == doctest::Approx(1.0));
  CHECK(level.k_minus == 0);
  CHECK(level.k_plus == 1);
  CHECK(level.amounts[0] == doctest::Approx(0.5 * mu));
  CHECK(level.amounts[1] == doctest::Approx(0.25 * mu));

  // Any other split of the plateau with the same amounts has the same energy.
  RadialDesign other = p.design;
  other.bands.clear();
  for (const auto& b : p.design.bands) {
    if (b.r_lo < 1.0 - 1e-12) other.bands.push_back(b);
  }
  const double r_mid = std::sqrt(1.0 + 0.25 * mu / kPi);  // material 2 first, then material 1
  other.bands.push_back({1.0, r_mid, {0.0, 1.0, 0.0}});
  other.bands.push_back({r_mid, 2.0, {1.0, 0.0, 0.0}});
  const double a = radial_objective(p.design, p.psi, kThree);
  const double b = radial_objective(other, p.psi, kThree);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  RadialDesign mixed = other;
  mixed.bands.resize(mixed.bands.size() - 2);
  mixed.bands.push_back({1.0, 2.0, {2.0 / 3.0, 1.0 / 3.0, 0.0}});
  CHECK(std::abs(radial_objective(mixed, p.psi, kThree) - a) <= 1e-12 * std::abs(a));
}

TEST_CASE("reconstructed state: closed form for one material and continuity at interfaces") {
  const std::vector<Material> one{{"m", 2.5, 2.5}};
  const auto p = run({inner_indicator()}, {1.0}, 2, 1.0, one, {1.0});
  const auto u = reconstruct_state(p.fluxes[0], p.design, one);
  const double lam = 2.5;
  const auto exact = [&](double r) {
    return r >= 0.5 ? std::log(1.0 / r) / (8.0 * lam) : std::log(2.0) / (8.0 * lam) + (0.25 - r * r) / (4.0 * lam);
  };
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    CHECK(u(r) == doctest::Approx(exact(r)).epsilon(1e-12));
    if (r > 0.0) CHECK(std::abs(lam * u.derivative(r) - p.fluxes[0](r)) <= 1e-10);
  }

  const auto q = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const auto v = reconstruct_state(q.fluxes[0], q.design, kThree);
  for (double r : q.design.interfaces()) {
    CHECK(std::abs(v(r - 1e-9) - v(r + 1e-9)) <= 1e-8);
  }
  CHECK(v(1.0) == 0.0);
}

TEST_CASE("certificates pass on the worked examples") {
  const auto p1 = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const std::vector<double> q1{0.4 * kPi, 0.4 * kPi, 0.2 * kPi};
  const auto c1 = certify(p1.design, p1.fluxes, p1.psi, kThree, q1);
  CHECK(c1.passed);
  CHECK(c1.state_residual[0] <= 1e-9);
  CHECK(c1.saddle_samples == 100);
  CHECK(c1.saddle_violations == 0);

  const auto p3 = run({inner_indicator(), outer_indicator()}, {3.0, 1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const auto c3 = certify(p3.design, p3.fluxes, p3.psi, kThree, q1);
  CHECK(c3.passed);
  for (double r : c3.state_residual) CHECK(r <= 1e-9);
  CHECK(c3.saddle_violations == 0);
}

TEST_CASE("random rearrangements keep volumes and never beat the optimum") {
  const auto p = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const std::vector<double> q{0.4 * kPi, 0.4 * kPi, 0.2 * kPi};
  const double best = radial_objective(p.design, p.psi, kThree);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto other = random_rearrangement(p.design, q, seed);
    const auto vol = other.material_volumes();
    for (std::size_t i = 0; i < 3; ++i) CHECK(vol[i] == doctest::Approx(q[i]).epsilon(1e-12));
    CHECK(radial_objective(other, p.psi, kThree) <= best * (1.0 + 1e-12));
  }
}

TEST_CASE("radii do not depend on the bisection bracket") {
  AlphaSearch wide;
  wide.bracket_stretch = 0.37;
  const auto a = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const auto b = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2}, wide);
  const auto ra = a.design.interfaces();
  const auto rb = b.design.interfaces();
  REQUIRE(ra.size() == rb.size());
  for (std::size_t k = 0; k < ra.size(); ++k) CHECK(std::abs(ra[k] - rb[k]) <= 1e-10);
}

TEST_CASE("fine shell bathtub converges to the continuous alpha_1") {
  const auto p = run({inner_indicator()}, {1.0}, 2, 1.0, kThree, {0.4, 0.4, 0.2});
  const double exact = p.design.thresholds.alphas[0];
  double previous = 1.0;
  for (int n : {100, 1000, 10000}) {
    std::vector<double> m, v;
    for (int k = 0; k < n; ++k) {
      m.push_back(shell_volume(2, double(k) / n, double(k + 1) / n));
      v.push_back(p.psi((k + 0.5) / n));
    }
    const WeightedCells cells(m, v);
    const DistributionFunction dist(cells);
    const auto th = thresholds(dist, std::vector<double>{0.4 * kPi, 0.4 * kPi, 0.2 * kPi});
    const double err = std::abs(th.alphas[0] - exact);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous <= 1e-4 * exact);
}

TEST_CASE("three-dimensional ball with two materials") {
  // f = 1 in R^3: sigma = -r/3, psi = r^2/9 increasing; the weak material takes the outer shell.
  const PiecewisePoly f({0.0, 1.0}, {LaurentPoly::constant(1.0)});
  const std::vector<Material> two{{"weak", 1.0, 1.0}, {"strong", 3.0, 3.0}};
  const auto p = run({f}, {1.0}, 3, 1.0, two, {0.3, 0.7});
  const auto r = p.design.interfaces();
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(std::cbrt(0.7)).epsilon(1e-10));
  CHECK(p.design.bands[1].theta[0] == 1.0);
}

TEST_CASE("single material gives a single band") {
  const std::vector<Material> one{{"m", 1.0, 1.0}};
  const auto p = run({inner_indicator()}, {1.0}, 2, 1.0, one, {1.0});
  REQUIRE(p.design.bands.size() == 1);
  CHECK(p.design.bands[0].theta == std::vector<double>{1.0});
  CHECK(p.design.interfaces().empty());
}

TEST_CASE("sources singular at the origin are rejected") {
  const PiecewisePoly bad({0.0, 1.0}, {LaurentPoly::monomial(-1, 1.0)});
  CHECK_THROWS_AS(radial_flux(bad, 2, 1.0), Error);
  const PiecewisePoly log_term({0.0, 0.5, 1.0}, {LaurentPoly::constant(1.0), LaurentPoly::monomial(-2, 1.0)});
  CHECK_THROWS_AS(radial_flux(log_term, 2, 1.0), SolverError);
}
