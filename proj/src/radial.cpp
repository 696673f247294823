#include "bangbang/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "bangbang/roots.hpp"

namespace bangbang::radial {

namespace {

double eval_near_origin(const PiecewisePoly& f, double r) {
  if (r < kZeroRadius) return f.piece(0).coeff(0);
  return f(r);
}

double theta_weight(std::span<const double> theta, std::span<const Material> materials) {
  return inverse_lambda_minus(theta, materials);
}

}  // namespace

double RadialFlux::operator()(double r) const { return eval_near_origin(sigma, r); }

RadialFlux radial_flux(const PiecewisePoly& source, int dimension, double radius) {
  if (dimension < 1) throw Error("radial_flux: dimension must be >= 1");
  if (source.lower() != 0.0 || std::abs(source.upper() - radius) > 1e-14 * radius) {
    throw Error("radial_flux: source must cover exactly [0, R]");
  }
  const int d = dimension;
  std::vector<LaurentPoly> p_pieces;
  std::vector<LaurentPoly> s_pieces;
  const auto& breaks = source.breakpoints();
  double chained = 0.0;  // P at the left end of the current piece
  for (std::size_t p = 0; p < source.size(); ++p) {
    const LaurentPoly& f = source.piece(p);
    if (!f.is_zero() && f.highest() > kMaxSourceDegree) {
      throw SolverError("radial_flux: source piece " + std::to_string(p) + " exceeds degree " +
                        std::to_string(kMaxSourceDegree));
    }
    if (p == 0 && !f.is_zero() && f.lowest() < 0) {
      throw SolverError("radial_flux: first source piece must be bounded at r = 0");
    }
    const LaurentPoly g = f.shifted(d - 1);
    LaurentPoly anti;
    try {
      anti = g.antiderivative();
    } catch (const SolverError&) {
      throw SolverError("radial_flux: source piece " + std::to_string(p) + " has an r^-" + std::to_string(d) +
                        " term (logarithmic flux)");
    }
    const double a = breaks[p];
    const double offset = p == 0 ? 0.0 : chained - anti(a);
    LaurentPoly P = anti + LaurentPoly::constant(offset);
    chained = P(breaks[p + 1]);
    s_pieces.push_back((-1.0) * P.shifted(-(d - 1)));
    p_pieces.push_back(std::move(P));
  }
  return {d, PiecewisePoly(breaks, std::move(p_pieces)), PiecewisePoly(breaks, std::move(s_pieces))};
}

double PsiFunction::operator()(double r) const { return eval_near_origin(psi, r); }

PsiFunction assemble_psi(std::span<const RadialFlux> fluxes, std::span<const double> weights) {
  if (fluxes.empty() || fluxes.size() != weights.size()) throw Error("assemble_psi: one weight per flux required");
  const int d = fluxes.front().dimension;
  std::vector<double> breaks = fluxes.front().sigma.breakpoints();
  for (const auto& f : fluxes) {
    if (f.dimension != d) throw Error("assemble_psi: fluxes live in different dimensions");
    if (f.sigma.upper() != breaks.back()) throw Error("assemble_psi: fluxes live on different radii");
    breaks = merge_breakpoints(breaks, f.sigma.breakpoints());
  }
  std::vector<LaurentPoly> pieces(breaks.size() - 1);
  for (std::size_t i = 0; i < fluxes.size(); ++i) {
    const auto s = fluxes[i].sigma.refined(breaks);
    for (std::size_t p = 0; p < pieces.size(); ++p) pieces[p] = pieces[p] + weights[i] * (s.piece(p) * s.piece(p));
  }
  return {d, breaks.back(), PiecewisePoly(breaks, std::move(pieces))};
}

MonotoneSegmentation monotone_segments(const PsiFunction& psi) {
  std::vector<Segment> raw;
  const auto& breaks = psi.psi.breakpoints();
  for (std::size_t p = 0; p < psi.psi.size(); ++p) {
    const LaurentPoly& piece = psi.psi.piece(p);
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const auto value = [&](double r) { return r < kZeroRadius ? piece.coeff(0) : piece(r); };
    const LaurentPoly deriv = piece.derivative();
    if (deriv.is_zero()) {
      const double c = piece.coeff(0);
      raw.push_back({a, b, Trend::Constant, c, c});
      continue;
    }
    std::vector<double> roots;
    try {
      roots = sign_change_roots(deriv.numerator(), a, b);
    } catch (const SolverError& e) {
      throw SolverError("monotone_segments: root isolation failed on piece " + std::to_string(p) + ": " + e.what());
    }
    std::vector<double> cuts{a};
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    cuts.push_back(b);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double x0 = cuts[k];
      const double x1 = cuts[k + 1];
      if (!(x1 > x0)) continue;
      const double slope = poly_eval(deriv.numerator(), 0.5 * (x0 + x1));
      raw.push_back({x0, x1, slope > 0.0 ? Trend::Increasing : Trend::Decreasing, value(x0), value(x1)});
    }
  }
  MonotoneSegmentation out;
  for (const auto& s : raw) {
    if (!out.segments.empty()) {
      auto& last = out.segments.back();
      const bool same = last.trend == s.trend && (s.trend != Trend::Constant || last.psi_a == s.psi_a);
      if (same) {
        last.b = s.b;
        last.psi_b = s.psi_b;
        continue;
      }
    }
    out.segments.push_back(s);
  }
  return out;
}

RadialDistribution::RadialDistribution(PsiFunction psi, MonotoneSegmentation segmentation)
    : psi_(std::move(psi)), seg_(std::move(segmentation)) {
  total_ = shell_volume(psi_.dimension, 0.0, psi_.radius);
  for (const auto& s : seg_.segments) max_psi_ = std::max(max_psi_, s.psi_max());
}

double RadialDistribution::crossing(const Segment& s, double alpha) const {
  const auto f = [&](double r) { return psi_(r) - alpha; };
  return bracket_root(f, s.a, s.psi_a - alpha, s.b, s.psi_b - alpha);
}

double RadialDistribution::evaluate(double alpha, bool include_level) const {
  const int d = psi_.dimension;
  double vol = 0.0;
  for (const auto& s : seg_.segments) {
    if (s.trend == Trend::Constant) {
      if (s.psi_a > alpha || (include_level && s.psi_a == alpha)) vol += shell_volume(d, s.a, s.b);
      continue;
    }
    if (alpha < s.psi_min()) {
      vol += shell_volume(d, s.a, s.b);
    } else if (alpha < s.psi_max()) {
      const double r = crossing(s, alpha);
      vol += s.trend == Trend::Increasing ? shell_volume(d, r, s.b) : shell_volume(d, s.a, r);
    }
  }
  return vol;
}

double RadialDistribution::operator()(double alpha) const { return evaluate(alpha, false); }
double RadialDistribution::left_limit(double alpha) const { return evaluate(alpha, true); }

std::vector<double> RadialDistribution::fat_levels() const {
  std::vector<double> levels;
  for (const auto& s : seg_.segments) {
    if (s.trend == Trend::Constant) levels.push_back(s.psi_a);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::vector<double> RadialDistribution::breakpoint_levels() const {
  std::vector<double> levels;
  for (const auto& s : seg_.segments) {
    levels.push_back(s.psi_a);
    levels.push_back(s.psi_b);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

Thresholds radial_thresholds(const RadialDistribution& dist, std::span<const double> quantities, AlphaSearch search) {
  const double total = dist.total_measure();
  const double q_total = std::accumulate(quantities.begin(), quantities.end(), 0.0);
  if (std::abs(q_total - total) > kQuantityRelTol * total) {
    throw ConstraintError("radial_thresholds: quantities do not sum to the ball volume");
  }
  const double vtol = search.volume_tol * total;
  auto fat = dist.fat_levels();
  std::sort(fat.begin(), fat.end());

  Thresholds th;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < quantities.size(); ++k) {
    cumulative += quantities[k];
    const double target = cumulative;
    double alpha = 0.0;
    if (k + 1 == quantities.size() || dist(0.0) <= target + vtol) {
      alpha = 0.0;
    } else {
      std::optional<double> on_level;
      for (double c : fat) {
        if (dist(c) <= target + vtol && dist.left_limit(c) >= target - vtol) {
          on_level = c;
          break;
        }
      }
      if (on_level) {
        alpha = *on_level;
      } else {
        double lo = 0.0;
        double hi = dist.max_psi() * (1.0 + search.bracket_stretch);
        alpha = hi;
        for (int it = 0; it < search.max_iters; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (!(mid > lo && mid < hi)) {
            alpha = hi;
            break;
          }
          const double v = dist(mid);
          if (std::abs(v - target) <= vtol) {
            alpha = mid;
            break;
          }
          if (v > target) {
            lo = mid;
          } else {
            hi = mid;
          }
          alpha = hi;
        }
      }
    }
    th.alphas.push_back(alpha);
    th.attained.push_back(std::abs(dist(alpha) - target) <= vtol);
  }
  return th;
}

std::vector<double> RadialDesign::interfaces() const {
  std::vector<double> out;
  for (std::size_t b = 1; b < bands.size(); ++b) out.push_back(bands[b].r_lo);
  return out;
}

const RadialBand& RadialDesign::band_at(double r) const {
  auto it = std::upper_bound(bands.begin(), bands.end(), r, [](double x, const RadialBand& b) { return x < b.r_lo; });
  if (it == bands.begin()) return bands.front();
  return *(it - 1);
}

DesignField RadialDesign::as_design_field() const {
  std::vector<double> measures;
  std::vector<double> theta;
  const std::size_t n = bands.empty() ? 0 : bands.front().theta.size();
  for (const auto& b : bands) {
    measures.push_back(shell_volume(dimension, b.r_lo, b.r_hi));
    theta.insert(theta.end(), b.theta.begin(), b.theta.end());
  }
  return {std::move(measures), n, std::move(theta)};
}

std::vector<double> RadialDesign::material_volumes() const {
  std::vector<double> v(bands.empty() ? 0 : bands.front().theta.size(), 0.0);
  for (const auto& b : bands) {
    const double vol = shell_volume(dimension, b.r_lo, b.r_hi);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += vol * b.theta[i];
  }
  return v;
}

namespace {

// Smallest 0-based k with alpha_k < v; alphas are non-increasing.
std::size_t strip_material(std::span<const double> alphas, double v) {
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    if (alphas[k] < v) return k;
  }
  return alphas.size() - 1;
}

std::vector<double> unit_row(std::size_t n, std::size_t k) {
  std::vector<double> row(n, 0.0);
  row[k] = 1.0;
  return row;
}

}  // namespace

RadialDesign solve_radial_design(const RadialDistribution& dist, std::span<const Material> materials,
                                 std::span<const double> quantities, AlphaSearch search) {
  const std::size_t n = materials.size();
  if (n == 0 || quantities.size() != n) throw Error("solve_radial_design: one quantity per material required");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(materials[i - 1].lambda_min < materials[i].lambda_min)) {
      throw Error("solve_radial_design: lambda_min must be strictly increasing (merge equal materials first)");
    }
  }
  const PsiFunction& psi = dist.psi();
  const int d = psi.dimension;
  RadialDesign design;
  design.dimension = d;
  design.radius = psi.radius;
  design.thresholds = radial_thresholds(dist, quantities, search);
  const auto& alphas = design.thresholds.alphas;

  struct Pending {
    double a;
    double b;
    double level;
  };
  std::vector<Pending> fat_pieces;
  std::vector<double> strip_volume(n, 0.0);

  for (const auto& s : dist.segmentation().segments) {
    if (s.trend == Trend::Constant) {
      const double c = s.psi_a;
      if (std::find(alphas.begin(), alphas.end(), c) != alphas.end()) {
        fat_pieces.push_back({s.a, s.b, c});
      } else {
        const std::size_t k = strip_material(alphas, c);
        design.bands.push_back({s.a, s.b, unit_row(n, k)});
        strip_volume[k] += shell_volume(d, s.a, s.b);
      }
      continue;
    }
    std::vector<double> cuts{s.a, s.b};
    for (double alpha : alphas) {
      if (alpha > s.psi_min() && alpha < s.psi_max()) cuts.push_back(dist.crossing(s, alpha));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
      const double x0 = cuts[j];
      const double x1 = cuts[j + 1];
      const std::size_t k = strip_material(alphas, psi(0.5 * (x0 + x1)));
      design.bands.push_back({x0, x1, unit_row(n, k)});
      strip_volume[k] += shell_volume(d, x0, x1);
    }
  }

  // Shared level sets, highest level first so that a material's upper level
  // is settled before its lower one.
  std::vector<double> levels;
  for (const auto& f : fat_pieces) levels.push_back(f.level);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> placed(n, 0.0);
  const double total = dist.total_measure();
  const double vtol = std::max(search.volume_tol, 1e-12) * total;

  for (double level : levels) {
    std::vector<Pending> pieces;
    double level_measure = 0.0;
    for (const auto& f : fat_pieces) {
      if (f.level == level) {
        pieces.push_back(f);
        level_measure += shell_volume(d, f.a, f.b);
      }
    }
    std::sort(pieces.begin(), pieces.end(), [](const Pending& x, const Pending& y) { return x.a < y.a; });
    const auto k = static_cast<std::size_t>(std::find(alphas.begin(), alphas.end(), level) - alphas.begin());
    const auto [lo, hi] = admissible_range(alphas, k);

    FatLevel fat{level, level_measure, lo, hi, {}};
    double assigned = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      double amount = i < hi ? quantities[i] - strip_volume[i] - placed[i] : level_measure - assigned;
      if (amount < -vtol) {
        std::ostringstream os;
        os.precision(17);
        os << "solve_radial_design: material " << i << " over-allocated by " << -amount << " before level psi = "
           << level;
        throw InfeasibleError(os.str());
      }
      amount = std::clamp(amount, 0.0, level_measure - assigned);
      fat.amounts.push_back(amount);
      placed[i] += amount;
      assigned += amount;
    }

    // Lay the amounts out along the radius, inner pieces first.
    std::size_t piece = 0;
    double cursor = pieces.front().a;
    const double omega = unit_ball_volume(d);
    for (std::size_t i = lo; i <= hi; ++i) {
      double need = fat.amounts[i - lo];
      const bool last_material = i == hi;
      while (piece < pieces.size() && (need > vtol || (last_material && cursor < pieces[piece].b))) {
        const double end = pieces[piece].b;
        const double avail = shell_volume(d, cursor, end);
        double stop = end;
        if (!last_material && need < avail) {
          stop = std::min(end, std::pow(std::pow(cursor, d) + need / omega, 1.0 / d));
        }
        if (stop > cursor) design.bands.push_back({cursor, stop, unit_row(n, i)});
        need -= shell_volume(d, cursor, stop);
        cursor = stop;
        if (cursor >= end) {
          ++piece;
          if (piece < pieces.size()) cursor = pieces[piece].a;
        }
      }
    }
    design.ledger.push_back(std::move(fat));
  }

  std::sort(design.bands.begin(), design.bands.end(),
            [](const RadialBand& x, const RadialBand& y) { return x.r_lo < y.r_lo; });
  std::vector<RadialBand> merged;
  for (auto& b : design.bands) {
    if (!merged.empty() && merged.back().theta == b.theta) {
      merged.back().r_hi = b.r_hi;
    } else {
      merged.push_back(std::move(b));
    }
  }
  design.bands = std::move(merged);

  const auto vol = design.material_volumes();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(vol[i] - quantities[i]) > 1e-10 * total) {
      std::ostringstream os;
      os.precision(17);
      os << "solve_radial_design: material " << i << " received " << vol[i] << " of " << quantities[i];
      throw InfeasibleError(os.str());
    }
  }
  return design;
}

double radial_objective(const RadialDesign& design, const PsiFunction& psi, std::span<const Material> materials) {
  const int d = psi.dimension;
  const double surface = unit_ball_volume(d) * d;
  const auto& breaks = psi.psi.breakpoints();
  double total = 0.0;
  for (const auto& band : design.bands) {
    const double w = theta_weight(band.theta, materials);
    double integral = 0.0;
    for (std::size_t p = 0; p < psi.psi.size(); ++p) {
      const double a = std::max(band.r_lo, breaks[p]);
      const double b = std::min(band.r_hi, breaks[p + 1]);
      if (b <= a) continue;
      integral += psi.psi.piece(p).shifted(d - 1).integrate(a, b);
    }
    total += w * surface * integral;
  }
  return total;
}

RadialState::RadialState(const RadialFlux& flux, const RadialDesign& design, std::span<const Material> materials) {
  breaks_ = flux.sigma.breakpoints();
  std::vector<double> band_edges{0.0};
  for (const auto& b : design.bands) band_edges.push_back(b.r_hi);
  breaks_ = merge_breakpoints(breaks_, band_edges);
  const auto sig = flux.sigma.refined(breaks_);
  for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
    sigma_.push_back(sig.piece(p));
    weight_.push_back(theta_weight(design.band_at(0.5 * (breaks_[p] + breaks_[p + 1])).theta, materials));
  }
  node_.assign(breaks_.size(), 0.0);
  for (std::size_t p = sigma_.size(); p-- > 0;) {
    node_[p] = node_[p + 1] - weight_[p] * sigma_[p].integrate(breaks_[p], breaks_[p + 1]);
  }
}

std::size_t RadialState::locate(double r) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  if (it == breaks_.begin()) return 0;
  return std::min(static_cast<std::size_t>(it - breaks_.begin()) - 1, sigma_.size() - 1);
}

double RadialState::operator()(double r) const {
  const std::size_t p = locate(r);
  const double x1 = breaks_[p + 1];
  if (r < kZeroRadius) return node_[0];
  return node_[p + 1] - weight_[p] * sigma_[p].integrate(r, x1);
}

double RadialState::derivative(double r) const {
  const std::size_t p = locate(r);
  const double s = r < kZeroRadius ? sigma_[p].coeff(0) : sigma_[p](r);
  return weight_[p] * s;
}

RadialState reconstruct_state(const RadialFlux& flux, const RadialDesign& design,
                              std::span<const Material> materials) {
  return {flux, design, materials};
}

RadialDesign random_rearrangement(const RadialDesign& design, std::span<const double> quantities,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> parts(1, 3);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  struct Shell {
    std::size_t material;
    double volume;
  };
  std::vector<Shell> shells;
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    if (quantities[i] <= 0.0) continue;
    const int k = parts(rng);
    std::vector<double> w(static_cast<std::size_t>(k));
    for (double& x : w) x = unit(rng);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double x : w) shells.push_back({i, quantities[i] * x / sum});
  }
  std::shuffle(shells.begin(), shells.end(), rng);

  RadialDesign out;
  out.dimension = design.dimension;
  out.radius = design.radius;
  const int d = design.dimension;
  const double omega = unit_ball_volume(d);
  double volume = 0.0;
  double r = 0.0;
  for (std::size_t s = 0; s < shells.size(); ++s) {
    volume += shells[s].volume;
    const double next = s + 1 == shells.size() ? design.radius : std::pow(volume / omega, 1.0 / d);
    if (next > r) out.bands.push_back({r, std::min(next, design.radius), unit_row(quantities.size(), shells[s].material)});
    r = next;
  }
  return out;
}

CertificateReport certify(const RadialDesign& design, std::span<const RadialFlux> fluxes, const PsiFunction& psi,
                          std::span<const Material> materials, std::span<const double> quantities,
                          CertifyOptions options) {
  CertificateReport rep;
  const double R = design.radius;
  const double total = shell_volume(design.dimension, 0.0, R);

  const auto vol = design.material_volumes();
  for (std::size_t i = 0; i < vol.size(); ++i) {
    rep.volume_error = std::max(rep.volume_error, std::abs(vol[i] - quantities[i]) / total);
  }

  // State relation: sigma against lambda_-(theta) times a fourth-order
  // finite-difference derivative of the reconstructed state.
  const auto edges = design.interfaces();
  const auto near_edge = [&](double r, double h) {
    for (double e : edges) {
      if (std::abs(r - e) < 2.0 * h) return true;
    }
    for (double e : psi.psi.breakpoints()) {
      if (std::abs(r - e) < 2.0 * h) return true;
    }
    return false;
  };
  for (const auto& flux : fluxes) {
    const RadialState u(flux, design, materials);
    double worst = 0.0;
    for (int s = 1; s <= options.residual_samples; ++s) {
      const double r = R * (static_cast<double>(s) - 0.5) / options.residual_samples;
      const double h = std::min(1e-3, 0.25 * r);
      if (near_edge(r, h)) continue;
      const auto central = [&](double step) { return (u(r + step) - u(r - step)) / (2.0 * step); };
      const double du = (4.0 * central(0.5 * h) - central(h)) / 3.0;
      const double lam = 1.0 / theta_weight(design.band_at(r).theta, materials);
      worst = std::max(worst, std::abs(flux(r) - lam * du));
    }
    rep.state_residual.push_back(worst);
  }

  // A simple laminate with layers normal to e_r has radial eigenvalue equal
  // to the harmonic mean of its layers; sigma is radial, so A^-1 sigma is
  // sigma divided by that eigenvalue.
  for (const auto& band : design.bands) {
    double harmonic = 0.0;
    for (std::size_t i = 0; i < band.theta.size(); ++i) harmonic += band.theta[i] / materials[i].lambda_min;
    const double radial_eig = 1.0 / harmonic;
    const double lm = lambda_minus(band.theta, materials);
    const double r = 0.5 * (band.r_lo + band.r_hi);
    for (const auto& flux : fluxes) {
      const double s = flux(r);
      rep.laminate_residual = std::max(rep.laminate_residual, std::abs(s / radial_eig - s / lm));
    }
  }

  rep.objective = radial_objective(design, psi, materials);
  const double slack = options.saddle_slack * std::max(1.0, std::abs(rep.objective));
  rep.saddle_max_excess = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.saddle_samples; ++s) {
    const auto other = random_rearrangement(design, quantities, options.seed + static_cast<std::uint64_t>(s));
    const double h = radial_objective(other, psi, materials);
    rep.saddle_max_excess = std::max(rep.saddle_max_excess, h - rep.objective);
    if (h > rep.objective + slack) ++rep.saddle_violations;
    ++rep.saddle_samples;
  }
  if (rep.saddle_samples == 0) rep.saddle_max_excess = 0.0;
  rep.flux_side_note =
      "flux side not sampled: on a ball the radial divergence constraint has a single solution";

  double worst_state = 0.0;
  for (double r : rep.state_residual) worst_state = std::max(worst_state, r);
  rep.passed = worst_state <= 1e-9 && rep.laminate_residual <= 1e-12 && rep.saddle_violations == 0 &&
               rep.volume_error <= 1e-10;
  return rep;
}

std::vector<double> sample_radii(const RadialDesign& design, const PsiFunction& psi, int count) {
  std::vector<double> r;
  const double R = design.radius;
  for (int i = 0; i < count; ++i) r.push_back(R * static_cast<double>(i) / std::max(1, count - 1));
  r.insert(r.end(), psi.psi.breakpoints().begin(), psi.psi.breakpoints().end());
  const auto edges = design.interfaces();
  r.insert(r.end(), edges.begin(), edges.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace bangbang::radial
