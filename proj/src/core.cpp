#include "bangbang/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace bangbang {

void validate(const Material& m) {
  if (!(m.lambda_min > 0.0) || !std::isfinite(m.lambda_min)) {
    throw ConstraintError("material '" + m.label + "': lambda_min must be positive and finite");
  }
  if (!(m.lambda_max >= m.lambda_min) || !std::isfinite(m.lambda_max)) {
    throw ConstraintError("material '" + m.label + "': lambda_max must be >= lambda_min");
  }
}

void VolumeConstraint::validate(double domain_measure) const {
  if (quantities.empty()) throw ConstraintError("volume constraint: no quantities");
  double total = 0.0;
  for (std::size_t i = 0; i < quantities.size(); ++i) {
    if (!(quantities[i] >= 0.0) || !std::isfinite(quantities[i])) {
      throw ConstraintError("volume constraint: quantity " + std::to_string(i) + " must be non-negative");
    }
    total += quantities[i];
  }
  if (mode == ConstraintMode::Exact) {
    if (std::abs(total - domain_measure) > kQuantityRelTol * domain_measure) {
      std::ostringstream os;
      os.precision(17);
      os << "volume constraint: quantities sum to " << total << " but the domain measure is " << domain_measure;
      throw ConstraintError(os.str());
    }
  } else if (total < domain_measure * (1.0 - kQuantityRelTol)) {
    throw InfeasibleError("volume constraint: upper bounds cannot cover the domain");
  }
}

std::vector<double> checked_simplex(std::span<const double> theta) {
  if (theta.empty()) throw ConstraintError("simplex: empty fraction vector");
  double sum = 0.0;
  for (double t : theta) {
    if (!(t >= -kSimplexTol) || !(t <= 1.0 + kSimplexTol)) {
      throw ConstraintError("simplex: component outside [0, 1]");
    }
    sum += t;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) throw ConstraintError("simplex: components do not sum to 1");
  std::vector<double> out(theta.size());
  double clipped = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] = std::clamp(theta[i], 0.0, 1.0);
    clipped += out[i];
  }
  for (double& t : out) t /= clipped;
  return out;
}

double inverse_lambda_minus(std::span<const double> theta, std::span<const Material> materials) {
  double acc = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) acc += theta[i] / materials[i].lambda_min;
  return acc;
}

double lambda_minus(std::span<const double> theta, std::span<const Material> materials) {
  if (theta.size() != materials.size()) throw ConstraintError("lambda_minus: size mismatch");
  const auto t = checked_simplex(theta);
  return 1.0 / inverse_lambda_minus(t, materials);
}

double lambda_plus(std::span<const double> theta, std::span<const Material> materials) {
  if (theta.size() != materials.size()) throw ConstraintError("lambda_plus: size mismatch");
  const auto t = checked_simplex(theta);
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t[i] * materials[i].lambda_max;
  return acc;
}

double unit_ball_volume(int dimension) {
  const double d = dimension;
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double shell_volume(int dimension, double a, double b) {
  return unit_ball_volume(dimension) * (std::pow(b, dimension) - std::pow(a, dimension));
}

double measure(const Domain& domain) {
  if (const auto* ball = std::get_if<Ball>(&domain)) return shell_volume(ball->dimension, 0.0, ball->radius);
  const auto& rect = std::get<Rectangle>(domain);
  if (rect.disk_mask) {
    const double r = 0.5 * std::min(rect.width, rect.height);
    return std::numbers::pi * r * r;
  }
  return rect.width * rect.height;
}

int dimension(const Domain& domain) {
  if (const auto* ball = std::get_if<Ball>(&domain)) return ball->dimension;
  return 2;
}

void ProblemSpec::validate() const {
  if (const auto* ball = std::get_if<Ball>(&domain)) {
    if (ball->dimension < 1) throw ConstraintError("domain: dimension must be >= 1");
    if (!(ball->radius > 0.0)) throw ConstraintError("domain: radius must be positive");
  } else {
    const auto& rect = std::get<Rectangle>(domain);
    if (!(rect.width > 0.0) || !(rect.height > 0.0)) throw ConstraintError("domain: extents must be positive");
  }
  if (materials.empty()) throw ConstraintError("problem: at least one material is required");
  if (loads.empty()) throw ConstraintError("problem: at least one load case is required");
  for (const auto& m : materials) bangbang::validate(m);
  if (constraint.quantities.size() != materials.size()) {
    throw ConstraintError("problem: one quantity per material is required");
  }
  constraint.validate(domain_measure());
  for (std::size_t i = 0; i < loads.size(); ++i) {
    if (!(loads[i].weight > 0.0)) throw ConstraintError("load " + std::to_string(i) + ": weight must be positive");
  }
}

DesignField::DesignField(std::vector<double> cell_measures, std::size_t materials)
    : measures_(std::move(cell_measures)), materials_(materials), theta_(measures_.size() * materials, 0.0) {}

DesignField::DesignField(std::vector<double> cell_measures, std::size_t materials, std::vector<double> theta)
    : measures_(std::move(cell_measures)), materials_(materials), theta_(std::move(theta)) {
  if (theta_.size() != measures_.size() * materials_) throw ConstraintError("DesignField: shape mismatch");
  for (std::size_t c = 0; c < cells(); ++c) {
    const auto fixed = checked_simplex(row(c));
    std::copy(fixed.begin(), fixed.end(), row(c).begin());
  }
}

DesignField DesignField::uniform(std::vector<double> cell_measures, std::span<const double> fractions) {
  const auto f = checked_simplex(fractions);
  DesignField out(std::move(cell_measures), f.size());
  for (std::size_t c = 0; c < out.cells(); ++c) std::copy(f.begin(), f.end(), out.row(c).begin());
  return out;
}

double DesignField::total_measure() const { return std::accumulate(measures_.begin(), measures_.end(), 0.0); }

std::vector<double> DesignField::material_volumes() const {
  std::vector<double> v(materials_, 0.0);
  for (std::size_t c = 0; c < cells(); ++c) {
    const auto r = row(c);
    for (std::size_t i = 0; i < materials_; ++i) v[i] += measures_[c] * r[i];
  }
  return v;
}

double DesignField::max_simplex_defect() const {
  double worst = 0.0;
  for (std::size_t c = 0; c < cells(); ++c) {
    double sum = 0.0;
    for (double t : row(c)) {
      worst = std::max(worst, std::max(-t, t - 1.0));
      sum += t;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

void DesignField::audit(const VolumeConstraint& constraint, double rel_tol) const {
  if (constraint.quantities.size() != materials_) throw ConstraintError("audit: material count mismatch");
  if (max_simplex_defect() > kSimplexTol) throw ConstraintError("audit: a cell leaves the simplex");
  const double mu = total_measure();
  const auto v = material_volumes();
  for (std::size_t i = 0; i < materials_; ++i) {
    const double q = constraint.quantities[i];
    const bool ok = constraint.mode == ConstraintMode::Exact ? std::abs(v[i] - q) <= rel_tol * mu
                                                             : v[i] <= q + rel_tol * mu;
    if (!ok) {
      std::ostringstream os;
      os.precision(17);
      os << "audit: material " << i << " occupies " << v[i] << " but the constraint prescribes " << q;
      throw ConstraintError(os.str());
    }
  }
}

bool same_lambda(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

SortedMaterials sort_materials(std::span<const Material> materials, std::span<const double> quantities) {
  if (materials.size() != quantities.size()) throw ConstraintError("sort_materials: size mismatch");
  SortedMaterials out;
  out.order.resize(materials.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return materials[a].lambda_min < materials[b].lambda_min;
  });
  for (std::size_t k : out.order) {
    out.materials.push_back(materials[k]);
    out.quantities.push_back(quantities[k]);
  }
  std::size_t start = 0;
  for (std::size_t k = 1; k <= out.materials.size(); ++k) {
    if (k == out.materials.size() || !same_lambda(out.materials[k].lambda_min, out.materials[start].lambda_min)) {
      if (k - start >= 2) {
        std::vector<std::size_t> group(k - start);
        std::iota(group.begin(), group.end(), start);
        out.tie_groups.push_back(std::move(group));
      }
      start = k;
    }
  }
  return out;
}

}  // namespace bangbang
