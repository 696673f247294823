#include "bangbang/measure_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace bangbang {

namespace {

// Volume slack for comparing sums of cell measures computed in different
// orders.
double volume_tolerance(std::size_t n, double total) {
  return (1e-12 + static_cast<double>(n) * std::numeric_limits<double>::epsilon()) * total;
}

}  // namespace

WeightedCells::WeightedCells(std::vector<double> m, std::vector<double> p)
    : measure(std::move(m)), psi(std::move(p)) {
  if (measure.empty()) throw Error("WeightedCells: empty cell list");
  if (measure.size() != psi.size()) throw Error("WeightedCells: measure/psi size mismatch");
  for (std::size_t c = 0; c < measure.size(); ++c) {
    if (!(measure[c] > 0.0) || !std::isfinite(measure[c])) {
      throw Error("WeightedCells: cell " + std::to_string(c) + " has non-positive measure");
    }
    if (!(psi[c] >= 0.0) || !std::isfinite(psi[c])) {
      throw SolverError("WeightedCells: cell " + std::to_string(c) + " has negative or non-finite psi");
    }
    total_ += measure[c];
  }
}

DistributionFunction::DistributionFunction(const WeightedCells& cells) {
  if (cells.size() == 0) throw Error("distribution: empty cell list");
  std::vector<std::size_t> idx(cells.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return cells.psi[a] < cells.psi[b]; });
  std::vector<double> mass;
  for (std::size_t c : idx) {
    if (levels_.empty() || cells.psi[c] != levels_.back()) {
      levels_.push_back(cells.psi[c]);
      mass.push_back(0.0);
    }
    mass.back() += cells.measure[c];
  }
  suffix_.assign(levels_.size() + 1, 0.0);
  for (std::size_t j = levels_.size(); j-- > 0;) suffix_[j] = suffix_[j + 1] + mass[j];
}

double DistributionFunction::operator()(double alpha) const {
  const auto j = static_cast<std::size_t>(std::upper_bound(levels_.begin(), levels_.end(), alpha) - levels_.begin());
  return suffix_[j];
}

double DistributionFunction::left_limit(double alpha) const {
  const auto j = static_cast<std::size_t>(std::lower_bound(levels_.begin(), levels_.end(), alpha) - levels_.begin());
  return suffix_[j];
}

Thresholds thresholds(const DistributionFunction& dist, std::span<const double> quantities) {
  const double total = dist.total_measure();
  const double q_total = std::accumulate(quantities.begin(), quantities.end(), 0.0);
  if (std::abs(q_total - total) > kQuantityRelTol * total + volume_tolerance(dist.levels().size(), total)) {
    std::ostringstream os;
    os.precision(17);
    os << "thresholds: quantities sum to " << q_total << " but the cells measure " << total;
    throw ConstraintError(os.str());
  }
  const double tol = volume_tolerance(dist.levels().size(), total);

  // Candidate minimisers: 0 and every level, ascending.
  std::vector<double> candidates;
  candidates.reserve(dist.levels().size() + 1);
  if (dist.levels().front() > 0.0) candidates.push_back(0.0);
  candidates.insert(candidates.end(), dist.levels().begin(), dist.levels().end());

  Thresholds th;
  double cumulative = 0.0;
  for (std::size_t k = 0; k < quantities.size(); ++k) {
    cumulative += quantities[k];
    const bool last = k + 1 == quantities.size();
    const double target = last ? total : cumulative;
    const auto it = std::partition_point(candidates.begin(), candidates.end(),
                                         [&](double c) { return dist(c) > target + tol; });
    const double alpha = last ? 0.0 : *it;
    th.alphas.push_back(alpha);
    th.attained.push_back(std::abs(dist(alpha) - target) <= tol);
  }
  return th;
}

std::pair<std::size_t, std::size_t> admissible_range(std::span<const double> alphas, std::size_t k) {
  const double a = alphas[k];
  std::size_t lo = k;
  while (lo > 0 && alphas[lo - 1] == a) --lo;
  std::size_t hi = k;
  while (hi + 1 < alphas.size() && alphas[hi + 1] == a) ++hi;
  return {lo, std::min(hi + 1, alphas.size() - 1)};
}

namespace {

// Material i (0-based) may occupy level v iff alpha_i <= v <= alpha_{i-1}.
bool admissible(std::span<const double> alphas, std::size_t i, double v) {
  const double upper = i == 0 ? std::numeric_limits<double>::infinity() : alphas[i - 1];
  return alphas[i] <= v && v <= upper;
}

}  // namespace

Allocation allocate(const WeightedCells& cells, std::span<const Material> materials,
                    std::span<const double> quantities, const Thresholds& th) {
  const std::size_t n_mat = materials.size();
  if (n_mat == 0 || quantities.size() != n_mat || th.alphas.size() != n_mat) {
    throw Error("allocate: materials, quantities and thresholds must have equal length >= 1");
  }
  for (std::size_t i = 1; i < n_mat; ++i) {
    if (!(materials[i - 1].lambda_min < materials[i].lambda_min)) {
      throw Error("allocate: lambda_min must be strictly increasing (merge equal materials first)");
    }
  }
  const double total = cells.total_measure();
  const double tol = volume_tolerance(cells.size(), total);

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cells.psi[a] > cells.psi[b]; });

  Allocation out{DesignField(cells.measure, n_mat), {}};
  std::size_t k = 0;
  double remaining = quantities[0];
  const auto advance = [&] {
    while (k + 1 < n_mat && remaining <= tol) {
      ++k;
      remaining += quantities[k];
    }
  };

  std::size_t g = 0;
  while (g < order.size()) {
    const double level = cells.psi[order[g]];
    std::size_t g_end = g;
    while (g_end < order.size() && cells.psi[order[g_end]] == level) ++g_end;

    std::vector<double> used(n_mat, 0.0);
    double level_measure = 0.0;
    for (std::size_t s = g; s < g_end; ++s) {
      const std::size_t c = order[s];
      const double m = cells.measure[c];
      level_measure += m;
      double need = m;
      auto row = out.theta.row(c);
      while (need > 0.0) {
        advance();
        const double take = (k + 1 == n_mat || remaining >= need - tol) ? need : remaining;
        row[k] += take / m;
        used[k] += take;
        need -= take;
        remaining -= take;
      }
    }

    for (std::size_t i = 0; i < n_mat; ++i) {
      if (used[i] > 10.0 * tol && !admissible(th.alphas, i, level)) {
        std::ostringstream os;
        os.precision(17);
        os << "allocate: material " << i << " received " << used[i] << " on level psi = " << level
           << ", outside [alpha_" << i + 1 << ", alpha_" << i << "]; thresholds inconsistent with cells";
        throw InfeasibleError(os.str());
      }
    }

    const auto hit = std::find(th.alphas.begin(), th.alphas.end(), level);
    if (hit != th.alphas.end()) {
      const auto [lo, hi] = admissible_range(th.alphas, static_cast<std::size_t>(hit - th.alphas.begin()));
      FatLevel fat{level, level_measure, lo, hi, {}};
      for (std::size_t i = lo; i <= hi; ++i) fat.amounts.push_back(used[i]);
      out.ledger.push_back(std::move(fat));
    }
    g = g_end;
  }

  const auto vol = out.theta.material_volumes();
  for (std::size_t i = 0; i < n_mat; ++i) {
    if (std::abs(vol[i] - quantities[i]) > 1e-10 * total) {
      std::ostringstream os;
      os.precision(17);
      os << "allocate: material " << i << " allocated " << vol[i] << " of " << quantities[i];
      throw InfeasibleError(os.str());
    }
  }
  return out;
}

double objective(const WeightedCells& cells, const DesignField& theta, std::span<const Material> materials) {
  double acc = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    acc += cells.measure[c] * cells.psi[c] * inverse_lambda_minus(theta.row(c), materials);
  }
  return acc;
}

std::vector<double> reduce_upper_bounds(std::span<const double> sorted_quantities, double domain_measure) {
  const double total = std::accumulate(sorted_quantities.begin(), sorted_quantities.end(), 0.0);
  if (total < domain_measure * (1.0 - kQuantityRelTol)) {
    throw InfeasibleError("reduce_upper_bounds: upper bounds sum below the domain measure");
  }
  std::vector<double> out;
  double partial = 0.0;
  for (double q : sorted_quantities) {
    if (partial + q < domain_measure * (1.0 - kQuantityRelTol)) {
      out.push_back(q);
      partial += q;
      continue;
    }
    const double last = domain_measure - partial;
    out.push_back(std::abs(last - q) <= kQuantityRelTol * domain_measure ? q : last);
    break;
  }
  return out;
}

MergedMaterials merge_equal_materials(std::span<const Material> sorted, std::span<const double> quantities) {
  MergedMaterials out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!out.materials.empty() && same_lambda(out.materials.back().lambda_min, sorted[i].lambda_min)) {
      auto& m = out.materials.back();
      m.label += "+" + sorted[i].label;
      m.lambda_max = std::max(m.lambda_max, sorted[i].lambda_max);
      out.quantities.back() += quantities[i];
      out.members.back().push_back(i);
    } else {
      out.materials.push_back(sorted[i]);
      out.quantities.push_back(quantities[i]);
      out.members.push_back({i});
    }
  }
  return out;
}

MaterialReduction MaterialReduction::build(std::span<const Material> materials, const VolumeConstraint& constraint,
                                           double domain_measure) {
  constraint.validate(domain_measure);
  if (constraint.quantities.size() != materials.size()) throw ConstraintError("reduction: size mismatch");
  const auto sorted = sort_materials(materials, constraint.quantities);

  std::vector<double> q = sorted.quantities;
  if (constraint.mode == ConstraintMode::UpperBound) q = reduce_upper_bounds(sorted.quantities, domain_measure);
  const std::span<const Material> kept(sorted.materials.data(), q.size());
  const auto merged = merge_equal_materials(kept, q);

  MaterialReduction out;
  out.materials_ = merged.materials;
  out.quantities_ = merged.quantities;
  out.group_.assign(materials.size(), npos);
  out.share_.assign(materials.size(), 0.0);
  for (std::size_t g = 0; g < merged.members.size(); ++g) {
    const auto& members = merged.members[g];
    for (std::size_t pos : members) {
      const std::size_t original = sorted.order[pos];
      out.group_[original] = g;
      out.share_[original] = merged.quantities[g] > 0.0 ? q[pos] / merged.quantities[g]
                                                        : 1.0 / static_cast<double>(members.size());
    }
  }
  return out;
}

std::vector<double> MaterialReduction::effective_quantities() const {
  std::vector<double> out(group_.size(), 0.0);
  for (std::size_t i = 0; i < group_.size(); ++i) {
    if (group_[i] != npos) out[i] = share_[i] * quantities_[group_[i]];
  }
  return out;
}

std::vector<double> MaterialReduction::expand(std::span<const double> reduced_row) const {
  std::vector<double> out(group_.size(), 0.0);
  for (std::size_t i = 0; i < group_.size(); ++i) {
    if (group_[i] != npos) out[i] = share_[i] * reduced_row[group_[i]];
  }
  return out;
}

DesignField MaterialReduction::expand(const DesignField& reduced) const {
  DesignField out(std::vector<double>(reduced.measures().begin(), reduced.measures().end()), group_.size());
  for (std::size_t c = 0; c < reduced.cells(); ++c) {
    const auto row = expand(reduced.row(c));
    std::copy(row.begin(), row.end(), out.row(c).begin());
  }
  return out;
}

}  // namespace bangbang
