#include "bangbang/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace bangbang::kernels {

namespace {

using Index = std::ptrdiff_t;

inline double stencil_row(const Stencil& a, std::span<const double> x, std::size_t c, std::size_t i, std::size_t j) {
  const std::size_t nx = a.nx;
  double acc = a.diag[c] * x[c];
  if (i > 0) acc -= a.east[c - 1] * x[c - 1];
  if (i + 1 < nx) acc -= a.east[c] * x[c + 1];
  if (j > 0) acc -= a.north[c - nx] * x[c - nx];
  if (j + 1 < a.ny) acc -= a.north[c] * x[c + nx];
  return acc;
}

}  // namespace

void apply(const Stencil& a, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto ny = static_cast<Index>(a.ny);
  if (exec == Exec::Serial) {
    for (Index j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < a.nx; ++i) {
        const std::size_t c = static_cast<std::size_t>(j) * a.nx + i;
        y[c] = stencil_row(a, x, c, i, static_cast<std::size_t>(j));
      }
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < a.nx; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * a.nx + i;
      y[c] = stencil_row(a, x, c, i, static_cast<std::size_t>(j));
    }
  }
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  const std::size_t n = a.size();
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto block_sum = [&](std::size_t blk) {
    const std::size_t lo = blk * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double acc = 0.0;
    for (std::size_t k = lo; k < hi; ++k) acc += a[k] * b[k];
    partial[blk] = acc;
  };
  if (exec == Exec::Serial) {
    for (std::size_t blk = 0; blk < blocks; ++blk) block_sum(blk);
  } else {
#pragma omp parallel for schedule(static)
    for (Index blk = 0; blk < static_cast<Index>(blocks); ++blk) block_sum(static_cast<std::size_t>(blk));
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void axpy(double s, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto n = static_cast<Index>(x.size());
  if (exec == Exec::Serial) {
    for (Index k = 0; k < n; ++k) y[k] += s * x[k];
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) y[k] += s * x[k];
}

void xpay(std::span<const double> x, double s, std::span<double> y, Exec exec) {
  const auto n = static_cast<Index>(x.size());
  if (exec == Exec::Serial) {
    for (Index k = 0; k < n; ++k) y[k] = x[k] + s * y[k];
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) y[k] = x[k] + s * y[k];
}

void multiply(std::span<const double> x, std::span<const double> w, std::span<double> z, Exec exec) {
  const auto n = static_cast<Index>(x.size());
  if (exec == Exec::Serial) {
    for (Index k = 0; k < n; ++k) z[k] = x[k] * w[k];
    return;
  }
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < n; ++k) z[k] = x[k] * w[k];
}

CgResult conjugate_gradient(const Stencil& a, std::span<const double> b, std::span<double> x, CgOptions options) {
  const std::size_t n = a.size();
  const Exec ex = options.exec;
  const std::size_t cap = options.max_iters > 0 ? options.max_iters : 50 * (a.nx + a.ny);
  CgResult res;

  std::vector<double> inv_diag(n);
  for (std::size_t c = 0; c < n; ++c) inv_diag[c] = 1.0 / a.diag[c];

  const double b_norm = std::sqrt(dot(b, b, ex));
  if (b_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  apply(a, x, r, ex);
  for (std::size_t c = 0; c < n; ++c) r[c] = b[c] - r[c];
  double r_norm = std::sqrt(dot(r, r, ex));
  res.relative_residual = r_norm / b_norm;
  if (res.relative_residual <= options.rel_tol) {
    res.converged = true;
    return res;
  }
  multiply(r, inv_diag, z, ex);
  p = z;
  double rz = dot(r, z, ex);

  for (std::size_t it = 1; it <= cap; ++it) {
    apply(a, p, q, ex);
    const double pq = dot(p, q, ex);
    if (!(pq > 0.0)) break;
    const double step = rz / pq;
    axpy(step, p, x, ex);
    axpy(-step, q, r, ex);
    r_norm = std::sqrt(dot(r, r, ex));
    res.iterations = it;
    res.relative_residual = r_norm / b_norm;
    res.history.push_back(res.relative_residual);
    if (res.relative_residual <= options.rel_tol) {
      res.converged = true;
      break;
    }
    multiply(r, inv_diag, z, ex);
    const double rz_next = dot(r, z, ex);
    xpay(z, rz_next / rz, p, ex);
    rz = rz_next;
  }
  return res;
}

}  // namespace bangbang::kernels
