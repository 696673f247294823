#pragma once

// Matrix-free kernels for the 5-point operator on an nx-by-ny cell grid.
// Every kernel has a serial reference and an OpenMP version. Reductions are
// summed in fixed blocks of kReductionBlock entries and the block sums are
// combined in order, so the parallel result does not depend on the thread
// count.

#include <cstddef>
#include <span>
#include <vector>

namespace bangbang::kernels {

enum class Exec { Serial, Parallel };

inline constexpr std::size_t kReductionBlock = 4096;

/// Symmetric 5-point operator. `east[c]` couples c and c + 1, `north[c]`
/// couples c and c + nx; both store the positive conductance, entering the
/// matrix with a minus sign. Rows outside the mask have diag 1 and no
/// couplings.
struct Stencil {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> diag;
  std::vector<double> east;
  std::vector<double> north;

  [[nodiscard]] std::size_t size() const { return nx * ny; }
};

/// y = A x
void apply(const Stencil& a, std::span<const double> x, std::span<double> y, Exec exec);

/// Plain left-to-right sum, the reference for dot().
double dot_serial(std::span<const double> a, std::span<const double> b);
/// Blocked sum; identical for any thread count.
double dot(std::span<const double> a, std::span<const double> b, Exec exec);

/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y, Exec exec);
/// y = x + s * y
void xpay(std::span<const double> x, double s, std::span<double> y, Exec exec);
/// z = x * w (elementwise)
void multiply(std::span<const double> x, std::span<const double> w, std::span<double> z, Exec exec);

struct CgOptions {
  double rel_tol = 1e-10;
  std::size_t max_iters = 0;  // 0: 50 * (nx + ny)
  Exec exec = Exec::Parallel;
};

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> history;  // relative residual per iteration
};

/// Jacobi-preconditioned conjugate gradients for A x = b, starting from the
/// contents of x. Does not throw; the caller decides what non-convergence
/// means.
CgResult conjugate_gradient(const Stencil& a, std::span<const double> b, std::span<double> x, CgOptions options);

}  // namespace bangbang::kernels
