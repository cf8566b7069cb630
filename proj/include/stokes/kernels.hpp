#pragma once

#include <cstddef>
#include <span>

namespace stokes {

class SparseMatrix;

// Data-parallel inner loops of the solver. Each kernel has an OpenMP variant
// (the default) and a serial reference used by tests and the benchmark.
// Every parallel kernel is deterministic: results do not depend on the
// thread count. Reductions sum fixed-size blocks and combine them in order.
namespace kernels {

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);
double dot_serial(std::span<const double> x, std::span<const double> y);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);

/// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);
void xpby_serial(std::span<const double> x, double beta, std::span<double> y);

/// out[i] = inv_diag[i] * r[i]  (Jacobi preconditioner application)
void pointwise_mul(std::span<const double> inv_diag, std::span<const double> r,
                   std::span<double> out);
void pointwise_mul_serial(std::span<const double> inv_diag, std::span<const double> r,
                          std::span<double> out);

/// out[i] = clamp(w[i] / rho, -bound, bound); the interval projection step.
void clamp_interval(std::span<const double> w, double rho, double bound,
                    std::span<double> out);
void clamp_interval_serial(std::span<const double> w, double rho, double bound,
                           std::span<double> out);

/// out[i] = sign(s[i]) * max(|s[i]| - threshold[i], 0) / rho; the shrinkage step.
void soft_shrink(std::span<const double> s, std::span<const double> threshold, double rho,
                 std::span<double> out);
void soft_shrink_serial(std::span<const double> s, std::span<const double> threshold,
                        double rho, std::span<double> out);

}  // namespace kernels
}  // namespace stokes
