#include "stokes/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stokes/linalg.hpp"

namespace stokes::kernels {

namespace {
// Reduction block size; fixed so that results are independent of the thread count.
constexpr std::ptrdiff_t kBlock = 2048;
}  // namespace

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    const auto offsets = a.row_offsets();
    const auto cols = a.cols();
    const auto vals = a.values();
    const std::ptrdiff_t n = a.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

void spmv_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
    const auto offsets = a.row_offsets();
    const auto cols = a.cols();
    const auto vals = a.values();
    for (std::ptrdiff_t i = 0; i < a.size(); ++i) {
        double sum = 0.0;
        for (int k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    const std::ptrdiff_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks <= 1) return dot_serial(x, y);
    std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
        const std::ptrdiff_t lo = b * kBlock;
        const std::ptrdiff_t hi = std::min(lo + kBlock, n);
        double sum = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) sum += x[i] * y[i];
        partial[b] = sum;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void xpby_serial(std::span<const double> x, double beta, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void pointwise_mul(std::span<const double> inv_diag, std::span<const double> r,
                   std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(r.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = inv_diag[i] * r[i];
}

void pointwise_mul_serial(std::span<const double> inv_diag, std::span<const double> r,
                          std::span<double> out) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = inv_diag[i] * r[i];
}

void clamp_interval(std::span<const double> w, double rho, double bound,
                    std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(w.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = std::clamp(w[i] / rho, -bound, bound);
}

void clamp_interval_serial(std::span<const double> w, double rho, double bound,
                           std::span<double> out) {
    for (std::size_t i = 0; i < w.size(); ++i)
        out[i] = std::clamp(w[i] / rho, -bound, bound);
}

void soft_shrink(std::span<const double> s, std::span<const double> threshold, double rho,
                 std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double mag = std::abs(s[i]) - threshold[i];
        out[i] = mag > 0.0 ? std::copysign(mag, s[i]) / rho : 0.0;
    }
}

void soft_shrink_serial(std::span<const double> s, std::span<const double> threshold,
                        double rho, std::span<double> out) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double mag = std::abs(s[i]) - threshold[i];
        out[i] = mag > 0.0 ? std::copysign(mag, s[i]) / rho : 0.0;
    }
}

}  // namespace stokes::kernels
