#include "stokes/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stokes/linalg.hpp"

namespace stokes::dense {

DenseMatrix to_dense(const SparseMatrix& a) {
    DenseMatrix m(a.size(), a.size());
    const auto offsets = a.row_offsets();
    const auto cols = a.cols();
    const auto vals = a.values();
    for (int i = 0; i < a.size(); ++i)
        for (int k = offsets[i]; k < offsets[i + 1]; ++k) m(i, cols[k]) += vals[k];
    return m;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
    std::vector<double> y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (int j = 0; j < a.cols(); ++j) sum += a(i, j) * x[j];
        y[i] = sum;
    }
    return y;
}

std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("lu_solve: dimension mismatch");
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        if (std::abs(a(pivot, k)) < 1e-14)
            throw std::runtime_error("lu_solve: singular matrix");
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = b[i];
        for (int j = i + 1; j < n; ++j) sum -= a(i, j) * b[j];
        b[i] = sum / a(i, i);
    }
    return b;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: not square");

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-13 * scale * n; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

DenseMatrix nullspace_basis(const DenseMatrix& a, double tol) {
    // Householder QR of a^T; trailing Q columns span ker(a).
    const int n = a.cols();  // ambient dimension
    const int m = a.rows();  // number of constraints
    DenseMatrix r(n, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) r(j, i) = a(i, j);

    DenseMatrix q(n, n);
    for (int i = 0; i < n; ++i) q(i, i) = 1.0;

    const int steps = std::min(n, m);
    std::vector<double> v(n);
    for (int k = 0; k < steps; ++k) {
        // column pivoting: largest remaining column first, so |r_kk| decreases
        int pivot = k;
        double best = -1.0;
        for (int j = k; j < m; ++j) {
            double colnorm = 0.0;
            for (int i = k; i < n; ++i) colnorm += r(i, j) * r(i, j);
            if (colnorm > best) {
                best = colnorm;
                pivot = j;
            }
        }
        if (pivot != k)
            for (int i = 0; i < n; ++i) std::swap(r(i, k), r(i, pivot));

        double norm = 0.0;
        for (int i = k; i < n; ++i) norm += r(i, k) * r(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = r(k, k) >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (int i = k; i < n; ++i) {
            v[i] = r(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        for (int j = k; j < m; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += v[i] * r(i, j);
            const double f = 2.0 * s / vnorm2;
            for (int i = k; i < n; ++i) r(i, j) -= f * v[i];
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k; i < n; ++i) s += v[i] * q(j, i);
            const double f = 2.0 * s / vnorm2;
            for (int i = k; i < n; ++i) q(j, i) -= f * v[i];
        }
    }

    double rmax = 0.0;
    for (int k = 0; k < steps; ++k) rmax = std::max(rmax, std::abs(r(k, k)));
    int rank = 0;
    for (int k = 0; k < steps; ++k)
        if (std::abs(r(k, k)) > tol * std::max(rmax, 1e-300)) ++rank;
        else break;

    DenseMatrix basis(n, n - rank);
    for (int j = rank; j < n; ++j)
        for (int i = 0; i < n; ++i) basis(i, j - rank) = q(i, j);
    return basis;
}

}  // namespace stokes::dense
