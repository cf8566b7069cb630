#include "stokes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stokes/kernels.hpp"

namespace stokes {

SparseMatrix SparseMatrix::from_triplets(int n, std::span<const Triplet> entries) {
    for (const auto& t : entries)
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("SparseMatrix: triplet index out of range");

    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entries[a].row != entries[b].row) return entries[a].row < entries[b].row;
        return entries[a].col < entries[b].col;
    });

    SparseMatrix m;
    m.n_ = n;
    m.cols_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::vector<int> row_count(n, 0);
    int last_row = -1, last_col = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Triplet& t = entries[order[k]];
        if (t.row == last_row && t.col == last_col) {
            m.values_.back() += t.value;
        } else {
            m.cols_.push_back(t.col);
            m.values_.push_back(t.value);
            ++row_count[t.row];
            last_row = t.row;
            last_col = t.col;
        }
    }
    m.row_offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) m.row_offsets_[i + 1] = m.row_offsets_[i] + row_count[i];
    return m;
}

SparseMatrix SparseMatrix::from_csr(int n, std::vector<int> row_offsets, std::vector<int> cols,
                                    std::vector<double> values) {
    if (static_cast<int>(row_offsets.size()) != n + 1 || cols.size() != values.size() ||
        row_offsets.back() != static_cast<int>(cols.size()))
        throw std::invalid_argument("SparseMatrix::from_csr: inconsistent arrays");
    for (int i = 0; i < n; ++i)
        for (int k = row_offsets[i] + 1; k < row_offsets[i + 1]; ++k)
            if (cols[k - 1] >= cols[k])
                throw std::invalid_argument("SparseMatrix::from_csr: columns not increasing");
    SparseMatrix m;
    m.n_ = n;
    m.row_offsets_ = std::move(row_offsets);
    m.cols_ = std::move(cols);
    m.values_ = std::move(values);
    return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != n_ || static_cast<int>(y.size()) != n_)
        throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
    kernels::spmv(*this, x, y);
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    multiply(x, y);
    return y;
}

std::vector<double> SparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            if (cols_[k] == i) d[i] = values_[k];
    return d;
}

double SparseMatrix::symmetry_error() const {
    double err = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const int j = cols_[k];
            double transposed = 0.0;
            const int* begin = cols_.data() + row_offsets_[j];
            const int* end = cols_.data() + row_offsets_[j + 1];
            const int* it = std::lower_bound(begin, end, i);
            if (it != end && *it == i) transposed = values_[row_offsets_[j] + (it - begin)];
            err = std::max(err, std::abs(values_[k] - transposed));
        }
    }
    return err;
}

double quadratic_form(const SparseMatrix& a, std::span<const double> x,
                      std::span<const double> y) {
    std::vector<double> ay = a.multiply(y);
    return kernels::dot(x, ay);
}

SparseMatrix add_scaled(const SparseMatrix& a, const SparseMatrix& b, double alpha) {
    if (a.size() != b.size()) throw std::invalid_argument("add_scaled: dimension mismatch");
    const int n = a.size();
    std::vector<int> offsets(n + 1, 0);
    std::vector<int> cols;
    std::vector<double> vals;
    cols.reserve(a.cols().size() + b.cols().size());
    vals.reserve(cols.capacity());
    for (int i = 0; i < n; ++i) {
        int ka = a.row_offsets()[i], kb = b.row_offsets()[i];
        const int ea = a.row_offsets()[i + 1], eb = b.row_offsets()[i + 1];
        while (ka < ea || kb < eb) {
            const int ca = ka < ea ? a.cols()[ka] : n;
            const int cb = kb < eb ? b.cols()[kb] : n;
            if (ca < cb) {
                cols.push_back(ca);
                vals.push_back(a.values()[ka++]);
            } else if (cb < ca) {
                cols.push_back(cb);
                vals.push_back(alpha * b.values()[kb++]);
            } else {
                cols.push_back(ca);
                vals.push_back(a.values()[ka++] + alpha * b.values()[kb++]);
            }
        }
        offsets[i + 1] = static_cast<int>(cols.size());
    }
    return SparseMatrix::from_csr(n, std::move(offsets), std::move(cols), std::move(vals));
}

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol,
                  int max_iterations, std::span<const double> initial_guess) {
    const int n = a.size();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("cg_solve: dimension mismatch");
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("cg_solve: tol must be in (0,1)");
    if (max_iterations <= 0) max_iterations = 10 * n;

    CgResult result;
    result.x.assign(n, 0.0);
    if (!initial_guess.empty()) {
        if (static_cast<int>(initial_guess.size()) != n)
            throw std::invalid_argument("cg_solve: initial guess size mismatch");
        std::copy(initial_guess.begin(), initial_guess.end(), result.x.begin());
    }

    const double bnorm = std::sqrt(kernels::dot(b, b));
    if (bnorm == 0.0) {
        result.x.assign(n, 0.0);
        return result;
    }

    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag) d = d != 0.0 ? 1.0 / d : 1.0;

    std::vector<double> r(n), z(n), p(n), ap(n);
    a.multiply(result.x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    kernels::pointwise_mul(inv_diag, r, z);
    p = z;
    double rz = kernels::dot(r, z);
    result.preconditioned_norms.push_back(std::sqrt(std::max(rz, 0.0)));

    double rnorm = std::sqrt(kernels::dot(r, r));
    int it = 0;
    while (rnorm > tol * bnorm) {
        if (it >= max_iterations)
            throw CgError("cg_solve: no convergence after " + std::to_string(it) +
                              " iterations (relative residual " +
                              std::to_string(rnorm / bnorm) + ")",
                          it, rnorm / bnorm);
        a.multiply(p, ap);
        const double pap = kernels::dot(p, ap);
        if (!(pap > 0.0))
            throw CgError("cg_solve: matrix is not positive definite", it, rnorm / bnorm);
        const double alpha = rz / pap;
        kernels::axpy(alpha, p, result.x);
        kernels::axpy(-alpha, ap, r);
        // periodic true-residual refresh against recurrence drift
        if ((it + 1) % 256 == 0) {
            a.multiply(result.x, ap);
            for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
        }
        kernels::pointwise_mul(inv_diag, r, z);
        const double rz_next = kernels::dot(r, z);
        kernels::xpby(z, rz_next / rz, p);
        rz = rz_next;
        result.preconditioned_norms.push_back(std::sqrt(std::max(rz, 0.0)));
        rnorm = std::sqrt(kernels::dot(r, r));
        ++it;
    }

    // certify with the true residual
    a.multiply(result.x, ap);
    for (int i = 0; i < n; ++i) ap[i] = b[i] - ap[i];
    const double true_rnorm = std::sqrt(kernels::dot(ap, ap));
    if (true_rnorm > tol * bnorm && it < max_iterations) {
        r = ap;
        kernels::pointwise_mul(inv_diag, r, z);
        p = z;
        rz = kernels::dot(r, z);
        rnorm = true_rnorm;
        while (rnorm > tol * bnorm && it < max_iterations) {
            a.multiply(p, ap);
            const double pap = kernels::dot(p, ap);
            if (!(pap > 0.0)) break;
            const double alpha = rz / pap;
            kernels::axpy(alpha, p, result.x);
            kernels::axpy(-alpha, ap, r);
            kernels::pointwise_mul(inv_diag, r, z);
            const double rz_next = kernels::dot(r, z);
            kernels::xpby(z, rz_next / rz, p);
            rz = rz_next;
            result.preconditioned_norms.push_back(std::sqrt(std::max(rz, 0.0)));
            rnorm = std::sqrt(kernels::dot(r, r));
            ++it;
        }
        if (rnorm > tol * bnorm)
            throw CgError("cg_solve: no convergence after " + std::to_string(it) + " iterations",
                          it, rnorm / bnorm);
    }

    result.iterations = it;
    result.relative_residual = rnorm / bnorm;
    return result;
}

}  // namespace stokes
