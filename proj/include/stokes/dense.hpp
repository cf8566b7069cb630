#pragma once

#include <span>
#include <vector>

namespace stokes {

class SparseMatrix;

namespace dense {

/// Row-major dense matrix for desk-scale verification work.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[i * cols_ + j]; }
    double operator()(int i, int j) const { return data_[i * cols_ + j]; }
    std::span<const double> data() const { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix to_dense(const SparseMatrix& a);

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

/// Gaussian elimination with partial pivoting. Throws std::runtime_error on
/// a (numerically) singular matrix.
std::vector<double> lu_solve(DenseMatrix a, std::vector<double> b);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(DenseMatrix a);

/// Orthonormal basis of the kernel of a (columns of the result), via
/// Householder QR of a^T with rank detected at relative tolerance tol.
DenseMatrix nullspace_basis(const DenseMatrix& a, double tol = 1e-12);

}  // namespace dense
}  // namespace stokes
