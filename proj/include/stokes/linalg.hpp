#pragma once

#include <span>
#include <vector>

#include "stokes/errors.hpp"

namespace stokes {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Square symmetric sparse matrix in compressed-row form. Column indices are
/// strictly increasing within each row; the matrix is immutable once built.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Sums duplicate entries. Throws std::invalid_argument on out-of-range indices.
    static SparseMatrix from_triplets(int n, std::span<const Triplet> entries);

    /// Adopts ready-made compressed rows; columns must be strictly increasing
    /// within each row.
    static SparseMatrix from_csr(int n, std::vector<int> row_offsets, std::vector<int> cols,
                                 std::vector<double> values);

    int size() const { return n_; }
    std::span<const int> row_offsets() const { return row_offsets_; }
    std::span<const int> cols() const { return cols_; }
    std::span<const double> values() const { return values_; }

    /// y = A x. Throws std::invalid_argument on dimension mismatch.
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    std::vector<double> diagonal() const;

    /// max_{ij} |a_ij - a_ji|
    double symmetry_error() const;

private:
    int n_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> cols_;
    std::vector<double> values_;
};

/// x' A y
double quadratic_form(const SparseMatrix& a, std::span<const double> x,
                      std::span<const double> y);

/// a + alpha * b (patterns merged)
SparseMatrix add_scaled(const SparseMatrix& a, const SparseMatrix& b, double alpha);

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double relative_residual = 0.0;
    /// sqrt(r' M^{-1} r) per iteration, starting with the initial residual.
    std::vector<double> preconditioned_norms;
};

struct CgError : SolveError {
    CgError(const std::string& what, int iterations, double relative_residual)
        : SolveError(what), iterations(iterations), relative_residual(relative_residual) {}
    int iterations;
    double relative_residual;
};

/// Jacobi-preconditioned conjugate gradient for SPD systems. Stops when
/// ||b - A x|| <= tol * ||b||; max_iterations <= 0 means 10 n. Throws CgError
/// carrying the final residual when the iteration cap is exceeded.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol = 1e-10,
                  int max_iterations = 0, std::span<const double> initial_guess = {});

}  // namespace stokes
