#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace wqed {

using Complex = std::complex<double>;

struct NonConvergenceError : std::runtime_error {
    double residual;
    NonConvergenceError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

/// Hermitian operator stored as complex coefficient triplets.
struct SparseOperator {
    std::size_t dim = 0;
    std::vector<Eigen::Triplet<Complex>> entries;
    std::string basis_tag;

    void add(std::size_t row, std::size_t col, Complex value);
    /// Adds value at (row,col) and its conjugate at (col,row); diagonal must be real.
    void add_herm(std::size_t row, std::size_t col, Complex value);

    Eigen::SparseMatrix<Complex> compressed() const;
    Eigen::MatrixXcd dense() const;

    /// Max |H - H^dagger| entry, computed on the compressed matrix.
    double hermiticity_defect() const;
};

/// Lowest n_eigs eigenvalues of a Hermitian operator. Dense below a size
/// threshold, Lanczos with full reorthogonalization above it. The Lanczos
/// start vector is seeded deterministically.
std::vector<double> lowest_spectrum(const SparseOperator& op, int n_eigs,
                                    double tol = 1e-10, int max_iter = 0);

/// Lowest eigenpair of a compressed Hermitian matrix (Lanczos).
std::pair<double, Eigen::VectorXcd> lowest_eigenpair(
    const Eigen::SparseMatrix<Complex>& h, double tol = 1e-12, int max_iter = 0);

std::vector<double> lowest_spectrum(const Eigen::SparseMatrix<Complex>& h,
                                    int n_eigs, double tol = 1e-10,
                                    int max_iter = 0);

/// Text dump: header "dim basis_tag", then "row col re im" triplets.
std::string dump_operator(const SparseOperator& op);

}  // namespace wqed
