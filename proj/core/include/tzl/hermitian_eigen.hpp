#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tzl {

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

    std::size_t size() const noexcept { return n_; }
    std::complex<double>& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const std::complex<double>& operator()(std::size_t r, std::size_t c) const {
        return data_[r * n_ + c];
    }

    /// max |A - A^H|, entrywise.
    double hermitian_defect() const;
    /// Largest modulus among off-diagonal entries.
    double max_off_diagonal() const;

private:
    std::size_t n_ = 0;
    std::vector<std::complex<double>> data_;
};

struct EigenResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns, matching `values`
    int sweeps = 0;
};

/// Cyclic Jacobi for Hermitian matrices. Throws ConvergenceError when the
/// off-diagonal Frobenius norm is still above tol * ||A||_F after
/// `max_sweeps` sweeps.
EigenResult jacobi_eigen_hermitian(ComplexMatrix a, double tol = 1e-15, int max_sweeps = 60);

} // namespace tzl
