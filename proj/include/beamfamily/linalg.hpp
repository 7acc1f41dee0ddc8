#pragma once

#include <vector>

#include "beamfamily/core.hpp"

namespace beamfamily {

/// Dense row-major square complex matrix.
class CMatrix {
public:
    explicit CMatrix(std::size_t n) : n_(n), data_(n * n, cplx{0.0, 0.0}) {}

    std::size_t size() const noexcept { return n_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    cplx trace() const;
    double frobenius_norm() const;
    /// max |A - A^H| over all entries.
    double hermitian_defect() const;

private:
    std::size_t n_;
    std::vector<cplx> data_;
};

struct EigenDecomposition {
    /// Descending.
    std::vector<double> values;
    /// vectors[i] is the unit eigenvector for values[i].
    std::vector<CVector> vectors;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// tol * max(|trace|, ||A||_F). The input must be Hermitian.
EigenDecomposition jacobi_eigh(const CMatrix& a, double tol = 1e-12, int max_sweeps = 100);

}  // namespace beamfamily
