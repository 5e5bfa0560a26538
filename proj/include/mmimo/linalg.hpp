#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mmimo {

using cplx = std::complex<double>;

// Dense column-major complex matrix. Channel matrices are tall (N x K) and
// accessed column-wise almost everywhere, so columns are kept contiguous.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(j) * rows + i]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(j) * rows + i]; }

    cplx* col(int j) { return a.data() + static_cast<size_t>(j) * rows; }
    const cplx* col(int j) const { return a.data() + static_cast<size_t>(j) * rows; }
};

// C = A^H * B
CMat adjoint_times(const CMat& A, const CMat& B);

// y = A^H x restricted helpers are not needed; small dense products suffice.
CMat times(const CMat& A, const CMat& B);

// In-place inverse of a small Hermitian positive-definite matrix via Cholesky.
// Throws std::runtime_error if a pivot is not positive.
CMat hermitian_inverse(const CMat& G);

double fro_norm(const CMat& A);

}  // namespace mmimo
