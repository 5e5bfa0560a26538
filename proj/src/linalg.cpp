#include "mmimo/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mmimo {

CMat adjoint_times(const CMat& A, const CMat& B) {
    if (A.rows != B.rows) throw std::invalid_argument("adjoint_times: shape mismatch");
    CMat C(A.cols, B.cols);
    for (int j = 0; j < B.cols; ++j) {
        const cplx* bj = B.col(j);
        for (int i = 0; i < A.cols; ++i) {
            const cplx* ai = A.col(i);
            cplx s(0.0, 0.0);
            for (int r = 0; r < A.rows; ++r) s += std::conj(ai[r]) * bj[r];
            C(i, j) = s;
        }
    }
    return C;
}

CMat times(const CMat& A, const CMat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("times: shape mismatch");
    CMat C(A.rows, B.cols);
    for (int j = 0; j < B.cols; ++j) {
        cplx* cj = C.col(j);
        for (int k = 0; k < A.cols; ++k) {
            const cplx b = B(k, j);
            if (b == cplx(0.0, 0.0)) continue;
            const cplx* ak = A.col(k);
            for (int r = 0; r < A.rows; ++r) cj[r] += ak[r] * b;
        }
    }
    return C;
}

CMat hermitian_inverse(const CMat& G) {
    // Cholesky factorize G = L L^H, then invert by forward/back substitution
    // on unit vectors. Intended for small (K x K) Gram matrices.
    const int n = G.rows;
    if (G.cols != n) throw std::invalid_argument("hermitian_inverse: not square");
    CMat L(n, n);
    for (int j = 0; j < n; ++j) {
        double d = G(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(L(j, k));
        if (d <= 0.0) throw std::runtime_error("hermitian_inverse: matrix not positive definite");
        const double piv = std::sqrt(d);
        L(j, j) = piv;
        for (int i = j + 1; i < n; ++i) {
            cplx s = G(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
            L(i, j) = s / piv;
        }
    }
    CMat X(n, n);
    std::vector<cplx> y(n);
    for (int c = 0; c < n; ++c) {
        // L y = e_c
        for (int i = 0; i < n; ++i) {
            cplx s = (i == c) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
            y[i] = s / L(i, i);
        }
        // L^H x = y
        for (int i = n - 1; i >= 0; --i) {
            cplx s = y[i];
            for (int k = i + 1; k < n; ++k) s -= std::conj(L(k, i)) * X(k, c);
            X(i, c) = s / L(i, i);
        }
    }
    return X;
}

double fro_norm(const CMat& A) {
    double s = 0.0;
    for (const cplx& v : A.a) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace mmimo
