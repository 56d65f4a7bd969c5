#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "matpoly.hpp"

namespace kroncond {

/// One eigenpair of the pencil lambda*B + A. Infinite eigenvalues (beta = 0
/// in the QZ output) are reported with finite = false and lambda unset.
struct PencilEigenpair {
    Complex lambda;
    bool finite = true;
    CVector right; // z with (lambda B + A) z = 0
    CVector left;  // w with w^* (lambda B + A) = 0
};

inline void check_backend_selection() {
    const char* env = std::getenv("KRONCOND_BACKEND");
    if (env && *env && std::string(env) != "lapack-qz")
        throw std::runtime_error(std::string("unknown pencil backend '") + env +
                                 "'; compiled-in backends: lapack-qz");
}

/// All eigenpairs of lambda*B + A via the QZ algorithm. zggev solves
/// Ahat v = mu Bhat v, so feeding (-A, B) makes its eigenvalues the roots of
/// det(lambda B + A); the left vectors satisfy w^* Ahat = mu w^* Bhat, which
/// transforms the same way.
inline std::vector<PencilEigenpair> solve_pencil(const CMatrix& a, const CMatrix& b) {
    check_backend_selection();
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("solve_pencil: matrices must be square and equal size");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    CMatrix ahat = -a;
    CMatrix bhat = b;
    CVector alpha(n), beta(n);
    CMatrix vl(n, n), vr(n, n);
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'V', 'V', n,
                                          ahat.data(), n, bhat.data(), n,
                                          alpha.data(), beta.data(),
                                          vl.data(), n, vr.data(), n);
    if (info < 0) throw std::runtime_error("zggev: illegal argument " + std::to_string(-info));
    if (info > 0) throw std::runtime_error("zggev: QZ iteration failed to converge");
    std::vector<PencilEigenpair> out;
    out.reserve(static_cast<std::size_t>(n));
    for (lapack_int j = 0; j < n; ++j) {
        PencilEigenpair pair;
        pair.right = vr.col(j);
        pair.left = vl.col(j);
        if (std::abs(beta(j)) == 0.0) {
            pair.finite = false;
        } else {
            pair.lambda = alpha(j) / beta(j);
            pair.finite = std::isfinite(std::abs(pair.lambda));
        }
        out.push_back(std::move(pair));
    }
    return out;
}

} // namespace kroncond
