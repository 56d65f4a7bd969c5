#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "prng.hpp"

namespace kroncond {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Square complex matrix polynomial P(lambda) = sum_{i=0}^{grade} A_i lambda^i.
/// The grade is the declared length of the coefficient list; the degree (index
/// of the last nonzero coefficient) may be smaller. Values are immutable by
/// convention: every operation is pure and returns a fresh value, so instances
/// can be shared across threads freely.
struct MatrixPolynomial {
    int n = 0;
    int grade = 0;
    std::vector<CMatrix> coeffs;

    MatrixPolynomial() = default;

    MatrixPolynomial(int size, std::vector<CMatrix> cs)
        : n(size), grade(static_cast<int>(cs.size()) - 1), coeffs(std::move(cs)) {
        if (n < 1) throw std::invalid_argument("matrix polynomial: n must be positive");
        if (coeffs.empty()) throw std::invalid_argument("matrix polynomial: needs at least one coefficient");
        for (const CMatrix& a : coeffs) {
            if (a.rows() != n || a.cols() != n)
                throw std::invalid_argument("matrix polynomial: coefficient size mismatch");
        }
    }
};

/// Convenience factory for scalar (1x1) polynomials, lowest coefficient first.
inline MatrixPolynomial scalar_poly(const std::vector<Complex>& cs) {
    std::vector<CMatrix> coeffs;
    coeffs.reserve(cs.size());
    for (Complex c : cs) {
        CMatrix a(1, 1);
        a(0, 0) = c;
        coeffs.push_back(a);
    }
    return MatrixPolynomial(1, std::move(coeffs));
}

inline double spectral_norm(const CMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

/// Index of the last nonzero coefficient, or -1 for the all-zero polynomial.
inline int degree(const MatrixPolynomial& p) {
    for (int i = p.grade; i >= 0; --i)
        if (!p.coeffs[static_cast<std::size_t>(i)].isZero(0.0)) return i;
    return -1;
}

inline bool is_degenerate(const MatrixPolynomial& p) { return degree(p) < 0; }

inline void require_nondegenerate(const MatrixPolynomial& p) {
    if (is_degenerate(p))
        throw std::invalid_argument("matrix polynomial is identically zero");
}

/// Horner evaluation of P(lambda).
inline CMatrix evaluate(const MatrixPolynomial& p, Complex lambda) {
    require_nondegenerate(p);
    CMatrix acc = p.coeffs[static_cast<std::size_t>(p.grade)];
    for (int i = p.grade - 1; i >= 0; --i)
        acc = lambda * acc + p.coeffs[static_cast<std::size_t>(i)];
    return acc;
}

/// Horner evaluation of P'(lambda) = sum i*A_i lambda^(i-1).
inline CMatrix evaluate_derivative(const MatrixPolynomial& p, Complex lambda) {
    require_nondegenerate(p);
    if (p.grade == 0) return CMatrix::Zero(p.n, p.n);
    CMatrix acc = static_cast<double>(p.grade) * p.coeffs[static_cast<std::size_t>(p.grade)];
    for (int i = p.grade - 1; i >= 1; --i)
        acc = lambda * acc + static_cast<double>(i) * p.coeffs[static_cast<std::size_t>(i)];
    return acc;
}

/// rev P(lambda) = lambda^grade P(1/lambda): coefficient i becomes A_{grade-i}.
inline MatrixPolynomial reversal(const MatrixPolynomial& p) {
    std::vector<CMatrix> coeffs(p.coeffs.rbegin(), p.coeffs.rend());
    return MatrixPolynomial(p.n, std::move(coeffs));
}

/// Spectral norms of the coefficients and of the stacked block row
/// [A_0 A_1 ... A_d]; the tolerances used by the condition numbers.
struct CoeffNormProfile {
    std::vector<double> per_coeff;
    double stacked = 0.0;
    double max_norm = 0.0;
    double min_edge = 0.0;
};

inline CoeffNormProfile norm_profile(const MatrixPolynomial& p) {
    CoeffNormProfile prof;
    prof.per_coeff.reserve(p.coeffs.size());
    CMatrix row(p.n, static_cast<Eigen::Index>(p.n) * (p.grade + 1));
    for (int i = 0; i <= p.grade; ++i) {
        const CMatrix& a = p.coeffs[static_cast<std::size_t>(i)];
        prof.per_coeff.push_back(spectral_norm(a));
        row.block(0, static_cast<Eigen::Index>(i) * p.n, p.n, p.n) = a;
    }
    prof.stacked = spectral_norm(row);
    prof.max_norm = *std::max_element(prof.per_coeff.begin(), prof.per_coeff.end());
    prof.min_edge = std::min(prof.per_coeff.front(), prof.per_coeff.back());
    return prof;
}

/// sum_i |lambda|^i w_i, the evaluated-norm scale used for residuals and for
/// the condition-number numerators.
inline double evaluated_norm(const std::vector<double>& weights, double abs_lambda) {
    double acc = 0.0;
    double pw = 1.0;
    for (double w : weights) {
        acc += pw * w;
        pw *= abs_lambda;
    }
    return acc;
}

/// Divides P by gamma = max_i ||A_i||_2 so the scaled polynomial has maximal
/// coefficient norm 1. Eigenvalues are unchanged.
inline std::pair<MatrixPolynomial, double> scale_to_unit_max(const MatrixPolynomial& p) {
    require_nondegenerate(p);
    const double gamma = norm_profile(p).max_norm;
    std::vector<CMatrix> coeffs;
    coeffs.reserve(p.coeffs.size());
    for (const CMatrix& a : p.coeffs) coeffs.push_back(a / gamma);
    return {MatrixPolynomial(p.n, std::move(coeffs)), gamma};
}

// Stream order of the generators: coefficients A_0..A_d in order, each filled
// row-major (row index outer, column inner), one complex Gaussian per entry
// with the real part drawn before the imaginary part. This makes generated
// polynomials reproducible from the seed alone.
inline MatrixPolynomial random_poly(int n, int d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("random_poly: need n >= 1 and d >= 1");
    Prng rng(seed);
    std::vector<CMatrix> coeffs;
    coeffs.reserve(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i <= d; ++i) {
        CMatrix a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a(r, c) = rng.next_complex_gaussian();
        coeffs.push_back(std::move(a));
    }
    return MatrixPolynomial(n, std::move(coeffs));
}

/// Degree-6 polynomial with badly-scaled coefficients: standard complex
/// Gaussian matrices times the factors [1, 1e3, 1, 1e4, 1e4, 1e2, 1].
inline MatrixPolynomial badly_scaled_poly(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("badly_scaled_poly: need n >= 1");
    static constexpr double scale[7] = {1.0, 1e3, 1.0, 1e4, 1e4, 1e2, 1.0};
    MatrixPolynomial p = random_poly(n, 6, seed);
    for (int i = 0; i <= 6; ++i) p.coeffs[static_cast<std::size_t>(i)] *= scale[i];
    return p;
}

/// Probabilistic regularity certificate: det P(lambda_j) != 0 for at least one
/// of n*grade+1 pseudo-random points on the unit circle. Uses the smallest
/// singular value as a scale-aware rank test.
inline bool certify_regular(const MatrixPolynomial& p) {
    if (is_degenerate(p)) return false;
    Prng rng(0x7265676b726f6eULL);
    const int samples = p.n * p.grade + 1;
    for (int j = 0; j < samples; ++j) {
        const double t = 2.0 * std::numbers::pi * rng.next_uniform();
        const CMatrix v = evaluate(p, Complex(std::cos(t), std::sin(t)));
        const Eigen::JacobiSVD<CMatrix> svd(v);
        const auto& sv = svd.singularValues();
        if (sv(0) > 0.0 && sv(sv.size() - 1) > 1e-12 * std::max(1.0, sv(0))) return true;
    }
    return false;
}

inline void require_regular(const MatrixPolynomial& p) {
    if (!certify_regular(p))
        throw std::invalid_argument("matrix polynomial failed the regularity certificate");
}

inline bool approx_equal(const MatrixPolynomial& a, const MatrixPolynomial& b, double tol) {
    if (a.n != b.n || a.grade != b.grade) return false;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        if ((a.coeffs[i] - b.coeffs[i]).norm() > tol) return false;
    return true;
}

} // namespace kroncond
