#pragma once

#include <optional>
#include <string>

#include "matpoly.hpp"

namespace kroncond {

// ---------------------------------------------------------------------------
// Rectangular matrix polynomials.
//
// The bodies M(lambda) of block Kronecker forms and the structured blocks
// L_k, Lambda_k are rectangular, so they do not fit MatrixPolynomial. PolyMat
// keeps an explicit grade: trailing zero coefficients are structural here
// (a grade-ell body stays grade ell even when its leading coefficient
// happens to vanish).
// ---------------------------------------------------------------------------

struct PolyMat {
    std::vector<CMatrix> coeffs;

    PolyMat() = default;
    explicit PolyMat(std::vector<CMatrix> cs) : coeffs(std::move(cs)) {
        if (coeffs.empty()) throw std::invalid_argument("PolyMat: empty coefficient list");
        for (const CMatrix& c : coeffs)
            if (c.rows() != coeffs[0].rows() || c.cols() != coeffs[0].cols())
                throw std::invalid_argument("PolyMat: ragged coefficient list");
    }
    static PolyMat zero(Eigen::Index rows, Eigen::Index cols, int grade) {
        return PolyMat(std::vector<CMatrix>(static_cast<std::size_t>(grade) + 1,
                                            CMatrix::Zero(rows, cols)));
    }

    Eigen::Index rows() const { return coeffs[0].rows(); }
    Eigen::Index cols() const { return coeffs[0].cols(); }
    int grade() const { return static_cast<int>(coeffs.size()) - 1; }

    CMatrix eval(Complex lambda) const {
        CMatrix acc = coeffs.back();
        for (int i = grade() - 1; i >= 0; --i) acc = lambda * acc + coeffs[static_cast<std::size_t>(i)];
        return acc;
    }
    CMatrix eval_derivative(Complex lambda) const {
        if (grade() == 0) return CMatrix::Zero(rows(), cols());
        CMatrix acc = static_cast<double>(grade()) * coeffs.back();
        for (int i = grade() - 1; i >= 1; --i)
            acc = lambda * acc + static_cast<double>(i) * coeffs[static_cast<std::size_t>(i)];
        return acc;
    }

    PolyMat transpose() const {
        std::vector<CMatrix> cs;
        cs.reserve(coeffs.size());
        for (const CMatrix& c : coeffs) cs.push_back(c.transpose());
        return PolyMat(std::move(cs));
    }
    // Coefficientwise conjugate transpose: M*(lambda) = sum M_i^* lambda^i,
    // so that M*(conj(mu)) = M(mu)^*.
    PolyMat adjoint() const {
        std::vector<CMatrix> cs;
        cs.reserve(coeffs.size());
        for (const CMatrix& c : coeffs) cs.push_back(c.adjoint());
        return PolyMat(std::move(cs));
    }
};

inline PolyMat pm_add(const PolyMat& a, const PolyMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("PolyMat sum: size mismatch");
    PolyMat out = PolyMat::zero(a.rows(), a.cols(), std::max(a.grade(), b.grade()));
    for (int i = 0; i <= a.grade(); ++i) out.coeffs[static_cast<std::size_t>(i)] += a.coeffs[static_cast<std::size_t>(i)];
    for (int i = 0; i <= b.grade(); ++i) out.coeffs[static_cast<std::size_t>(i)] += b.coeffs[static_cast<std::size_t>(i)];
    return out;
}

inline PolyMat pm_mul(const PolyMat& a, const PolyMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("PolyMat product: inner dimension mismatch");
    PolyMat out = PolyMat::zero(a.rows(), b.cols(), a.grade() + b.grade());
    for (int i = 0; i <= a.grade(); ++i)
        for (int j = 0; j <= b.grade(); ++j)
            out.coeffs[static_cast<std::size_t>(i + j)] +=
                a.coeffs[static_cast<std::size_t>(i)] * b.coeffs[static_cast<std::size_t>(j)];
    return out;
}

/// Reduces a PolyMat to the stated grade; coefficients above it must vanish.
inline PolyMat pm_trim(const PolyMat& a, int grade, double tol = 1e-10) {
    double scale = 0.0;
    for (const CMatrix& c : a.coeffs) scale = std::max(scale, c.cwiseAbs().maxCoeff());
    for (int i = grade + 1; i <= a.grade(); ++i)
        if (a.coeffs[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() > tol * std::max(1.0, scale))
            throw std::runtime_error("PolyMat: nonzero coefficient above the requested grade");
    std::vector<CMatrix> cs(a.coeffs.begin(), a.coeffs.begin() + grade + 1);
    return PolyMat(std::move(cs));
}

// ---------------------------------------------------------------------------
// Structured blocks L_k, Lambda_k, R_k, S_k (in the variable lambda^ell, with
// n x n identity blocks), and the stacked matrices H and G built from them.
// k = 0 yields empty matrices; Eigen's empty products then make the
// degenerate cases below come out right without special-casing.
// ---------------------------------------------------------------------------

/// Lambda_k(lambda^ell) (x) I_n: stacked blocks lambda^{ell k} I, ..., I.
inline CMatrix lambda_block(int k, int ell, int n, Complex lambda) {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(k + 1) * n, n);
    const Complex mu = std::pow(lambda, ell);
    Complex pw = 1.0;
    for (int b = k; b >= 0; --b) {
        out.block(static_cast<Eigen::Index>(b) * n, 0, n, n) = pw * CMatrix::Identity(n, n);
        pw *= mu;
    }
    return out;
}

/// Lambda_k(lambda^ell) (x) I_n as a polynomial: block b holds lambda^{ell(k-b)} I.
inline PolyMat lambda_block_poly(int k, int ell, int n) {
    PolyMat out = PolyMat::zero(static_cast<Eigen::Index>(k + 1) * n, n, ell * k);
    for (int b = 0; b <= k; ++b)
        out.coeffs[static_cast<std::size_t>(ell * (k - b))]
            .block(static_cast<Eigen::Index>(b) * n, 0, n, n) = CMatrix::Identity(n, n);
    return out;
}

/// L_k(lambda^ell) (x) I_n: -I on the block diagonal, lambda^ell I above it.
inline PolyMat L_block(int k, int ell, int n) {
    PolyMat out = PolyMat::zero(static_cast<Eigen::Index>(k) * n,
                                static_cast<Eigen::Index>(k + 1) * n, ell);
    for (int i = 0; i < k; ++i) {
        out.coeffs[0].block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(i) * n, n, n) =
            -CMatrix::Identity(n, n);
        out.coeffs[static_cast<std::size_t>(ell)]
            .block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(i + 1) * n, n, n) =
            CMatrix::Identity(n, n);
    }
    return out;
}

/// R_k(lambda^ell) (x) I_n: lower-triangular block Toeplitz, entry (i, j) is
/// lambda^{ell(i-j)} I for j <= i, with an extra zero block column on the right.
inline CMatrix R_block(int k, int ell, int n, Complex lambda) {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(k) * n, static_cast<Eigen::Index>(k + 1) * n);
    const Complex mu = std::pow(lambda, ell);
    for (int i = 0; i < k; ++i) {
        Complex pw = 1.0;
        for (int j = i; j >= 0; --j) {
            out.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) =
                pw * CMatrix::Identity(n, n);
            pw *= mu;
        }
    }
    return out;
}

/// S_k(lambda^ell) (x) I_n: upper-triangular block Toeplitz with zero first
/// block column, entry (i, j) is lambda^{ell(k+i-j)} I for j >= i+1.
inline CMatrix S_block(int k, int ell, int n, Complex lambda) {
    CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(k) * n, static_cast<Eigen::Index>(k + 1) * n);
    const Complex mu = std::pow(lambda, ell);
    for (int i = 0; i < k; ++i) {
        Complex pw = std::pow(mu, i); // entry (i, j) carries mu^{k+i-j}
        for (int j = k; j >= i + 1; --j) {
            out.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) =
                pw * CMatrix::Identity(n, n);
            pw *= mu;
        }
    }
    return out;
}

/// H(lambda; p, q, M) = [Lambda_p (x) I ; R_q M(lambda) (Lambda_p (x) I)].
/// M must be (q+1)n x (p+1)n of grade ell; n and ell are read off M.
inline CMatrix H_block(Complex lambda, int p, int q, const PolyMat& M) {
    const int n = static_cast<int>(M.cols()) / (p + 1);
    const int ell = M.grade();
    if (M.cols() != static_cast<Eigen::Index>(p + 1) * n || M.rows() != static_cast<Eigen::Index>(q + 1) * n)
        throw std::invalid_argument("H_block: M dimensions inconsistent with (p, q)");
    const CMatrix lam = lambda_block(p, ell, n, lambda);
    CMatrix out(static_cast<Eigen::Index>(p + q + 1) * n, n);
    out.topRows(static_cast<Eigen::Index>(p + 1) * n) = lam;
    out.bottomRows(static_cast<Eigen::Index>(q) * n) = R_block(q, ell, n, lambda) * (M.eval(lambda) * lam);
    return out;
}

/// G(lambda; p, q, M) = [lambda^{q ell} (Lambda_p (x) I) ; -S_q M(lambda) (Lambda_p (x) I)].
inline CMatrix G_block(Complex lambda, int p, int q, const PolyMat& M) {
    const int n = static_cast<int>(M.cols()) / (p + 1);
    const int ell = M.grade();
    if (M.cols() != static_cast<Eigen::Index>(p + 1) * n || M.rows() != static_cast<Eigen::Index>(q + 1) * n)
        throw std::invalid_argument("G_block: M dimensions inconsistent with (p, q)");
    const CMatrix lam = lambda_block(p, ell, n, lambda);
    CMatrix out(static_cast<Eigen::Index>(p + q + 1) * n, n);
    out.topRows(static_cast<Eigen::Index>(p + 1) * n) = std::pow(lambda, q * ell) * lam;
    out.bottomRows(static_cast<Eigen::Index>(q) * n) = -(S_block(q, ell, n, lambda) * (M.eval(lambda) * lam));
    return out;
}

// ---------------------------------------------------------------------------
// Block Kronecker ell-ifications of a prescribed polynomial.
// ---------------------------------------------------------------------------

/// Partition parameters of a block Kronecker form: degree d = ell * k with
/// k = eps + eta + 1.
struct KroneckerShape {
    int ell = 1;
    int eps = 0;
    int eta = 0;
    int n = 1;

    int k() const { return eps + eta + 1; }
    int form_size() const { return k() * n; }

    void validate_for(const MatrixPolynomial& p) const {
        if (ell < 1 || eps < 0 || eta < 0 || n != p.n)
            throw std::invalid_argument("kronecker shape: invalid parameters");
        if (p.grade != ell * k())
            throw std::invalid_argument("kronecker shape: grade must equal ell*(eps+eta+1)");
    }
};

/// The grade-ell slices B_1..B_k of P: B_1 carries A_0..A_ell, and B_j for
/// j >= 2 carries A_{ell(j-1)+1}..A_{ell j} with zero constant term, so that
/// P(lambda) = sum_j lambda^{ell(j-1)} B_j(lambda).
inline std::vector<PolyMat> b_slices(const MatrixPolynomial& p, int ell) {
    if (ell < 1 || p.grade % ell != 0)
        throw std::invalid_argument("b_slices: grade must be divisible by ell");
    const int k = p.grade / ell;
    std::vector<PolyMat> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        PolyMat b = PolyMat::zero(p.n, p.n, ell);
        const int t0 = (j == 1) ? 0 : 1;
        for (int t = t0; t <= ell; ++t)
            b.coeffs[static_cast<std::size_t>(t)] = p.coeffs[static_cast<std::size_t>(ell * (j - 1) + t)];
        out.push_back(std::move(b));
    }
    return out;
}

/// The standard solution M_{eps,eta}(lambda; P): B_k..B_{eta+1} across the
/// first block row, B_eta..B_1 down the last block column, zero elsewhere.
inline PolyMat standard_M(const MatrixPolynomial& p, int ell, int eps, int eta) {
    require_nondegenerate(p);
    const KroneckerShape shape{ell, eps, eta, p.n};
    shape.validate_for(p);
    const std::vector<PolyMat> b = b_slices(p, ell);
    const int n = p.n;
    const int k = shape.k();
    PolyMat m = PolyMat::zero(static_cast<Eigen::Index>(eta + 1) * n,
                              static_cast<Eigen::Index>(eps + 1) * n, ell);
    for (int t = 0; t <= ell; ++t) {
        for (int j = 0; j <= eps; ++j)
            m.coeffs[static_cast<std::size_t>(t)].block(0, static_cast<Eigen::Index>(j) * n, n, n) =
                b[static_cast<std::size_t>(k - j - 1)].coeffs[static_cast<std::size_t>(t)];
        for (int i = 1; i <= eta; ++i)
            m.coeffs[static_cast<std::size_t>(t)]
                .block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(eps) * n, n, n) =
                b[static_cast<std::size_t>(eta - i)].coeffs[static_cast<std::size_t>(t)];
    }
    return m;
}

/// Free parameters of the general solution: M = standard_M + (lambda [0; D] + B) (L_eps (x) I)
/// + (L_eta^T (x) I) (lambda [0, -D] + C).
struct GeneralMParams {
    CMatrix B; // (eta+1)n x eps n
    CMatrix C; // eta n x (eps+1)n
    std::optional<PolyMat> D; // eta n x eps n, grade ell-2; absent when ell < 2

    static GeneralMParams zero(int ell, int eps, int eta, int n) {
        GeneralMParams g;
        g.B = CMatrix::Zero(static_cast<Eigen::Index>(eta + 1) * n, static_cast<Eigen::Index>(eps) * n);
        g.C = CMatrix::Zero(static_cast<Eigen::Index>(eta) * n, static_cast<Eigen::Index>(eps + 1) * n);
        if (ell >= 2 && eps > 0 && eta > 0)
            g.D = PolyMat::zero(static_cast<Eigen::Index>(eta) * n, static_cast<Eigen::Index>(eps) * n, ell - 2);
        return g;
    }
};

inline PolyMat general_M(const MatrixPolynomial& p, int ell, int eps, int eta,
                         const GeneralMParams& params) {
    const int n = p.n;
    PolyMat m0 = standard_M(p, ell, eps, eta);
    if (params.B.rows() != static_cast<Eigen::Index>(eta + 1) * n ||
        params.B.cols() != static_cast<Eigen::Index>(eps) * n)
        throw std::invalid_argument("general_M: B has the wrong size");
    if (params.C.rows() != static_cast<Eigen::Index>(eta) * n ||
        params.C.cols() != static_cast<Eigen::Index>(eps + 1) * n)
        throw std::invalid_argument("general_M: C has the wrong size");
    if (params.D && ell < 2)
        throw std::invalid_argument("general_M: D requires ell >= 2");

    // left factor lambda [0; D] + B, grade ell-1
    PolyMat left = PolyMat::zero(static_cast<Eigen::Index>(eta + 1) * n,
                                 static_cast<Eigen::Index>(eps) * n, std::max(ell - 1, 0));
    left.coeffs[0] = params.B;
    if (params.D) {
        const PolyMat& d = *params.D;
        if (d.rows() != static_cast<Eigen::Index>(eta) * n || d.cols() != static_cast<Eigen::Index>(eps) * n ||
            d.grade() != ell - 2)
            throw std::invalid_argument("general_M: D has the wrong size or grade");
        for (int t = 0; t <= ell - 2; ++t)
            left.coeffs[static_cast<std::size_t>(t + 1)].bottomRows(static_cast<Eigen::Index>(eta) * n) =
                d.coeffs[static_cast<std::size_t>(t)];
    }
    // right factor lambda [0, -D] + C, grade ell-1
    PolyMat right = PolyMat::zero(static_cast<Eigen::Index>(eta) * n,
                                  static_cast<Eigen::Index>(eps + 1) * n, std::max(ell - 1, 0));
    right.coeffs[0] = params.C;
    if (params.D) {
        for (int t = 0; t <= ell - 2; ++t)
            right.coeffs[static_cast<std::size_t>(t + 1)].rightCols(static_cast<Eigen::Index>(eps) * n) =
                -params.D->coeffs[static_cast<std::size_t>(t)];
    }

    PolyMat m = pm_add(m0, pm_add(pm_mul(left, L_block(eps, ell, n)),
                                  pm_mul(L_block(eta, ell, n).transpose(), right)));
    // the lambda^{ell+1}..lambda^{2ell-1} contributions of the two corrections
    // cancel exactly; trim back to the declared grade
    return pm_trim(m, ell);
}

/// Symbolic product (Lambda_eta^T (x) I) M (Lambda_eps (x) I): block (i, j) of
/// M contributes its coefficients at degree offset ell*(k-1-i-j). The result
/// is returned with grade ell*k regardless of its actual degree.
inline MatrixPolynomial recover_Q(const PolyMat& m, const KroneckerShape& shape) {
    const int n = shape.n;
    const int ell = shape.ell;
    const int k = shape.k();
    if (m.rows() != static_cast<Eigen::Index>(shape.eta + 1) * n ||
        m.cols() != static_cast<Eigen::Index>(shape.eps + 1) * n || m.grade() != ell)
        throw std::invalid_argument("recover_Q: M dimensions inconsistent with shape");
    std::vector<CMatrix> q(static_cast<std::size_t>(ell * k) + 1, CMatrix::Zero(n, n));
    for (int i = 0; i <= shape.eta; ++i)
        for (int j = 0; j <= shape.eps; ++j)
            for (int t = 0; t <= ell; ++t)
                q[static_cast<std::size_t>(ell * (k - 1 - i - j) + t)] +=
                    m.coeffs[static_cast<std::size_t>(t)].block(static_cast<Eigen::Index>(i) * n,
                                                                static_cast<Eigen::Index>(j) * n, n, n);
    return MatrixPolynomial(n, std::move(q));
}

/// Fast secondary check for solutions of the inverse problem: the block
/// anti-diagonal sums of the coefficients of M must reproduce the A_i. Block
/// indices are 0-based here; this convention is pinned by agreement with the
/// recover_Q oracle on standard_M (see the tests).
inline bool anti_diagonal_check(const PolyMat& m, const KroneckerShape& shape,
                                const MatrixPolynomial& p, double tol = 1e-12) {
    const int n = shape.n;
    const int ell = shape.ell;
    const int k = shape.k();
    const double scale = std::max(1.0, norm_profile(p).max_norm);
    const auto anti_sum = [&](int t, int s) {
        CMatrix acc = CMatrix::Zero(n, n);
        for (int i = 0; i <= shape.eta; ++i) {
            const int j = s - i;
            if (j < 0 || j > shape.eps) continue;
            acc += m.coeffs[static_cast<std::size_t>(t)].block(static_cast<Eigen::Index>(i) * n,
                                                               static_cast<Eigen::Index>(j) * n, n, n);
        }
        return acc;
    };
    for (int a = 0; a <= k; ++a) {
        CMatrix lhs = anti_sum(ell, a);
        if (a >= 1) lhs += anti_sum(0, a - 1);
        const int idx = ell * (k - a);
        const CMatrix rhs = idx >= 0 ? p.coeffs[static_cast<std::size_t>(idx)] : CMatrix::Zero(n, n);
        if ((lhs - rhs).norm() > tol * scale) return false;
    }
    for (int s = 0; s <= k - 1; ++s)
        for (int t = 1; t <= ell - 1; ++t) {
            const CMatrix lhs = anti_sum(ell - t, s);
            const CMatrix rhs = p.coeffs[static_cast<std::size_t>(p.grade - s * ell - t)];
            if ((lhs - rhs).norm() > tol * scale) return false;
        }
    return true;
}

/// An assembled block Kronecker form: the 2x2 block layout with body M, the
/// dual ladders L_eta^T (x) I and L_eps (x) I, and a zero block.
struct BlockKroneckerForm {
    KroneckerShape shape;
    PolyMat M;
    MatrixPolynomial assembled;
    std::string label;
};

/// Assembles the form and, when a target polynomial is supplied, validates
/// that M solves the inverse problem for it (coefficientwise, relative to the
/// largest coefficient norm).
inline BlockKroneckerForm assemble(const PolyMat& m, const KroneckerShape& shape,
                                   const MatrixPolynomial* target = nullptr,
                                   std::string label = {}) {
    const int n = shape.n;
    const int ell = shape.ell;
    if (m.rows() != static_cast<Eigen::Index>(shape.eta + 1) * n ||
        m.cols() != static_cast<Eigen::Index>(shape.eps + 1) * n || m.grade() != ell)
        throw std::invalid_argument("assemble: M dimensions inconsistent with shape");
    const Eigen::Index size = shape.form_size();
    std::vector<CMatrix> coeffs(static_cast<std::size_t>(ell) + 1, CMatrix::Zero(size, size));
    const Eigen::Index rsplit = static_cast<Eigen::Index>(shape.eta + 1) * n;
    const Eigen::Index csplit = static_cast<Eigen::Index>(shape.eps + 1) * n;
    for (int t = 0; t <= ell; ++t)
        coeffs[static_cast<std::size_t>(t)].topLeftCorner(rsplit, csplit) = m.coeffs[static_cast<std::size_t>(t)];
    for (int j = 0; j < shape.eta; ++j) {
        coeffs[0].block(static_cast<Eigen::Index>(j) * n, csplit + static_cast<Eigen::Index>(j) * n, n, n) =
            -CMatrix::Identity(n, n);
        coeffs[static_cast<std::size_t>(ell)]
            .block(static_cast<Eigen::Index>(j + 1) * n, csplit + static_cast<Eigen::Index>(j) * n, n, n) =
            CMatrix::Identity(n, n);
    }
    for (int i = 0; i < shape.eps; ++i) {
        coeffs[0].block(rsplit + static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(i) * n, n, n) =
            -CMatrix::Identity(n, n);
        coeffs[static_cast<std::size_t>(ell)]
            .block(rsplit + static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(i + 1) * n, n, n) =
            CMatrix::Identity(n, n);
    }
    BlockKroneckerForm form{shape, m, MatrixPolynomial(static_cast<int>(size), std::move(coeffs)),
                            std::move(label)};
    if (target) {
        const MatrixPolynomial q = recover_Q(m, shape);
        const double scale = std::max(1e-300, norm_profile(*target).max_norm);
        if (q.grade != target->grade)
            throw std::runtime_error("assemble: recovered polynomial has the wrong grade");
        for (std::size_t i = 0; i < q.coeffs.size(); ++i)
            if ((q.coeffs[i] - target->coeffs[i]).norm() > 1e-12 * scale)
                throw std::runtime_error("assemble: M is not an ell-ification body for the target");
    }
    return form;
}

} // namespace kroncond
