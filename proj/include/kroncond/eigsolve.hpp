#pragma once

#include <algorithm>
#include <limits>
#include <tuple>

#include "kronecker.hpp"
#include "pencil.hpp"
#include "presets.hpp"

namespace kroncond {

/// A left/right eigenpair of P with bookkeeping. Residuals are normalized by
/// the evaluated norm sum_i |lambda|^i ||A_i||_2; the simplicity margin is the
/// relative distance to the nearest other computed eigenvalue.
struct Eigentriple {
    Complex lambda;
    CVector x; // right eigenvector of P
    CVector y; // left eigenvector of P
    double residual_right = 0.0;
    double residual_left = 0.0;
    double simplicity_margin = std::numeric_limits<double>::infinity();
    bool converged = true;
};

struct EigResult {
    std::vector<Eigentriple> triples; // finite eigenvalues, sorted by |lambda|
    int infinite_count = 0;
};

// ---------------------------------------------------------------------------

/// Degree-1 pencil (A, B) with lambda*B + A spectrally equivalent to the
/// form: the form itself when ell = 1, otherwise its Frobenius companion
/// pencil of size ell * k * n.
inline std::pair<CMatrix, CMatrix> linearize_form(const BlockKroneckerForm& form) {
    const MatrixPolynomial& f = form.assembled;
    if (f.grade == 1) return {f.coeffs[0], f.coeffs[1]};
    const Eigen::Index m = f.coeffs[0].rows();
    const int ell = f.grade;
    const Eigen::Index size = static_cast<Eigen::Index>(ell) * m;
    CMatrix b = CMatrix::Zero(size, size);
    CMatrix a = CMatrix::Zero(size, size);
    b.topLeftCorner(m, m) = f.coeffs[static_cast<std::size_t>(ell)];
    for (int i = 1; i < ell; ++i)
        b.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(i) * m, m, m) =
            CMatrix::Identity(m, m);
    for (int j = 0; j < ell; ++j)
        a.block(0, static_cast<Eigen::Index>(j) * m, m, m) = f.coeffs[static_cast<std::size_t>(ell - 1 - j)];
    for (int i = 1; i < ell; ++i)
        a.block(static_cast<Eigen::Index>(i) * m, static_cast<Eigen::Index>(i - 1) * m, m, m) =
            -CMatrix::Identity(m, m);
    return {a, b};
}

namespace detail {

inline void fill_margins(std::vector<Eigentriple>& triples) {
    for (std::size_t i = 0; i < triples.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < triples.size(); ++j) {
            if (i == j) continue;
            best = std::min(best, std::abs(triples[i].lambda - triples[j].lambda));
        }
        const double denom = std::max(std::abs(triples[i].lambda), 1e-300);
        triples[i].simplicity_margin = best / denom;
    }
}

inline void sort_by_modulus(std::vector<Eigentriple>& triples) {
    std::sort(triples.begin(), triples.end(), [](const Eigentriple& a, const Eigentriple& b) {
        const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
        if (ma != mb) return ma < mb;
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
}

inline void attach_residuals(const MatrixPolynomial& p, const CoeffNormProfile& prof, Eigentriple& t) {
    const CMatrix pv = evaluate(p, t.lambda);
    const double scale = std::max(evaluated_norm(prof.per_coeff, std::abs(t.lambda)), 1e-300);
    t.residual_right = (pv * t.x).norm() / (scale * t.x.norm());
    t.residual_left = (t.y.adjoint() * pv).norm() / (scale * t.y.norm());
}

} // namespace detail

/// Eigentriples of P recovered through a validated ell-ification. The pencil
/// eigenvectors are unwrapped to form-level vectors, then the P-level x is
/// read off the Lambda_eps structure of z (and y off the Lambda_eta structure
/// of w): the unscaled copy sits at block index eps (resp. eta) for
/// |lambda| <= 1, and at block 0 with weight lambda^{eps*ell} outside the unit
/// disk, so the dominant block is always the one read.
inline EigResult eig_with_form(const MatrixPolynomial& p, const BlockKroneckerForm& form) {
    require_regular(p);
    const int n = p.n;
    const KroneckerShape& shape = form.shape;
    const Eigen::Index m = form.assembled.coeffs[0].rows();
    const auto [a, b] = linearize_form(form);
    const std::vector<PencilEigenpair> pairs = solve_pencil(a, b);
    const CoeffNormProfile prof = norm_profile(p);

    EigResult result;
    for (const PencilEigenpair& pair : pairs) {
        if (!pair.finite) {
            ++result.infinite_count;
            continue;
        }
        const Complex lambda = pair.lambda;
        const bool inside = std::abs(lambda) <= 1.0;

        // companion unwrap: the pencil vector stacks Lambda_{ell-1} blocks of
        // the form vector on the right, and copies it in the top block on the
        // left
        CVector z_form, w_form;
        if (form.assembled.grade == 1) {
            z_form = pair.right;
            w_form = pair.left;
        } else {
            const int ell = form.assembled.grade;
            if (inside) {
                z_form = pair.right.segment(static_cast<Eigen::Index>(ell - 1) * m, m);
            } else {
                z_form = pair.right.head(m) / std::pow(lambda, ell - 1);
            }
            w_form = pair.left.head(m);
        }

        Eigentriple t;
        t.lambda = lambda;
        if (inside) {
            t.x = z_form.segment(static_cast<Eigen::Index>(shape.eps) * n, n);
            t.y = w_form.segment(static_cast<Eigen::Index>(shape.eta) * n, n);
        } else {
            t.x = z_form.head(n) / std::pow(lambda, shape.eps * shape.ell);
            t.y = w_form.head(n) / std::pow(std::conj(lambda), shape.eta * shape.ell);
        }
        const double tiny = 1e-8 / std::sqrt(static_cast<double>(m));
        if (t.x.norm() <= tiny * pair.right.norm() || t.y.norm() <= tiny * pair.left.norm()) {
            t.converged = false; // degenerate recovery, eigenpair inconsistent
            if (t.x.norm() == 0.0) t.x = CVector::Unit(n, 0);
            if (t.y.norm() == 0.0) t.y = CVector::Unit(n, 0);
        }
        t.x.normalize();
        t.y.normalize();
        detail::attach_residuals(p, prof, t);
        result.triples.push_back(std::move(t));
    }
    detail::sort_by_modulus(result.triples);
    detail::fill_margins(result.triples);
    return result;
}

// ---------------------------------------------------------------------------
// Reference oracle: Newton refinement in extended precision.
// ---------------------------------------------------------------------------

namespace detail {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;

struct LPoly {
    std::vector<LMatrix> coeffs;
};

inline LPoly to_extended(const MatrixPolynomial& p) {
    LPoly out;
    out.coeffs.reserve(p.coeffs.size());
    for (const CMatrix& a : p.coeffs) out.coeffs.push_back(a.cast<LComplex>());
    return out;
}

inline LMatrix eval_l(const LPoly& p, LComplex lambda) {
    LMatrix acc = p.coeffs.back();
    for (int i = static_cast<int>(p.coeffs.size()) - 2; i >= 0; --i)
        acc = lambda * acc + p.coeffs[static_cast<std::size_t>(i)];
    return acc;
}

inline LMatrix eval_dl(const LPoly& p, LComplex lambda) {
    const int d = static_cast<int>(p.coeffs.size()) - 1;
    if (d == 0) return LMatrix::Zero(p.coeffs[0].rows(), p.coeffs[0].cols());
    LMatrix acc = static_cast<long double>(d) * p.coeffs.back();
    for (int i = d - 1; i >= 1; --i)
        acc = lambda * acc + static_cast<long double>(i) * p.coeffs[static_cast<std::size_t>(i)];
    return acc;
}

/// Newton iteration on the bordered system [P(lambda) x ; c^* x - 1] = 0.
/// Returns (lambda, x, converged).
inline std::tuple<LComplex, LVector, bool> newton_refine(const LPoly& p, LComplex lambda0,
                                                         LVector x0, const LVector& c) {
    const Eigen::Index n = x0.size();
    LComplex lambda = lambda0;
    LVector x = x0;
    // normalize against the border vector first; bail out if c is nearly
    // orthogonal to the eigenvector so the caller can redraw it
    const LComplex cx = c.dot(x);
    if (std::abs(cx) < 1e-12L * x.norm()) return {lambda, x, false};
    x /= cx;
    bool converged = false;
    for (int iter = 0; iter < 20; ++iter) {
        const LMatrix pv = eval_l(p, lambda);
        const LMatrix dpv = eval_dl(p, lambda);
        LMatrix jac(n + 1, n + 1);
        jac.topLeftCorner(n, n) = pv;
        jac.topRightCorner(n, 1) = dpv * x;
        jac.bottomLeftCorner(1, n) = c.adjoint();
        jac(n, n) = LComplex(0);
        LVector rhs(n + 1);
        rhs.head(n) = -(pv * x);
        rhs(n) = LComplex(1) - c.dot(x);
        const LVector step = jac.partialPivLu().solve(rhs);
        x += step.head(n);
        lambda += step(n);
        const long double scale = std::max<long double>(std::abs(lambda), 1e-300L);
        if (std::abs(step(n)) / scale < 1e-14L) {
            converged = true;
            break;
        }
    }
    return {lambda, x, converged};
}

} // namespace detail

/// High-accuracy eigentriples of P: the frobenius1 route refined by Newton
/// iteration on the bordered system in the widest hardware floating type,
/// with left vectors refined on the conjugate-transposed polynomial.
inline std::vector<Eigentriple> reference_eigentriples(const MatrixPolynomial& p) {
    const EigResult base = eig_with_form(p, frobenius1(p));
    const detail::LPoly pl = detail::to_extended(p);
    detail::LPoly pl_adj;
    pl_adj.coeffs.reserve(p.coeffs.size());
    for (const CMatrix& a : p.coeffs) pl_adj.coeffs.push_back(a.adjoint().cast<detail::LComplex>());
    const CoeffNormProfile prof = norm_profile(p);

    // fixed border vectors; redrawn only if nearly orthogonal to an iterate
    Prng rng(0x626f726465725fULL);
    std::vector<detail::LVector> borders;
    for (int attempt = 0; attempt < 4; ++attempt) {
        detail::LVector c(p.n);
        for (int i = 0; i < p.n; ++i) {
            const Complex g = rng.next_complex_gaussian();
            c(i) = detail::LComplex(g.real(), g.imag());
        }
        borders.push_back(c.normalized());
    }

    std::vector<Eigentriple> out;
    for (const Eigentriple& t0 : base.triples) {
        Eigentriple t = t0;
        bool ok_right = false, ok_left = false;
        detail::LComplex lam(t0.lambda.real(), t0.lambda.imag());
        detail::LVector x = t0.x.cast<detail::LComplex>();
        for (const detail::LVector& c : borders) {
            auto [lam_r, x_r, conv] = detail::newton_refine(pl, lam, x, c);
            if (conv) {
                lam = lam_r;
                x = x_r;
                ok_right = true;
                break;
            }
        }
        detail::LComplex mu = std::conj(lam);
        detail::LVector y = t0.y.cast<detail::LComplex>();
        for (const detail::LVector& c : borders) {
            auto [mu_r, y_r, conv] = detail::newton_refine(pl_adj, mu, y, c);
            if (conv && std::abs(std::conj(mu_r) - lam) <=
                            1e-8L * std::max<long double>(std::abs(lam), 1e-300L)) {
                mu = mu_r;
                y = y_r;
                ok_left = true;
                break;
            }
        }
        t.lambda = Complex(static_cast<double>(lam.real()), static_cast<double>(lam.imag()));
        t.x = x.cast<Complex>();
        t.y = y.cast<Complex>();
        t.x.normalize();
        t.y.normalize();
        t.converged = ok_right && ok_left;
        detail::attach_residuals(p, prof, t);
        out.push_back(std::move(t));
    }
    detail::sort_by_modulus(out);
    detail::fill_margins(out);
    return out;
}

// ---------------------------------------------------------------------------

struct ForwardErrors {
    struct Match {
        int reference_index;
        int computed_index;
        double rel_error;
    };
    std::vector<Match> matches;              // in reference-index order
    std::vector<int> unmatched_reference;
    std::vector<int> unmatched_computed;
    double max_error = 0.0;
};

/// Greedy nearest-neighbor matching on |lambda_i - lambdatilde_j| / |lambda_i|
/// (globally smallest distance first, ties broken by index); each reference is
/// matched at most once.
inline ForwardErrors forward_errors(const std::vector<Eigentriple>& computed,
                                    const std::vector<Eigentriple>& reference) {
    if (computed.empty() || reference.empty())
        throw std::invalid_argument("forward_errors: both lists must be nonempty");
    struct Cand {
        double dist;
        int i, j;
    };
    std::vector<Cand> cands;
    cands.reserve(computed.size() * reference.size());
    for (int i = 0; i < static_cast<int>(reference.size()); ++i)
        for (int j = 0; j < static_cast<int>(computed.size()); ++j) {
            const double denom = std::abs(reference[static_cast<std::size_t>(i)].lambda);
            const double num = std::abs(reference[static_cast<std::size_t>(i)].lambda -
                                        computed[static_cast<std::size_t>(j)].lambda);
            cands.push_back({denom > 0.0 ? num / denom : num, i, j});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<bool> ref_used(reference.size(), false), comp_used(computed.size(), false);
    ForwardErrors out;
    for (const Cand& c : cands) {
        if (ref_used[static_cast<std::size_t>(c.i)] || comp_used[static_cast<std::size_t>(c.j)]) continue;
        ref_used[static_cast<std::size_t>(c.i)] = true;
        comp_used[static_cast<std::size_t>(c.j)] = true;
        out.matches.push_back({c.i, c.j, c.dist});
        out.max_error = std::max(out.max_error, c.dist);
    }
    std::sort(out.matches.begin(), out.matches.end(),
              [](const ForwardErrors::Match& a, const ForwardErrors::Match& b) {
                  return a.reference_index < b.reference_index;
              });
    for (int i = 0; i < static_cast<int>(reference.size()); ++i)
        if (!ref_used[static_cast<std::size_t>(i)]) out.unmatched_reference.push_back(i);
    for (int j = 0; j < static_cast<int>(computed.size()); ++j)
        if (!comp_used[static_cast<std::size_t>(j)]) out.unmatched_computed.push_back(j);
    return out;
}

} // namespace kroncond
