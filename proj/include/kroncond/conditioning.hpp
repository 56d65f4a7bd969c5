#pragma once

#include "eigsolve.hpp"

namespace kroncond {

// ---------------------------------------------------------------------------
// Eigenvalue condition numbers. All formulas require a simple, finite,
// nonzero eigenvalue; the caller filters on the simplicity margin (the
// default threshold used by the suites is 1e-8).
// ---------------------------------------------------------------------------

/// kappa(lambda) = (sum_i |lambda|^i w_i) ||x|| ||y|| / (|lambda| |y^* P'(lambda) x|).
inline double kappa(const MatrixPolynomial& p, const Eigentriple& t,
                    const std::vector<double>& weights) {
    if (weights.size() != p.coeffs.size())
        throw std::invalid_argument("kappa: need one weight per coefficient");
    const double al = std::abs(t.lambda);
    if (al == 0.0 || !std::isfinite(al))
        throw std::domain_error("kappa: eigenvalue must be finite and nonzero");
    const Complex inner = (t.y.adjoint() * evaluate_derivative(p, t.lambda) * t.x)(0);
    if (std::abs(inner) < 1e-300)
        throw std::domain_error("kappa: |y^* P'(lambda) x| vanishes (defective or non-simple)");
    return evaluated_norm(weights, al) * t.x.norm() * t.y.norm() / (al * std::abs(inner));
}

/// Coefficientwise condition number: tolerances w_i = ||A_i||_2.
inline double coeff_cond(const MatrixPolynomial& p, const Eigentriple& t) {
    return kappa(p, t, norm_profile(p).per_coeff);
}

/// Normwise condition number: tolerances w_i = ||[A_0 ... A_d]||_2.
inline double norm_cond(const MatrixPolynomial& p, const Eigentriple& t) {
    const CoeffNormProfile prof = norm_profile(p);
    return kappa(p, t, std::vector<double>(prof.per_coeff.size(), prof.stacked));
}

// Spectral norms of a form, cached so per-eigenvalue work stays cheap.
struct FormNorms {
    std::vector<double> coeff_norms; // ||L_i||_2 of the assembled form
    std::vector<double> m_norms;     // ||M_i||_2 of the body
    double max_m_norm = 0.0;
    double sum_m_sq = 0.0;
};

inline FormNorms form_norms(const BlockKroneckerForm& form) {
    FormNorms out;
    for (const CMatrix& c : form.assembled.coeffs) out.coeff_norms.push_back(spectral_norm(c));
    for (const CMatrix& c : form.M.coeffs) {
        const double nm = spectral_norm(c);
        out.m_norms.push_back(nm);
        out.max_m_norm = std::max(out.max_m_norm, nm);
        out.sum_m_sq += nm * nm;
    }
    return out;
}

enum class VectorRoute { Auto, H, G };

/// Coefficientwise condition number of lambda as an eigenvalue of the form,
/// with the form eigenvectors rebuilt from (x, y) through the one-sided
/// factorization structure: the H vectors inside the closed unit disk, the G
/// vectors outside (ties at |lambda| = 1 go to H). Backend eigenvectors are
/// never trusted here; the formula vectors pin the scaling.
inline double coeff_cond_form(const BlockKroneckerForm& form, const FormNorms& norms,
                              const Eigentriple& t, VectorRoute route = VectorRoute::Auto) {
    const double al = std::abs(t.lambda);
    if (al == 0.0 || !std::isfinite(al))
        throw std::domain_error("coeff_cond_form: eigenvalue must be finite and nonzero");
    const KroneckerShape& shape = form.shape;
    const bool use_h = route == VectorRoute::H || (route == VectorRoute::Auto && al <= 1.0);
    CVector z, w;
    if (use_h) {
        z = H_block(t.lambda, shape.eps, shape.eta, form.M) * t.x;
        w = H_block(std::conj(t.lambda), shape.eta, shape.eps, form.M.adjoint()) * t.y;
    } else {
        z = G_block(t.lambda, shape.eps, shape.eta, form.M) * t.x;
        w = G_block(std::conj(t.lambda), shape.eta, shape.eps, form.M.adjoint()) * t.y;
    }
    const CMatrix dl = evaluate_derivative(form.assembled, t.lambda);
    const Complex inner = (w.adjoint() * dl * z)(0);
    if (std::abs(inner) < 1e-300)
        throw std::domain_error("coeff_cond_form: |w^* L'(lambda) z| vanishes");
    return evaluated_norm(norms.coeff_norms, al) * z.norm() * w.norm() / (al * std::abs(inner));
}

inline double coeff_cond_form(const BlockKroneckerForm& form, const MatrixPolynomial& p,
                              const Eigentriple& t, VectorRoute route = VectorRoute::Auto) {
    (void)p;
    return coeff_cond_form(form, form_norms(form), t, route);
}

// ---------------------------------------------------------------------------
// Ratio bounds.
// ---------------------------------------------------------------------------

struct RatioBounds {
    double coeff = 0.0;
    double norm = 0.0;
};

/// The generic ratio bound as a function of the body norms: usable for any
/// block Kronecker ell-ification.
inline double general_bound_value(double max_m, double sum_m_sq, int ell, int eps, int eta,
                                  double denominator) {
    if (denominator <= 0.0) return std::numeric_limits<double>::infinity();
    const double front = 2.0 * std::max(1.0, max_m) / denominator;
    const double dims = (ell + 1.0) * std::sqrt((eps + 1.0) * (eta + 1.0));
    const double left = std::sqrt(1.0 + double(eps) * eps * (ell + 1.0) * sum_m_sq);
    const double right = std::sqrt(1.0 + double(eta) * eta * (ell + 1.0) * sum_m_sq);
    return front * dims * left * right;
}

/// Ratio bounds for an arbitrary block Kronecker ell-ification: coeff ratio
/// against min{||A_0||, ||A_d||}, norm ratio against ||[A_0 ... A_d]||.
/// Lambda-independent by construction.
inline RatioBounds bound_general(const BlockKroneckerForm& form, const MatrixPolynomial& p) {
    const FormNorms norms = form_norms(form);
    const CoeffNormProfile prof = norm_profile(p);
    const KroneckerShape& s = form.shape;
    RatioBounds b;
    b.coeff = general_bound_value(norms.max_m_norm, norms.sum_m_sq, s.ell, s.eps, s.eta, prof.min_edge);
    b.norm = general_bound_value(norms.max_m_norm, norms.sum_m_sq, s.ell, s.eps, s.eta, prof.stacked);
    return b;
}

/// Companion-form ratio bounds, depending only on the coefficient norms of P
/// and the partition: 16 d^3 (eps+1)^{3/2} (eta+1)^{3/2} max{1, max ||A_i||^3}
/// over min{||A_0||, ||A_d||} (coeff) resp. max ||A_i|| (norm).
inline RatioBounds bound_companion(const BlockKroneckerForm& form, const MatrixPolynomial& p) {
    if (!is_companion(form, p))
        throw std::domain_error("bound_companion: form is not a companion form (use bound_general)");
    const CoeffNormProfile prof = norm_profile(p);
    const KroneckerShape& s = form.shape;
    const double d = p.grade;
    const double factor = 16.0 * d * d * d * std::pow((s.eps + 1.0) * (s.eta + 1.0), 1.5);
    const double cubed = std::max(1.0, prof.max_norm * prof.max_norm * prof.max_norm);
    RatioBounds b;
    b.coeff = prof.min_edge > 0.0 ? factor * cubed / prof.min_edge
                                  : std::numeric_limits<double>::infinity();
    b.norm = factor * cubed / prof.max_norm;
    return b;
}

/// Two-sided bracket for coeff_cond_R / coeff_cond_L between two companion
/// forms of the same polynomial: the lower end is governed by the shape of
/// the denominator form L, the upper end by the shape of the numerator form R.
inline std::pair<double, double> bound_cross(const BlockKroneckerForm& form_r,
                                             const BlockKroneckerForm& form_l,
                                             const MatrixPolynomial& p) {
    if (!is_companion(form_r, p) || !is_companion(form_l, p))
        throw std::domain_error("bound_cross: both forms must be companion forms");
    const CoeffNormProfile prof = norm_profile(p);
    const double d = p.grade;
    const double cubed = std::max(1.0, prof.max_norm * prof.max_norm * prof.max_norm);
    const double lo_factor =
        16.0 * d * d * d * std::pow((form_l.shape.eps + 1.0) * (form_l.shape.eta + 1.0), 1.5);
    const double hi_factor =
        16.0 * d * d * d * std::pow((form_r.shape.eps + 1.0) * (form_r.shape.eta + 1.0), 1.5);
    return {1.0 / (lo_factor * cubed), hi_factor * cubed};
}

/// rho(P) = max_i ||A_i||^3 / min{||A_0||, ||A_d||}: the factor by which a
/// companion form can worsen coefficientwise conditioning.
inline double rho(const MatrixPolynomial& p) {
    const CoeffNormProfile prof = norm_profile(p);
    if (prof.min_edge == 0.0) return std::numeric_limits<double>::infinity();
    return prof.max_norm * prof.max_norm * prof.max_norm / prof.min_edge;
}

/// Lower bound max_i ||M_i|| >= max_i ||A_i|| / (2 max{eps+1, eta+1}) that any
/// solution body must satisfy.
inline double m_norm_floor(const MatrixPolynomial& p, int eps, int eta) {
    if (eps < 0 || eta < 0) throw std::invalid_argument("m_norm_floor: negative shape");
    return norm_profile(p).max_norm / (2.0 * std::max(eps + 1, eta + 1));
}

// ---------------------------------------------------------------------------
// Per-eigenvalue reports.
// ---------------------------------------------------------------------------

struct ConditionReport {
    Complex lambda;
    double coeff_cond_P = 0.0;
    double norm_cond_P = 0.0;
    double coeff_cond_form = 0.0;
    double ratio_coeff = 0.0; // coeff_cond_form / coeff_cond_P
    double ratio_norm = 0.0;  // coeff_cond_form / norm_cond_P
    double bound_coeff = 0.0; // lambda-independent general bounds
    double bound_norm = 0.0;
    double rho = 0.0;
};

/// Reports for every admissible eigentriple: finite, nonzero, converged, and
/// simple (margin >= min_margin). Near-multiple eigenvalues are skipped
/// because the underlying formulas assume simplicity.
inline std::vector<ConditionReport> condition_reports(const MatrixPolynomial& p,
                                                      const BlockKroneckerForm& form,
                                                      const std::vector<Eigentriple>& triples,
                                                      double min_margin = 1e-8) {
    const FormNorms norms = form_norms(form);
    const RatioBounds bounds = bound_general(form, p);
    const double rho_p = rho(p);
    const CoeffNormProfile prof = norm_profile(p);
    const std::vector<double> norm_weights(prof.per_coeff.size(), prof.stacked);
    std::vector<ConditionReport> out;
    for (const Eigentriple& t : triples) {
        if (!t.converged || std::abs(t.lambda) == 0.0 || !std::isfinite(std::abs(t.lambda)))
            continue;
        if (t.simplicity_margin < min_margin) continue;
        ConditionReport r;
        r.lambda = t.lambda;
        r.coeff_cond_P = kappa(p, t, prof.per_coeff);
        r.norm_cond_P = kappa(p, t, norm_weights);
        r.coeff_cond_form = coeff_cond_form(form, norms, t);
        r.ratio_coeff = r.coeff_cond_form / r.coeff_cond_P;
        r.ratio_norm = r.coeff_cond_form / r.norm_cond_P;
        r.bound_coeff = bounds.coeff;
        r.bound_norm = bounds.norm;
        r.rho = rho_p;
        out.push_back(r);
    }
    return out;
}

} // namespace kroncond
