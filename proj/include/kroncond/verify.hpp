#pragma once

#include <optional>
#include <sstream>

#include "conditioning.hpp"

namespace kroncond {

/// Configuration shared by the verification suites. Every trial derives its
/// own seed from (seed, trial index), so a failure logged with a trial seed
/// reproduces in isolation via only_trial_seed.
struct SuiteConfig {
    std::uint64_t seed = 1;
    int trials = 200;
    int n_max = 6;
    int d_max = 8;
    int ell_max = 3;
    int lambda_samples = 20;
    double tol_factorization = 1e-12;
    double tol_eigvec = 1e-10;
    double tol_identity = 1e-8; // derivative-identity relative agreement
    double slack = 1.05;        // on the strict ratio inequalities
    double min_margin = 1e-8;   // simplicity threshold
    std::optional<std::uint64_t> only_trial_seed;

    void validate() const {
        if (trials < 1 || n_max < 1 || d_max < 1 || ell_max < 1 || lambda_samples < 1)
            throw std::invalid_argument("suite config: empty ranges");
    }
};

struct CheckResult {
    std::string name;
    int pass = 0;
    int fail = 0;
    double worst = 0.0; // worst residual / tolerance utilization observed
    std::vector<std::uint64_t> offending_seeds;

    CheckResult() = default;
    explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

    void record(bool ok, double utilization, std::uint64_t trial_seed) {
        (ok ? pass : fail)++;
        worst = std::max(worst, utilization);
        if (!ok && offending_seeds.size() < 32) offending_seeds.push_back(trial_seed);
    }
};

struct SuiteReport {
    std::vector<CheckResult> checks;

    bool ok() const {
        for (const CheckResult& c : checks)
            if (c.fail > 0) return false;
        return true;
    }
    std::string to_text() const {
        std::ostringstream out;
        for (const CheckResult& c : checks) {
            out << (c.fail == 0 ? "PASS " : "FAIL ") << c.name << ": " << c.pass << " passed, "
                << c.fail << " failed, worst utilization " << c.worst;
            if (!c.offending_seeds.empty()) {
                out << ", offending seeds:";
                for (std::uint64_t s : c.offending_seeds) out << ' ' << s;
            }
            out << '\n';
        }
        return out.str();
    }
};

namespace detail {

struct TrialShape {
    int n, d, ell, eps, eta;
};

inline TrialShape draw_trial_shape(Prng& rng, const SuiteConfig& cfg) {
    TrialShape s;
    s.n = rng.next_int(1, cfg.n_max);
    s.d = rng.next_int(1, cfg.d_max);
    std::vector<int> divisors;
    for (int ell = 1; ell <= std::min(s.d, cfg.ell_max); ++ell)
        if (s.d % ell == 0) divisors.push_back(ell);
    s.ell = divisors[static_cast<std::size_t>(rng.next_int(0, static_cast<int>(divisors.size()) - 1))];
    const int k = s.d / s.ell;
    s.eps = rng.next_int(0, k - 1);
    s.eta = k - 1 - s.eps;
    return s;
}

inline GeneralMParams draw_params(Prng& rng, int ell, int eps, int eta, int n) {
    GeneralMParams g = GeneralMParams::zero(ell, eps, eta, n);
    for (Eigen::Index r = 0; r < g.B.rows(); ++r)
        for (Eigen::Index c = 0; c < g.B.cols(); ++c) g.B(r, c) = rng.next_complex_gaussian();
    for (Eigen::Index r = 0; r < g.C.rows(); ++r)
        for (Eigen::Index c = 0; c < g.C.cols(); ++c) g.C(r, c) = rng.next_complex_gaussian();
    if (g.D)
        for (CMatrix& coeff : g.D->coeffs)
            for (Eigen::Index r = 0; r < coeff.rows(); ++r)
                for (Eigen::Index c = 0; c < coeff.cols(); ++c) coeff(r, c) = rng.next_complex_gaussian();
    return g;
}

/// Sample points alternating inside and outside the unit disk.
inline Complex draw_lambda(Prng& rng, bool inside) {
    const double radius = inside ? 0.15 + 0.85 * rng.next_uniform() : 1.0 + 2.0 * rng.next_uniform();
    const double angle = 2.0 * std::numbers::pi * rng.next_uniform();
    return radius * Complex(std::cos(angle), std::sin(angle));
}

inline std::uint64_t trial_seed(const SuiteConfig& cfg, int trial) {
    return cfg.only_trial_seed ? *cfg.only_trial_seed : mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
}

inline int trial_count(const SuiteConfig& cfg) { return cfg.only_trial_seed ? 1 : cfg.trials; }

/// Presets exercised by the bound checks for a given grade, all companion.
inline std::vector<std::string> companion_preset_names(int d, int ell_max) {
    std::vector<std::string> names = {"frobenius1", "frobenius2"};
    for (int ell = 2; ell <= std::min(d, ell_max); ++ell)
        if (d % ell == 0) {
            names.push_back("frobenius_like1(" + std::to_string(ell) + ")");
            names.push_back("frobenius_like2(" + std::to_string(ell) + ")");
        }
    if (d == 3) {
        names.insert(names.end(), {"exp1_L2", "exp1_L3", "exp1_L4"});
    }
    if (d == 6) {
        names.insert(names.end(), {"exp2_F", "exp2_Q", "exp2_C"});
    }
    if (d == 4) names.push_back("exp2_Q");
    return names;
}

} // namespace detail

/// Right- and left-sided factorization identities for randomly drawn
/// (P, shape, body) triples at sample points on both sides of the unit circle.
inline SuiteReport check_factorizations(const SuiteConfig& cfg) {
    cfg.validate();
    CheckResult check("factorizations");
    for (int trial = 0; trial < detail::trial_count(cfg); ++trial) {
        const std::uint64_t seed = detail::trial_seed(cfg, trial);
        Prng rng(seed);
        const detail::TrialShape s = detail::draw_trial_shape(rng, cfg);
        const MatrixPolynomial p = random_poly(s.n, s.d, rng.next_u64());
        const bool use_general = rng.next_u64() & 1;
        const PolyMat m = use_general
                              ? general_M(p, s.ell, s.eps, s.eta,
                                          detail::draw_params(rng, s.ell, s.eps, s.eta, s.n))
                              : standard_M(p, s.ell, s.eps, s.eta);
        const KroneckerShape shape{s.ell, s.eps, s.eta, s.n};
        const BlockKroneckerForm form = assemble(m, shape, &p);
        const PolyMat mt = m.transpose();
        const int k = shape.k();
        const int n = s.n;

        bool trial_ok = true;
        double trial_worst = 0.0;
        for (int sample = 0; sample < cfg.lambda_samples; ++sample) {
            const Complex lambda = detail::draw_lambda(rng, sample % 2 == 0);
            const CMatrix l_eval = evaluate(form.assembled, lambda);
            const CMatrix p_eval = evaluate(p, lambda);
            const double p_norm = spectral_norm(p_eval);
            const double l_norm = spectral_norm(l_eval);

            const auto embed_right = [&](int block) {
                CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(k) * n, n);
                e.block(static_cast<Eigen::Index>(block) * n, 0, n, n) = p_eval;
                return e;
            };
            const auto embed_left = [&](int block) {
                CMatrix e = CMatrix::Zero(n, static_cast<Eigen::Index>(k) * n);
                e.block(0, static_cast<Eigen::Index>(block) * n, n, n) = p_eval;
                return e;
            };

            const CMatrix h_r = H_block(lambda, s.eps, s.eta, m);
            const CMatrix g_r = G_block(lambda, s.eps, s.eta, m);
            const CMatrix h_l = H_block(lambda, s.eta, s.eps, mt);
            const CMatrix g_l = G_block(lambda, s.eta, s.eps, mt);

            const double residuals[4] = {
                (l_eval * h_r - embed_right(s.eta)).norm(),
                (l_eval * g_r - embed_right(0)).norm(),
                (h_l.transpose() * l_eval - embed_left(s.eps)).norm(),
                (g_l.transpose() * l_eval - embed_left(0)).norm(),
            };
            const double scales[4] = {
                l_norm * spectral_norm(h_r) + p_norm,
                l_norm * spectral_norm(g_r) + p_norm,
                l_norm * spectral_norm(h_l) + p_norm,
                l_norm * spectral_norm(g_l) + p_norm,
            };
            for (int i = 0; i < 4; ++i) {
                const double util = residuals[i] / (cfg.tol_factorization * scales[i]);
                trial_worst = std::max(trial_worst, util);
                if (util > 1.0) trial_ok = false;
            }
        }
        check.record(trial_ok, trial_worst, seed);
    }
    return SuiteReport{{check}};
}

/// Eigenvector formulas and the derivative identities: formula-built z and w
/// annihilate the form, and |w^* L'(lambda) z| reproduces |y^* P'(lambda) x|
/// (H route) resp. |lambda|^{d-ell} |y^* P'(lambda) x| (G route).
inline SuiteReport check_eigvec_formulas(const SuiteConfig& cfg) {
    cfg.validate();
    CheckResult vectors("eigvec_formulas");
    CheckResult identity("derivative_identity");
    for (int trial = 0; trial < detail::trial_count(cfg); ++trial) {
        const std::uint64_t seed = detail::trial_seed(cfg, trial);
        Prng rng(seed);
        const detail::TrialShape s = detail::draw_trial_shape(rng, cfg);
        const MatrixPolynomial p = random_poly(s.n, s.d, rng.next_u64());
        const bool use_general = rng.next_u64() & 1;
        const PolyMat m = use_general
                              ? general_M(p, s.ell, s.eps, s.eta,
                                          detail::draw_params(rng, s.ell, s.eps, s.eta, s.n))
                              : standard_M(p, s.ell, s.eps, s.eta);
        const KroneckerShape shape{s.ell, s.eps, s.eta, s.n};
        const BlockKroneckerForm form = assemble(m, shape, &p);
        const PolyMat madj = m.adjoint();
        const FormNorms norms = form_norms(form);
        const CoeffNormProfile p_prof = norm_profile(p);

        bool vec_ok = true, id_ok = true;
        double vec_worst = 0.0, id_worst = 0.0;
        for (const Eigentriple& t : reference_eigentriples(p)) {
            if (!t.converged || t.simplicity_margin < cfg.min_margin) continue;
            const Complex lambda = t.lambda;
            if (std::abs(lambda) == 0.0) continue; // G route needs nonzero; skip entirely
            const CMatrix l_eval = evaluate(form.assembled, lambda);
            const CMatrix l_deriv = evaluate_derivative(form.assembled, lambda);
            const double l_scale = evaluated_norm(norms.coeff_norms, std::abs(lambda));
            const double p_scale = evaluated_norm(p_prof.per_coeff, std::abs(lambda));
            const Complex ref_inner = (t.y.adjoint() * evaluate_derivative(p, lambda) * t.x)(0);

            const CMatrix hx = H_block(lambda, s.eps, s.eta, m);
            const CMatrix gx = G_block(lambda, s.eps, s.eta, m);
            const CMatrix hy = H_block(std::conj(lambda), s.eta, s.eps, madj);
            const CMatrix gy = G_block(std::conj(lambda), s.eta, s.eps, madj);
            const CVector z_h = hx * t.x;
            const CVector z_g = gx * t.x;
            const CVector w_h = hy * t.y;
            const CVector w_g = gy * t.y;

            // residual scale: evaluated coefficient norms of the form times
            // the one-sided factor norm, the same convention as the
            // factorization checks (the off-route variant of z or w is a
            // heavily cancelling product, so its own norm is not an
            // attainable scale)
            for (const auto& [factor, z] : {std::pair<const CMatrix*, const CVector*>{&hx, &z_h},
                                            {&gx, &z_g}}) {
                const double scale = (l_scale * spectral_norm(*factor) + p_scale) * t.x.norm();
                const double util = (l_eval * *z).norm() / (cfg.tol_eigvec * scale);
                vec_worst = std::max(vec_worst, util);
                if (util > 1.0) vec_ok = false;
            }
            for (const auto& [factor, w] : {std::pair<const CMatrix*, const CVector*>{&hy, &w_h},
                                            {&gy, &w_g}}) {
                const double scale = (l_scale * spectral_norm(*factor) + p_scale) * t.y.norm();
                const double util = (w->adjoint() * l_eval).norm() / (cfg.tol_eigvec * scale);
                vec_worst = std::max(vec_worst, util);
                if (util > 1.0) vec_ok = false;
            }

            const double inner_h = std::abs((w_h.adjoint() * l_deriv * z_h)(0));
            const double inner_g = std::abs((w_g.adjoint() * l_deriv * z_g)(0));
            const double target_h = std::abs(ref_inner);
            const double target_g = std::pow(std::abs(lambda), s.d - s.ell) * std::abs(ref_inner);
            const double util_h = std::abs(inner_h - target_h) / (cfg.tol_identity * target_h);
            const double util_g = std::abs(inner_g - target_g) / (cfg.tol_identity * target_g);
            id_worst = std::max({id_worst, util_h, util_g});
            if (util_h > 1.0 || util_g > 1.0) id_ok = false;
        }
        vectors.record(vec_ok, vec_worst, seed);
        identity.record(id_ok, id_worst, seed);
    }
    return SuiteReport{{vectors, identity}};
}

/// Norm bounds for the structured blocks on both sides of the unit circle.
inline SuiteReport check_lemma_norms(const SuiteConfig& cfg) {
    cfg.validate();
    CheckResult check("lemma_norms");
    for (int trial = 0; trial < detail::trial_count(cfg); ++trial) {
        const std::uint64_t seed = detail::trial_seed(cfg, trial);
        Prng rng(seed);
        const int k = rng.next_int(0, 8);
        const int ell = rng.next_int(1, std::max(1, cfg.ell_max));
        const int n = rng.next_int(1, std::min(3, cfg.n_max));
        bool ok = true;
        double worst = 0.0;
        for (int sample = 0; sample < cfg.lambda_samples; ++sample) {
            const Complex lambda = detail::draw_lambda(rng, sample % 2 == 0);
            const double al = std::abs(lambda);
            const double lam_norm = spectral_norm(lambda_block(k, ell, n, lambda));
            const double r_norm = spectral_norm(R_block(k, ell, n, lambda));
            const double s_norm = spectral_norm(S_block(k, ell, n, lambda));
            double utils[3] = {0.0, 0.0, 0.0};
            if (al <= 1.0) {
                utils[0] = lam_norm / std::sqrt(k + 1.0);
                if (k >= 1) {
                    utils[1] = r_norm / k;
                    utils[2] = s_norm / k;
                }
            } else {
                utils[0] = std::pow(al, -k * ell) * lam_norm / std::sqrt(k + 1.0);
                if (k >= 1) {
                    utils[1] = std::pow(al, -(k - 1) * ell) * r_norm / k;
                    utils[2] = std::pow(al, -(k - 1) * ell) * s_norm / k;
                }
            }
            for (double u : utils) {
                worst = std::max(worst, u);
                if (u > 1.0 + 1e-12) ok = false;
            }
        }
        check.record(ok, worst, seed);
    }
    return SuiteReport{{check}};
}

/// Condition-ratio bounds: the general bound for every generated form, the
/// companion bounds and the cross-form bracket for the companion presets, the
/// body-norm floor for every generated body, and the pure combinatorial
/// constant for edge-normalized polynomials.
inline SuiteReport check_bounds(const SuiteConfig& cfg) {
    cfg.validate();
    CheckResult general("bound_general");
    CheckResult companion("bound_companion");
    CheckResult cross("bound_cross");
    CheckResult floor("m_norm_floor");
    CheckResult scaled_const("scaled_companion_constant");
    for (int trial = 0; trial < detail::trial_count(cfg); ++trial) {
        const std::uint64_t seed = detail::trial_seed(cfg, trial);
        Prng rng(seed);
        const detail::TrialShape s = detail::draw_trial_shape(rng, cfg);
        // every third trial normalizes all coefficients to unit spectral norm,
        // the regime where the combinatorial constant alone bounds the ratios
        const bool edge_normalized = trial % 3 == 2;
        MatrixPolynomial p = random_poly(s.n, s.d, rng.next_u64());
        if (edge_normalized) {
            for (CMatrix& a : p.coeffs) a /= spectral_norm(a);
        }
        const std::vector<Eigentriple> refs = reference_eigentriples(p);

        std::vector<BlockKroneckerForm> companion_forms;
        for (const std::string& name : detail::companion_preset_names(s.d, cfg.ell_max))
            companion_forms.push_back(preset(p, name));
        companion_forms.push_back(
            assemble(standard_M(p, s.ell, s.eps, s.eta), {s.ell, s.eps, s.eta, s.n}, &p, "standard"));
        const BlockKroneckerForm general_form =
            assemble(general_M(p, s.ell, s.eps, s.eta, detail::draw_params(rng, s.ell, s.eps, s.eta, s.n)),
                     {s.ell, s.eps, s.eta, s.n}, &p, "general");

        const CoeffNormProfile prof = norm_profile(p);
        const std::vector<double> norm_weights(prof.per_coeff.size(), prof.stacked);

        bool gen_ok = true, comp_ok = true, cross_ok = true, floor_ok = true, const_ok = true;
        double gen_worst = 0.0, comp_worst = 0.0, cross_worst = 0.0, floor_worst = 0.0,
               const_worst = 0.0;

        std::vector<FormNorms> comp_norms;
        comp_norms.reserve(companion_forms.size());
        for (const BlockKroneckerForm& f : companion_forms) comp_norms.push_back(form_norms(f));
        const FormNorms gen_norms = form_norms(general_form);

        // lambda-independent bounds, evaluated once per trial
        std::vector<RatioBounds> comp_general_bounds, comp_companion_bounds;
        for (const BlockKroneckerForm& f : companion_forms) {
            comp_general_bounds.push_back(bound_general(f, p));
            comp_companion_bounds.push_back(bound_companion(f, p));
        }
        const RatioBounds gen_bounds = bound_general(general_form, p);
        std::vector<std::vector<std::pair<double, double>>> cross_brackets(
            companion_forms.size(),
            std::vector<std::pair<double, double>>(companion_forms.size()));
        for (std::size_t fi = 0; fi < companion_forms.size(); ++fi)
            for (std::size_t fj = 0; fj < companion_forms.size(); ++fj)
                if (fi != fj)
                    cross_brackets[fi][fj] = bound_cross(companion_forms[fi], companion_forms[fj], p);

        // Prop-4.3-style floor for every generated body
        for (std::size_t fi = 0; fi <= companion_forms.size(); ++fi) {
            const BlockKroneckerForm& f = fi < companion_forms.size() ? companion_forms[fi] : general_form;
            const FormNorms& norms = fi < companion_forms.size() ? comp_norms[fi] : gen_norms;
            const double fl = m_norm_floor(p, f.shape.eps, f.shape.eta);
            const double util = fl > 0.0 ? fl / norms.max_m_norm : 0.0;
            floor_worst = std::max(floor_worst, util);
            if (norms.max_m_norm < fl * (1 - 1e-12)) floor_ok = false;
        }

        for (const Eigentriple& t : refs) {
            if (!t.converged || std::abs(t.lambda) == 0.0 || t.simplicity_margin < cfg.min_margin)
                continue;
            const double cc_p = kappa(p, t, prof.per_coeff);
            const double nc_p = kappa(p, t, norm_weights);

            std::vector<double> comp_conds(companion_forms.size());
            for (std::size_t fi = 0; fi < companion_forms.size(); ++fi) {
                const double cond = coeff_cond_form(companion_forms[fi], comp_norms[fi], t);
                comp_conds[fi] = cond;
                const RatioBounds& gb = comp_general_bounds[fi];
                const RatioBounds& cb = comp_companion_bounds[fi];
                const double u1 = (cond / cc_p) / (gb.coeff * cfg.slack);
                const double u2 = (cond / nc_p) / (gb.norm * cfg.slack);
                const double u3 = (cond / cc_p) / (cb.coeff * cfg.slack);
                const double u4 = (cond / nc_p) / (cb.norm * cfg.slack);
                gen_worst = std::max({gen_worst, u1, u2});
                comp_worst = std::max({comp_worst, u3, u4});
                if (u1 > 1.0 || u2 > 1.0) gen_ok = false;
                if (u3 > 1.0 || u4 > 1.0) comp_ok = false;
                if (edge_normalized) {
                    const KroneckerShape& fs = companion_forms[fi].shape;
                    const double c53 = 16.0 * std::pow(double(s.d), 3.0) *
                                       std::pow((fs.eps + 1.0) * (fs.eta + 1.0), 1.5);
                    const double u5 = (cond / cc_p) / (c53 * cfg.slack);
                    const_worst = std::max(const_worst, u5);
                    if (u5 > 1.0) const_ok = false;
                }
            }
            {
                const double cond = coeff_cond_form(general_form, gen_norms, t);
                const double u1 = (cond / cc_p) / (gen_bounds.coeff * cfg.slack);
                const double u2 = (cond / nc_p) / (gen_bounds.norm * cfg.slack);
                gen_worst = std::max({gen_worst, u1, u2});
                if (u1 > 1.0 || u2 > 1.0) gen_ok = false;
            }
            for (std::size_t fi = 0; fi < companion_forms.size(); ++fi)
                for (std::size_t fj = 0; fj < companion_forms.size(); ++fj) {
                    if (fi == fj) continue;
                    const auto [lo, hi] = cross_brackets[fi][fj];
                    const double ratio = comp_conds[fi] / comp_conds[fj];
                    const double u = std::max(ratio / (hi * cfg.slack), (lo / cfg.slack) / ratio);
                    cross_worst = std::max(cross_worst, u);
                    if (u > 1.0) cross_ok = false;
                }
        }
        general.record(gen_ok, gen_worst, seed);
        companion.record(comp_ok, comp_worst, seed);
        cross.record(cross_ok, cross_worst, seed);
        floor.record(floor_ok, floor_worst, seed);
        if (edge_normalized) scaled_const.record(const_ok, const_worst, seed);
    }
    return SuiteReport{{general, companion, cross, floor, scaled_const}};
}

inline SuiteReport run_all_checks(const SuiteConfig& cfg) {
    SuiteReport out;
    for (SuiteReport part : {check_factorizations(cfg), check_eigvec_formulas(cfg),
                             check_lemma_norms(cfg), check_bounds(cfg)})
        for (CheckResult& c : part.checks) out.checks.push_back(std::move(c));
    return out;
}

} // namespace kroncond
