#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "kronecker.hpp"

namespace kroncond {

// Named block Kronecker companion forms. The classical Frobenius pencils
// place the A_i directly (first coefficient row [lambda A_d + A_{d-1},
// A_{d-2}, ..., A_0]); the Frobenius-like family instead distributes the
// grade-ell slices B_j, which is exactly the standard body M_{eps,eta}.
// The exp1_* / exp2_* presets reproduce specific published layouts, signs
// included, and are validated against the target polynomial on construction.

namespace detail {

inline void put_block(PolyMat& m, int t, int br, int bc, const CMatrix& a, double sign = 1.0) {
    const Eigen::Index n = a.rows();
    m.coeffs[static_cast<std::size_t>(t)].block(br * n, bc * n, n, n) = sign * a;
}

} // namespace detail

/// First Frobenius companion pencil: [lambda A_d + A_{d-1}, A_{d-2}, ..., A_0]
/// across the first block row over the (eps, eta) = (d-1, 0) ladder.
inline BlockKroneckerForm frobenius1(const MatrixPolynomial& p) {
    require_nondegenerate(p);
    const int d = p.grade, n = p.n;
    if (d < 1) throw std::invalid_argument("frobenius1: needs grade >= 1");
    const KroneckerShape shape{1, d - 1, 0, n};
    PolyMat m = PolyMat::zero(n, static_cast<Eigen::Index>(d) * n, 1);
    detail::put_block(m, 1, 0, 0, p.coeffs[static_cast<std::size_t>(d)]);
    for (int j = 0; j < d; ++j)
        detail::put_block(m, 0, 0, j, p.coeffs[static_cast<std::size_t>(d - 1 - j)]);
    return assemble(m, shape, &p, "frobenius1");
}

/// Second Frobenius companion pencil: the transposed-ladder variant with the
/// coefficients down the first block column, (eps, eta) = (0, d-1).
inline BlockKroneckerForm frobenius2(const MatrixPolynomial& p) {
    require_nondegenerate(p);
    const int d = p.grade, n = p.n;
    if (d < 1) throw std::invalid_argument("frobenius2: needs grade >= 1");
    const KroneckerShape shape{1, 0, d - 1, n};
    PolyMat m = PolyMat::zero(static_cast<Eigen::Index>(d) * n, n, 1);
    detail::put_block(m, 1, 0, 0, p.coeffs[static_cast<std::size_t>(d)]);
    for (int i = 0; i < d; ++i)
        detail::put_block(m, 0, i, 0, p.coeffs[static_cast<std::size_t>(d - 1 - i)]);
    return assemble(m, shape, &p, "frobenius2");
}

/// Frobenius-like companion ell-ification C_1^ell: standard body at
/// (eps, eta) = (k-1, 0).
inline BlockKroneckerForm frobenius_like1(const MatrixPolynomial& p, int ell) {
    if (ell < 1 || p.grade % ell != 0)
        throw std::invalid_argument("frobenius_like1: ell must divide the grade");
    const int k = p.grade / ell;
    const KroneckerShape shape{ell, k - 1, 0, p.n};
    return assemble(standard_M(p, ell, k - 1, 0), shape, &p,
                    "frobenius_like1(" + std::to_string(ell) + ")");
}

/// Frobenius-like companion ell-ification C_2^ell: standard body at
/// (eps, eta) = (0, k-1).
inline BlockKroneckerForm frobenius_like2(const MatrixPolynomial& p, int ell) {
    if (ell < 1 || p.grade % ell != 0)
        throw std::invalid_argument("frobenius_like2: ell must divide the grade");
    const int k = p.grade / ell;
    const KroneckerShape shape{ell, 0, k - 1, p.n};
    return assemble(standard_M(p, ell, 0, k - 1), shape, &p,
                    "frobenius_like2(" + std::to_string(ell) + ")");
}

/// Standard-body companion form for an arbitrary admissible (ell, eps, eta).
inline BlockKroneckerForm l_eps_eta(const MatrixPolynomial& p, int ell, int eps, int eta) {
    const KroneckerShape shape{ell, eps, eta, p.n};
    shape.validate_for(p);
    char label[48];
    std::snprintf(label, sizeof(label), "L_eps_eta(%d,%d,%d)", ell, eps, eta);
    return assemble(standard_M(p, ell, eps, eta), shape, &p, label);
}

/// Permuted Fiedler pencil for degree 3 (eps = eta = 1):
/// M = [[lambda A3 + A2, A1], [0, A0]].
inline BlockKroneckerForm exp1_L2(const MatrixPolynomial& p) {
    if (p.grade != 3) throw std::invalid_argument("exp1_L2: needs grade 3");
    const int n = p.n;
    const auto& a = p.coeffs;
    PolyMat m = PolyMat::zero(2 * n, 2 * n, 1);
    detail::put_block(m, 1, 0, 0, a[3]);
    detail::put_block(m, 0, 0, 0, a[2]);
    detail::put_block(m, 0, 0, 1, a[1]);
    detail::put_block(m, 0, 1, 1, a[0]);
    return assemble(m, {1, 1, 1, n}, &p, "exp1_L2");
}

/// Permuted generalized Fiedler pencil for degree 3:
/// M = [[lambda A3 + A2, 0], [0, lambda A1 + A0]].
inline BlockKroneckerForm exp1_L3(const MatrixPolynomial& p) {
    if (p.grade != 3) throw std::invalid_argument("exp1_L3: needs grade 3");
    const int n = p.n;
    const auto& a = p.coeffs;
    PolyMat m = PolyMat::zero(2 * n, 2 * n, 1);
    detail::put_block(m, 1, 0, 0, a[3]);
    detail::put_block(m, 0, 0, 0, a[2]);
    detail::put_block(m, 1, 1, 1, a[1]);
    detail::put_block(m, 0, 1, 1, a[0]);
    return assemble(m, {1, 1, 1, n}, &p, "exp1_L3");
}

/// Degree-3 block Kronecker pencil with sign-mixed body:
/// M = [[lambda A3 - A2, lambda A2 + A1], [lambda A2 + A1, -lambda A1 + A0]].
inline BlockKroneckerForm exp1_L4(const MatrixPolynomial& p) {
    if (p.grade != 3) throw std::invalid_argument("exp1_L4: needs grade 3");
    const int n = p.n;
    const auto& a = p.coeffs;
    PolyMat m = PolyMat::zero(2 * n, 2 * n, 1);
    detail::put_block(m, 1, 0, 0, a[3]);
    detail::put_block(m, 0, 0, 0, a[2], -1.0);
    detail::put_block(m, 1, 0, 1, a[2]);
    detail::put_block(m, 0, 0, 1, a[1]);
    detail::put_block(m, 1, 1, 0, a[2]);
    detail::put_block(m, 0, 1, 0, a[1]);
    detail::put_block(m, 1, 1, 1, a[1], -1.0);
    detail::put_block(m, 0, 1, 1, a[0]);
    return assemble(m, {1, 1, 1, n}, &p, "exp1_L4");
}

/// Degree-6 companion linearization with the (eps, eta) = (2, 3) ladder.
inline BlockKroneckerForm exp2_F(const MatrixPolynomial& p) {
    if (p.grade != 6) throw std::invalid_argument("exp2_F: needs grade 6");
    const KroneckerShape shape{1, 2, 3, p.n};
    return assemble(standard_M(p, 1, 2, 3), shape, &p, "exp2_F");
}

/// Quadratification preset. For grade 4 this is the Frobenius-like
/// quadratification; for grade 6 it is the 3x3-block layout
/// [[l^2 A6 + l A5, A2], [l^2 A4 + l A3, l A1 + A0]] over the (1, 1) ladder.
inline BlockKroneckerForm exp2_Q(const MatrixPolynomial& p) {
    const int n = p.n;
    const auto& a = p.coeffs;
    if (p.grade == 4) {
        const KroneckerShape shape{2, 1, 0, n};
        return assemble(standard_M(p, 2, 1, 0), shape, &p, "exp2_Q");
    }
    if (p.grade == 6) {
        PolyMat m = PolyMat::zero(2 * n, 2 * n, 2);
        detail::put_block(m, 2, 0, 0, a[6]);
        detail::put_block(m, 1, 0, 0, a[5]);
        detail::put_block(m, 0, 0, 1, a[2]);
        detail::put_block(m, 2, 1, 0, a[4]);
        detail::put_block(m, 1, 1, 0, a[3]);
        detail::put_block(m, 1, 1, 1, a[1]);
        detail::put_block(m, 0, 1, 1, a[0]);
        return assemble(m, {2, 1, 1, n}, &p, "exp2_Q");
    }
    throw std::invalid_argument("exp2_Q: needs grade 4 or 6");
}

/// Cubification of a degree-6 polynomial: the 2x2-block Frobenius-like form.
inline BlockKroneckerForm exp2_C(const MatrixPolynomial& p) {
    if (p.grade != 6) throw std::invalid_argument("exp2_C: needs grade 6");
    const KroneckerShape shape{3, 1, 0, p.n};
    return assemble(standard_M(p, 3, 1, 0), shape, &p, "exp2_C");
}

/// Builds a preset by name. Parameterized names take a parenthesized integer
/// list: frobenius_like1(2), L_eps_eta(2,1,1).
inline BlockKroneckerForm preset(const MatrixPolynomial& p, const std::string& name) {
    std::string base = name;
    std::vector<int> args;
    const auto open = name.find('(');
    if (open != std::string::npos) {
        if (name.back() != ')') throw std::invalid_argument("preset: unbalanced parentheses in " + name);
        base = name.substr(0, open);
        std::string inside = name.substr(open + 1, name.size() - open - 2);
        std::size_t pos = 0;
        while (pos < inside.size()) {
            std::size_t next = inside.find(',', pos);
            if (next == std::string::npos) next = inside.size();
            args.push_back(std::stoi(inside.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    if (base == "frobenius1") return frobenius1(p);
    if (base == "frobenius2") return frobenius2(p);
    if (base == "frobenius_like1" && args.size() == 1) return frobenius_like1(p, args[0]);
    if (base == "frobenius_like2" && args.size() == 1) return frobenius_like2(p, args[0]);
    if (base == "L_eps_eta" && args.size() == 3) return l_eps_eta(p, args[0], args[1], args[2]);
    if (base == "exp1_L2") return exp1_L2(p);
    if (base == "exp1_L3") return exp1_L3(p);
    if (base == "exp1_L4") return exp1_L4(p);
    if (base == "exp2_F") return exp2_F(p);
    if (base == "exp2_Q") return exp2_Q(p);
    if (base == "exp2_C") return exp2_C(p);
    throw std::invalid_argument("unknown preset: " + name);
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "frobenius1", "frobenius2", "frobenius_like1(ell)", "frobenius_like2(ell)",
        "L_eps_eta(ell,eps,eta)", "exp1_L2", "exp1_L3", "exp1_L4",
        "exp2_F", "exp2_Q", "exp2_C"};
    return names;
}

// ---------------------------------------------------------------------------
// Companion census
// ---------------------------------------------------------------------------

enum class BlockKind { Zero, Identity, Coefficient, Other };

struct BlockCensusEntry {
    int t;  // coefficient index of the form
    int br; // block row
    int bc; // block column
    BlockKind kind;
    int coeff_index; // which A_i, for Coefficient entries
    int sign;        // +1 or -1 (identity and coefficient entries)
};

struct CompanionCensus {
    bool companion = true;
    int other_count = 0;
    std::vector<BlockCensusEntry> entries; // nonzero blocks only
};

/// Classifies every n x n block of every coefficient of the assembled form as
/// 0, +/-I, or +/-A_i. The sign relaxation is deliberate: the published
/// companion layouts contain -I ladder blocks and bodies such as
/// lambda A_3 - A_2, which the strict block alphabet would reject. Blocks
/// equal to none of these are reported as Other and disqualify the form.
inline CompanionCensus companion_census(const BlockKroneckerForm& form, const MatrixPolynomial& p) {
    const int n = p.n;
    const int blocks = form.shape.k();
    const CMatrix id = CMatrix::Identity(n, n);
    const double tol = 1e-14 * std::max(1.0, norm_profile(p).max_norm);
    CompanionCensus census;
    for (int t = 0; t <= form.shape.ell; ++t) {
        const CMatrix& coeff = form.assembled.coeffs[static_cast<std::size_t>(t)];
        for (int br = 0; br < blocks; ++br)
            for (int bc = 0; bc < blocks; ++bc) {
                const CMatrix b = coeff.block(static_cast<Eigen::Index>(br) * n,
                                              static_cast<Eigen::Index>(bc) * n, n, n);
                if (b.cwiseAbs().maxCoeff() <= tol) continue;
                BlockCensusEntry entry{t, br, bc, BlockKind::Other, -1, +1};
                if ((b - id).cwiseAbs().maxCoeff() <= tol) {
                    entry.kind = BlockKind::Identity;
                } else if ((b + id).cwiseAbs().maxCoeff() <= tol) {
                    entry.kind = BlockKind::Identity;
                    entry.sign = -1;
                } else {
                    for (int i = 0; i <= p.grade && entry.kind == BlockKind::Other; ++i) {
                        const CMatrix& a = p.coeffs[static_cast<std::size_t>(i)];
                        if ((b - a).cwiseAbs().maxCoeff() <= tol) {
                            entry.kind = BlockKind::Coefficient;
                            entry.coeff_index = i;
                        } else if ((b + a).cwiseAbs().maxCoeff() <= tol) {
                            entry.kind = BlockKind::Coefficient;
                            entry.coeff_index = i;
                            entry.sign = -1;
                        }
                    }
                }
                if (entry.kind == BlockKind::Other) {
                    census.companion = false;
                    ++census.other_count;
                }
                census.entries.push_back(entry);
            }
    }
    return census;
}

inline bool is_companion(const BlockKroneckerForm& form, const MatrixPolynomial& p) {
    return companion_census(form, p).companion;
}

} // namespace kroncond
