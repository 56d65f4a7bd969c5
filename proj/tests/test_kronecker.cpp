#include <catch2/catch_amalgamated.hpp>

#include <kroncond/kronecker.hpp>
#include <kroncond/presets.hpp>

using namespace kroncond;

namespace {

MatrixPolynomial quad_minus_one() { return scalar_poly({-1.0, 0.0, 1.0}); }

GeneralMParams random_params(int ell, int eps, int eta, int n, Prng& rng) {
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

// Draws (d, ell, eps, eta) with d = ell*(eps+eta+1).
struct ShapeDraw {
    int n, d, ell, eps, eta;
};

ShapeDraw draw_shape(Prng& rng, int n_max, int d_max, int ell_max) {
    ShapeDraw s;
    s.n = rng.next_int(1, n_max);
    s.d = rng.next_int(1, d_max);
    std::vector<int> divisors;
    for (int ell = 1; ell <= std::min(s.d, ell_max); ++ell)
        if (s.d % ell == 0) divisors.push_back(ell);
    s.ell = divisors[static_cast<std::size_t>(rng.next_int(0, static_cast<int>(divisors.size()) - 1))];
    const int k = s.d / s.ell;
    s.eps = rng.next_int(0, k - 1);
    s.eta = k - 1 - s.eps;
    return s;
}

} // namespace

TEST_CASE("lambda_block") {
    CHECK((lambda_block(0, 1, 3, Complex(2.0, 1.0)) - CMatrix::Identity(3, 3)).norm() == 0.0);

    const CMatrix v = lambda_block(2, 1, 1, 1.0);
    REQUIRE(v.rows() == 3);
    CHECK(v(0, 0) == Complex(1.0));
    CHECK(v(1, 0) == Complex(1.0));
    CHECK(v(2, 0) == Complex(1.0));
    CHECK(v.norm() == Catch::Approx(std::sqrt(3.0)));

    const CMatrix w = lambda_block(1, 2, 1, 2.0);
    CHECK(w(0, 0) == Complex(4.0));
    CHECK(w(1, 0) == Complex(1.0));
}

TEST_CASE("L_block: literal rows") {
    const PolyMat l11 = L_block(1, 1, 1);
    CHECK(l11.coeffs[0](0, 0) == Complex(-1.0));
    CHECK(l11.coeffs[0](0, 1) == Complex(0.0));
    CHECK(l11.coeffs[1](0, 1) == Complex(1.0));

    const PolyMat l22 = L_block(2, 2, 1);
    const CMatrix at = l22.eval(Complex(0.0, 1.0)); // lambda = i, lambda^2 = -1
    CHECK(at(0, 0) == Complex(-1.0));
    CHECK(at(0, 1) == Complex(-1.0));
    CHECK(at(0, 2) == Complex(0.0));
}

TEST_CASE("L_block * lambda_block vanishes symbolically") {
    for (int ell = 1; ell <= 3; ++ell)
        for (int k = 0; k <= 6; ++k)
            for (int n : {1, 2}) {
                const PolyMat prod = pm_mul(L_block(k, ell, n), lambda_block_poly(k, ell, n));
                for (const CMatrix& c : prod.coeffs) REQUIRE(c.norm() == 0.0);
            }
}

TEST_CASE("R_block and S_block: k = 2 literal layout") {
    const Complex lambda(0.7, -0.3);
    const CMatrix r = R_block(2, 1, 1, lambda);
    REQUIRE(r.rows() == 2);
    REQUIRE(r.cols() == 3);
    CHECK(r(0, 0) == Complex(1.0));
    CHECK(r(0, 1) == Complex(0.0));
    CHECK(r(0, 2) == Complex(0.0));
    CHECK(r(1, 0) == lambda);
    CHECK(r(1, 1) == Complex(1.0));
    CHECK(r(1, 2) == Complex(0.0));

    const CMatrix s = S_block(2, 1, 1, lambda);
    CHECK(s(0, 0) == Complex(0.0));
    CHECK(s(0, 1) == lambda);
    CHECK(s(0, 2) == Complex(1.0));
    CHECK(s(1, 0) == Complex(0.0));
    CHECK(s(1, 1) == Complex(0.0));
    CHECK(s(1, 2) == lambda);
}

TEST_CASE("R/S empty at k = 0 and the degenerate H = G = Lambda case") {
    CHECK(R_block(0, 1, 2, 1.0).rows() == 0);
    CHECK(S_block(0, 1, 2, 1.0).rows() == 0);

    const MatrixPolynomial p = quad_minus_one();
    const PolyMat m = standard_M(p, 1, 1, 0);
    const CMatrix h = H_block(Complex(2.0), 1, 0, m);
    const CMatrix g = G_block(Complex(2.0), 1, 0, m);
    const CMatrix lam = lambda_block(1, 1, 1, 2.0);
    CHECK((h - lam).norm() == 0.0);
    CHECK((g - lam).norm() == 0.0);
}

TEST_CASE("H_block: scalar quad examples") {
    const MatrixPolynomial p = quad_minus_one();
    const PolyMat m = standard_M(p, 1, 1, 0); // [lambda, -1]
    const CMatrix h = H_block(1.0, 1, 0, m);
    REQUIRE(h.rows() == 2);
    CHECK(h(0, 0) == Complex(1.0));
    CHECK(h(1, 0) == Complex(1.0));

    // left-side variant H(conj(lambda); eta, eps, M^T) at lambda = 1
    const CMatrix hleft = H_block(1.0, 0, 1, m.transpose());
    REQUIRE(hleft.rows() == 2);
    CHECK(std::abs(hleft(0, 0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(hleft(1, 0) - Complex(1.0)) < 1e-15);
}

TEST_CASE("Lemma-style norm bounds for the structured blocks") {
    Prng rng(404);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = rng.next_int(0, 8);
        const int ell = rng.next_int(1, 3);
        const int n = rng.next_int(1, 3);
        const bool inside = trial % 2 == 0;
        const double radius = inside ? rng.next_uniform() : 1.0 + 2.0 * rng.next_uniform();
        const double angle = 2.0 * std::numbers::pi * rng.next_uniform();
        const Complex lambda = radius * Complex(std::cos(angle), std::sin(angle));
        const double al = std::abs(lambda);

        const double lam_norm = spectral_norm(lambda_block(k, ell, n, lambda));
        const double r_norm = spectral_norm(R_block(k, ell, n, lambda));
        const double s_norm = spectral_norm(S_block(k, ell, n, lambda));
        const double slack = 1 + 1e-12;
        if (al <= 1.0) {
            REQUIRE(lam_norm <= std::sqrt(k + 1.0) * slack);
            REQUIRE(r_norm <= k * slack + 1e-15);
            REQUIRE(s_norm <= k * slack + 1e-15);
        } else {
            REQUIRE(std::pow(al, -k * ell) * lam_norm <= std::sqrt(k + 1.0) * slack);
            if (k >= 1) {
                REQUIRE(std::pow(al, -(k - 1) * ell) * r_norm <= k * slack);
                REQUIRE(std::pow(al, -(k - 1) * ell) * s_norm <= k * slack);
            }
        }
    }
    // equality at lambda = 1
    CHECK(spectral_norm(lambda_block(2, 1, 1, 1.0)) == Catch::Approx(std::sqrt(3.0)));
    // worked |lambda| > 1 case: 2^{-2} ||Lambda_2(2)|| = sqrt(21)/4
    CHECK(0.25 * spectral_norm(lambda_block(2, 1, 1, 2.0)) ==
          Catch::Approx(std::sqrt(21.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("standard_M: scalar quad body") {
    const PolyMat m = standard_M(quad_minus_one(), 1, 1, 0);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 2);
    CHECK(m.coeffs[1](0, 0) == Complex(1.0));  // lambda
    CHECK(m.coeffs[0](0, 1) == Complex(-1.0)); // -1
    CHECK(m.coeffs[0](0, 0) == Complex(0.0));
    CHECK(m.coeffs[1](0, 1) == Complex(0.0));
}

TEST_CASE("standard_M at (k-1, 0) gives the Frobenius-like first row") {
    const MatrixPolynomial p = random_poly(2, 4, 31);
    const PolyMat m = standard_M(p, 1, 3, 0);
    const int n = 2;
    // coefficient 1 row: [A_4, A_3, A_2, A_1]; coefficient 0 row: [0, 0, 0, A_0]
    for (int j = 0; j < 4; ++j) {
        CHECK((m.coeffs[1].block(0, j * n, n, n) - p.coeffs[static_cast<std::size_t>(4 - j)]).norm() == 0.0);
        const CMatrix c0 = m.coeffs[0].block(0, j * n, n, n);
        if (j < 3) CHECK(c0.norm() == 0.0);
        else CHECK((c0 - p.coeffs[0]).norm() == 0.0);
    }
}

TEST_CASE("recover_Q inverts standard_M and general_M (symbolic oracle)") {
    Prng rng(505);
    for (int trial = 0; trial < 50; ++trial) {
        const ShapeDraw s = draw_shape(rng, 4, 8, 3);
        const MatrixPolynomial p = random_poly(s.n, s.d, rng.next_u64());
        const KroneckerShape shape{s.ell, s.eps, s.eta, s.n};
        const double scale = norm_profile(p).max_norm;

        const PolyMat m0 = standard_M(p, s.ell, s.eps, s.eta);
        const MatrixPolynomial q0 = recover_Q(m0, shape);
        REQUIRE(q0.grade == s.d);
        for (std::size_t i = 0; i < p.coeffs.size(); ++i)
            REQUIRE((q0.coeffs[i] - p.coeffs[i]).norm() <= 1e-12 * scale);

        const GeneralMParams params = random_params(s.ell, s.eps, s.eta, s.n, rng);
        const PolyMat mg = general_M(p, s.ell, s.eps, s.eta, params);
        const MatrixPolynomial qg = recover_Q(mg, shape);
        for (std::size_t i = 0; i < p.coeffs.size(); ++i)
            REQUIRE((qg.coeffs[i] - p.coeffs[i]).norm() <= 1e-12 * std::max(1.0, scale));

        REQUIRE(anti_diagonal_check(m0, shape, p));
        REQUIRE(anti_diagonal_check(mg, shape, p));
    }
}

TEST_CASE("general_M: zero parameters reduce to standard_M; ell = 1 has no D") {
    const MatrixPolynomial p = random_poly(2, 4, 99);
    const GeneralMParams zero = GeneralMParams::zero(2, 1, 0, 2);
    CHECK(!zero.D.has_value()); // eta = 0: no room for D even at ell = 2
    const PolyMat mg = general_M(p, 2, 1, 0, zero);
    const PolyMat m0 = standard_M(p, 2, 1, 0);
    for (std::size_t t = 0; t < mg.coeffs.size(); ++t)
        CHECK((mg.coeffs[t] - m0.coeffs[t]).norm() == 0.0);

    CHECK(!GeneralMParams::zero(1, 1, 1, 2).D.has_value());
    CHECK(GeneralMParams::zero(2, 1, 1, 2).D.has_value());
}

TEST_CASE("recover_Q: single constant block in the corner and grade bookkeeping") {
    const int n = 2;
    const KroneckerShape shape{2, 1, 1, n};
    PolyMat m = PolyMat::zero(2 * n, 2 * n, 2);
    CMatrix a(n, n);
    a << Complex(1.0), Complex(2.0), Complex(3.0, 1.0), Complex(4.0);
    m.coeffs[0].block(n, n, n, n) = a; // block (eta, eps) carries weight lambda^0
    const MatrixPolynomial q = recover_Q(m, shape);
    REQUIRE(q.grade == 2 * 3);
    CHECK((q.coeffs[0] - a).norm() == 0.0);
    for (int i = 1; i <= q.grade; ++i) CHECK(q.coeffs[static_cast<std::size_t>(i)].norm() == 0.0);
}

TEST_CASE("anti_diagonal_check rejects a corrupted body") {
    const MatrixPolynomial p = random_poly(2, 4, 7);
    const KroneckerShape shape{2, 1, 0, 2};
    PolyMat m = standard_M(p, 2, 1, 0);
    m.coeffs[1](0, 0) += Complex(0.5);
    CHECK(!anti_diagonal_check(m, shape, p));
}

TEST_CASE("assemble: scalar quad pencil and eager validation") {
    const MatrixPolynomial p = quad_minus_one();
    const KroneckerShape shape{1, 1, 0, 1};
    const BlockKroneckerForm form = assemble(standard_M(p, 1, 1, 0), shape, &p);
    REQUIRE(form.assembled.n == 2);
    REQUIRE(form.assembled.grade == 1);
    const CMatrix c0 = form.assembled.coeffs[0];
    const CMatrix c1 = form.assembled.coeffs[1];
    CHECK(c0(0, 0) == Complex(0.0));
    CHECK(c0(0, 1) == Complex(-1.0));
    CHECK(c0(1, 0) == Complex(-1.0));
    CHECK(c0(1, 1) == Complex(0.0));
    CHECK((c1 - CMatrix::Identity(2, 2)).norm() == 0.0);

    // a body built for a different polynomial must be rejected
    const MatrixPolynomial other = scalar_poly({5.0, 0.0, 1.0});
    CHECK_THROWS_AS(assemble(standard_M(other, 1, 1, 0), shape, &p), std::runtime_error);
}

TEST_CASE("one-sided factorizations at a worked point") {
    const MatrixPolynomial p = quad_minus_one();
    const KroneckerShape shape{1, 1, 0, 1};
    const BlockKroneckerForm form = assemble(standard_M(p, 1, 1, 0), shape, &p);
    const Complex lambda(2.0);
    const CMatrix lam_eval = evaluate(form.assembled, lambda);
    const CMatrix h = H_block(lambda, shape.eps, shape.eta, form.M);
    const CMatrix rhs = lam_eval * h;
    REQUIRE(rhs.rows() == 2);
    CHECK(std::abs(rhs(0, 0) - Complex(3.0)) < 1e-14); // e_{eta+1} (x) P(2) = [3; 0]
    CHECK(std::abs(rhs(1, 0)) < 1e-14);

    const CMatrix g = G_block(lambda, shape.eps, shape.eta, form.M);
    CHECK((g - h).norm() == 0.0); // eta = 0 degenerate case
    const CMatrix rhs_g = lam_eval * g;
    CHECK(std::abs(rhs_g(0, 0) - Complex(3.0)) < 1e-14);
}

TEST_CASE("frobenius1 reproduces the classical first companion layout") {
    const MatrixPolynomial p = random_poly(2, 3, 42);
    const BlockKroneckerForm f = frobenius1(p);
    const int n = 2;
    REQUIRE(f.assembled.n == 3 * n);
    const auto& a = p.coeffs;
    CMatrix c1 = CMatrix::Zero(3 * n, 3 * n);
    c1.block(0, 0, n, n) = a[3];
    c1.block(n, n, n, n) = CMatrix::Identity(n, n);
    c1.block(2 * n, 2 * n, n, n) = CMatrix::Identity(n, n);
    CMatrix c0 = CMatrix::Zero(3 * n, 3 * n);
    c0.block(0, 0, n, n) = a[2];
    c0.block(0, n, n, n) = a[1];
    c0.block(0, 2 * n, n, n) = a[0];
    c0.block(n, 0, n, n) = -CMatrix::Identity(n, n);
    c0.block(2 * n, n, n, n) = -CMatrix::Identity(n, n);
    CHECK((f.assembled.coeffs[1] - c1).norm() == 0.0);
    CHECK((f.assembled.coeffs[0] - c0).norm() == 0.0);
}

TEST_CASE("frobenius2 reproduces the classical second companion layout") {
    const MatrixPolynomial p = random_poly(2, 3, 43);
    const BlockKroneckerForm f = frobenius2(p);
    const int n = 2;
    const auto& a = p.coeffs;
    CMatrix c0 = CMatrix::Zero(3 * n, 3 * n);
    c0.block(0, 0, n, n) = a[2];
    c0.block(n, 0, n, n) = a[1];
    c0.block(2 * n, 0, n, n) = a[0];
    c0.block(0, n, n, n) = -CMatrix::Identity(n, n);
    c0.block(n, 2 * n, n, n) = -CMatrix::Identity(n, n);
    CMatrix c1 = CMatrix::Zero(3 * n, 3 * n);
    c1.block(0, 0, n, n) = a[3];
    c1.block(n, n, n, n) = CMatrix::Identity(n, n);
    c1.block(2 * n, 2 * n, n, n) = CMatrix::Identity(n, n);
    CHECK((f.assembled.coeffs[0] - c0).norm() == 0.0);
    CHECK((f.assembled.coeffs[1] - c1).norm() == 0.0);
}

TEST_CASE("exp1 pencils: published degree-3 layouts with signs") {
    const MatrixPolynomial p = random_poly(2, 3, 44);
    const int n = 2;
    const auto& a = p.coeffs;

    const BlockKroneckerForm l2 = exp1_L2(p);
    CHECK((l2.M.coeffs[1].block(0, 0, n, n) - a[3]).norm() == 0.0);
    CHECK((l2.M.coeffs[0].block(0, n, n, n) - a[1]).norm() == 0.0);
    CHECK(l2.M.coeffs[0].block(n, 0, n, n).norm() == 0.0);

    const BlockKroneckerForm l3 = exp1_L3(p);
    CHECK((l3.M.coeffs[1].block(n, n, n, n) - a[1]).norm() == 0.0);
    CHECK(l3.M.coeffs[0].block(0, n, n, n).norm() == 0.0);

    const BlockKroneckerForm l4 = exp1_L4(p);
    CHECK((l4.M.coeffs[0].block(0, 0, n, n) + a[2]).norm() == 0.0); // lambda A3 - A2
    CHECK((l4.M.coeffs[1].block(0, n, n, n) - a[2]).norm() == 0.0);
    CHECK((l4.M.coeffs[1].block(n, n, n, n) + a[1]).norm() == 0.0); // -lambda A1 + A0
}

TEST_CASE("exp2 presets: quadratification and cubification layouts") {
    const MatrixPolynomial p4 = random_poly(2, 4, 45);
    const BlockKroneckerForm q4 = exp2_Q(p4);
    const int n = 2;
    CHECK(q4.shape.ell == 2);
    CHECK((q4.M.coeffs[2].block(0, 0, n, n) - p4.coeffs[4]).norm() == 0.0);
    CHECK((q4.M.coeffs[1].block(0, 0, n, n) - p4.coeffs[3]).norm() == 0.0);

    const MatrixPolynomial p6 = random_poly(2, 6, 46);
    const BlockKroneckerForm q6 = exp2_Q(p6);
    CHECK(q6.shape.ell == 2);
    CHECK(q6.shape.eps == 1);
    CHECK(q6.shape.eta == 1);
    CHECK((q6.M.coeffs[0].block(0, n, n, n) - p6.coeffs[2]).norm() == 0.0);

    const BlockKroneckerForm c6 = exp2_C(p6);
    CHECK(c6.shape.ell == 3);
    CHECK(c6.assembled.n == 2 * n); // 2x2-block cubification
    CHECK((c6.M.coeffs[3].block(0, n, n, n) - p6.coeffs[3]).norm() == 0.0);

    const BlockKroneckerForm f6 = exp2_F(p6);
    CHECK(f6.shape.eps == 2);
    CHECK(f6.shape.eta == 3);
    CHECK((f6.M.coeffs[1].block(3 * n, 2 * n, n, n) - p6.coeffs[1]).norm() == 0.0);

    CHECK_THROWS_AS(exp2_C(p4), std::invalid_argument);
    CHECK_THROWS_AS(exp2_Q(random_poly(2, 3, 1)), std::invalid_argument);
    CHECK_THROWS_AS(exp1_L2(p4), std::invalid_argument);
}

TEST_CASE("preset parser") {
    const MatrixPolynomial p = random_poly(2, 4, 47);
    CHECK(preset(p, "frobenius_like1(2)").shape.ell == 2);
    CHECK(preset(p, "L_eps_eta(2,1,0)").shape.eps == 1);
    CHECK(preset(p, "frobenius1").label == "frobenius1");
    CHECK_THROWS_AS(preset(p, "nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(preset(p, "frobenius_like1(3)"), std::invalid_argument); // 3 does not divide 4
}

TEST_CASE("companion census") {
    const MatrixPolynomial p = random_poly(2, 3, 48);

    const BlockKroneckerForm f1 = frobenius1(p);
    const CompanionCensus census = companion_census(f1, p);
    CHECK(census.companion);
    bool found_a0 = false;
    for (const auto& e : census.entries)
        if (e.kind == BlockKind::Coefficient && e.coeff_index == 0 && e.t == 0 && e.br == 0 && e.bc == 2)
            found_a0 = true;
    CHECK(found_a0);

    // sign-relaxed blocks in the published L4 pencil
    const CompanionCensus c4 = companion_census(exp1_L4(p), p);
    CHECK(c4.companion);
    bool has_negative_coeff = false;
    for (const auto& e : c4.entries)
        if (e.kind == BlockKind::Coefficient && e.sign == -1) has_negative_coeff = true;
    CHECK(has_negative_coeff);

    // dense random bodies are not companion
    Prng rng(777);
    const GeneralMParams params = random_params(1, 1, 1, 2, rng);
    const PolyMat mg = general_M(p, 1, 1, 1, params);
    const BlockKroneckerForm fg = assemble(mg, {1, 1, 1, 2}, &p);
    CHECK(!is_companion(fg, p));

    // standard-body Frobenius-like forms classify as companion too
    const MatrixPolynomial p6 = random_poly(2, 6, 49);
    CHECK(is_companion(frobenius_like1(p, 1), p));
    CHECK(is_companion(exp2_F(p6), p6));
}
