#include <catch2/catch_amalgamated.hpp>

#include <kroncond/eigsolve.hpp>

using namespace kroncond;

namespace {

MatrixPolynomial quad_minus_one() { return scalar_poly({-1.0, 0.0, 1.0}); }

CMatrix random_matrix(int n, Prng& rng) {
    CMatrix a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = rng.next_complex_gaussian();
    return a;
}

} // namespace

TEST_CASE("pencil backend honors its residual contract") {
    Prng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.next_int(2, 12);
        const CMatrix a = random_matrix(n, rng);
        const CMatrix b = random_matrix(n, rng);
        const double na = spectral_norm(a), nb = spectral_norm(b);
        for (const PencilEigenpair& pair : solve_pencil(a, b)) {
            if (!pair.finite) continue;
            const CMatrix pencil = pair.lambda * b + a;
            const double scale = std::abs(pair.lambda) * nb + na;
            REQUIRE((pencil * pair.right).norm() <= 1e-10 * scale * pair.right.norm());
            REQUIRE((pair.left.adjoint() * pencil).norm() <= 1e-10 * scale * pair.left.norm());
        }
    }
}

TEST_CASE("pencil backend reports infinite eigenvalues distinctly") {
    // lambda*B + A with singular B has fewer than n finite eigenvalues
    CMatrix a = CMatrix::Identity(2, 2);
    CMatrix b = CMatrix::Zero(2, 2);
    b(0, 0) = 1.0;
    const auto pairs = solve_pencil(a, b);
    int finite = 0, infinite = 0;
    for (const auto& p : pairs) (p.finite ? finite : infinite)++;
    CHECK(finite == 1);
    CHECK(infinite == 1);
}

TEST_CASE("backend selection env var") {
    setenv("KRONCOND_BACKEND", "not-a-backend", 1);
    CHECK_THROWS_AS(solve_pencil(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)), std::runtime_error);
    setenv("KRONCOND_BACKEND", "lapack-qz", 1);
    CHECK_NOTHROW(solve_pencil(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)));
    unsetenv("KRONCOND_BACKEND");
}

TEST_CASE("linearize_form: identity for pencils, companion otherwise") {
    const MatrixPolynomial p = quad_minus_one();
    const BlockKroneckerForm f1 = frobenius1(p);
    const auto [a, b] = linearize_form(f1);
    CHECK((a - f1.assembled.coeffs[0]).norm() == 0.0);
    CHECK((b - f1.assembled.coeffs[1]).norm() == 0.0);

    const MatrixPolynomial p6 = random_poly(3, 6, 60);
    const BlockKroneckerForm c6 = exp2_C(p6); // ell = 3, kn = 2n
    const auto [a6, b6] = linearize_form(c6);
    REQUIRE(a6.rows() == 6 * 3); // ell * k * n = d * n
    REQUIRE(b6.rows() == 6 * 3);

    // cross-check: companion pencil of the cubification and the direct
    // frobenius1 pencil must see the same finite eigenvalues
    const EigResult via_c = eig_with_form(p6, c6);
    const EigResult via_f = eig_with_form(p6, frobenius1(p6));
    REQUIRE(via_c.triples.size() == via_f.triples.size());
    const ForwardErrors err = forward_errors(via_c.triples, via_f.triples);
    CHECK(err.unmatched_reference.empty());
    CHECK(err.max_error <= 1e-9);
}

TEST_CASE("eig_with_form: scalar quad through frobenius1") {
    const MatrixPolynomial p = quad_minus_one();
    const EigResult res = eig_with_form(p, frobenius1(p));
    REQUIRE(res.triples.size() == 2);
    CHECK(res.infinite_count == 0);
    // sorted by modulus with real-part tiebreak: -1 before +1
    CHECK(std::abs(res.triples[0].lambda - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(res.triples[1].lambda - Complex(1.0)) < 1e-14);
    for (const Eigentriple& t : res.triples) {
        CHECK(std::abs(std::abs(t.x(0)) - 1.0) < 1e-12); // unit scalar up to phase
        CHECK(std::abs(std::abs(t.y(0)) - 1.0) < 1e-12);
        CHECK(t.residual_right < 1e-14);
        CHECK(t.residual_left < 1e-14);
        CHECK(t.simplicity_margin == Catch::Approx(2.0));
    }
}

TEST_CASE("eig_with_form: full eigenvalue count for well-conditioned leading coefficient") {
    const MatrixPolynomial p = random_poly(4, 3, 61);
    const EigResult res = eig_with_form(p, frobenius1(p));
    CHECK(res.triples.size() == 12); // n * d
    CHECK(res.infinite_count == 0);
    for (const Eigentriple& t : res.triples) {
        CHECK(t.residual_right < 1e-10);
        CHECK(t.residual_left < 1e-10);
    }
}

TEST_CASE("eig_with_form: all presets agree on the spectrum (d = 6, n = 4)") {
    const MatrixPolynomial p = random_poly(4, 6, 62);
    const EigResult ref = eig_with_form(p, frobenius1(p));
    const std::vector<std::string> names = {"frobenius2",        "frobenius_like1(2)",
                                            "frobenius_like2(3)", "L_eps_eta(1,3,2)",
                                            "exp2_F",            "exp2_Q",
                                            "exp2_C"};
    for (const std::string& name : names) {
        const EigResult other = eig_with_form(p, preset(p, name));
        REQUIRE(other.triples.size() == ref.triples.size());
        const ForwardErrors err = forward_errors(other.triples, ref.triples);
        INFO("preset " << name);
        CHECK(err.unmatched_reference.empty());
        CHECK(err.max_error <= 1e-9);
    }
}

TEST_CASE("derivative identities hold for recovered eigentriples") {
    // |w^* L'(l) z| = |y^* P'(l) x| with the H vectors, and
    // |w^* L'(l) z| = |l|^{d-ell} |y^* P'(l) x| with the G vectors
    Prng rng(66);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = rng.next_int(2, 4);
        const MatrixPolynomial p = random_poly(n, 6, rng.next_u64());
        for (const std::string& name : {"frobenius1", "exp2_Q", "exp2_C"}) {
            const BlockKroneckerForm form = preset(p, name);
            const PolyMat madj = form.M.adjoint();
            const KroneckerShape& s = form.shape;
            for (const Eigentriple& t : eig_with_form(p, form).triples) {
                if (!t.converged || t.simplicity_margin < 1e-8) continue;
                const CMatrix l_deriv = evaluate_derivative(form.assembled, t.lambda);
                const double target =
                    std::abs((t.y.adjoint() * evaluate_derivative(p, t.lambda) * t.x)(0));
                const CVector z_h = H_block(t.lambda, s.eps, s.eta, form.M) * t.x;
                const CVector w_h = H_block(std::conj(t.lambda), s.eta, s.eps, madj) * t.y;
                const double inner_h = std::abs((w_h.adjoint() * l_deriv * z_h)(0));
                REQUIRE(inner_h == Catch::Approx(target).epsilon(1e-10));
                const CVector z_g = G_block(t.lambda, s.eps, s.eta, form.M) * t.x;
                const CVector w_g = G_block(std::conj(t.lambda), s.eta, s.eps, madj) * t.y;
                const double inner_g = std::abs((w_g.adjoint() * l_deriv * z_g)(0));
                const double scaled = std::pow(std::abs(t.lambda), p.grade - s.ell) * target;
                REQUIRE(inner_g == Catch::Approx(scaled).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("reference_eigentriples: exact roots for the scalar quad") {
    const std::vector<Eigentriple> refs = reference_eigentriples(quad_minus_one());
    REQUIRE(refs.size() == 2);
    CHECK(std::abs(refs[0].lambda - Complex(-1.0)) < 1e-15);
    CHECK(std::abs(refs[1].lambda - Complex(1.0)) < 1e-15);
    for (const Eigentriple& t : refs) CHECK(t.converged);
}

TEST_CASE("reference_eigentriples: refinement does not worsen residuals") {
    const MatrixPolynomial p = random_poly(5, 4, 63);
    const EigResult base = eig_with_form(p, frobenius1(p));
    const std::vector<Eigentriple> refs = reference_eigentriples(p);
    REQUIRE(refs.size() == base.triples.size());
    for (std::size_t i = 0; i < refs.size(); ++i) {
        REQUIRE(refs[i].converged);
        // matched indices coincide because both lists are sorted by modulus
        CHECK(refs[i].residual_right <= base.triples[i].residual_right * (1 + 1e-6) + 1e-16);
    }
}

TEST_CASE("reference_eigentriples: agreement with the frobenius2 route") {
    const MatrixPolynomial p = random_poly(4, 3, 64);
    const std::vector<Eigentriple> refs = reference_eigentriples(p);
    const EigResult other = eig_with_form(p, frobenius2(p));
    const ForwardErrors err = forward_errors(other.triples, refs);
    CHECK(err.unmatched_reference.empty());
    CHECK(err.max_error <= 1e-9);
}

TEST_CASE("forward_errors: identity, perturbation, unmatched bookkeeping") {
    const MatrixPolynomial p = random_poly(3, 2, 65);
    const std::vector<Eigentriple> refs = reference_eigentriples(p);
    ForwardErrors same = forward_errors(refs, refs);
    CHECK(same.max_error == 0.0);
    CHECK(same.unmatched_reference.empty());
    CHECK(same.unmatched_computed.empty());

    std::vector<Eigentriple> perturbed = refs;
    perturbed[2].lambda *= (1.0 + 1e-12);
    const ForwardErrors err = forward_errors(perturbed, refs);
    CHECK(err.max_error == Catch::Approx(1e-12).epsilon(1e-3));
    bool found = false;
    for (const auto& m : err.matches)
        if (m.reference_index == 2) {
            found = true;
            CHECK(m.rel_error == Catch::Approx(1e-12).epsilon(1e-3));
        }
    CHECK(found);

    std::vector<Eigentriple> shorter(refs.begin(), refs.end() - 1);
    const ForwardErrors partial = forward_errors(shorter, refs);
    CHECK(partial.unmatched_reference.size() == 1);
    CHECK(partial.unmatched_computed.empty());
}
