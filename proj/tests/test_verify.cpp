#include <catch2/catch_amalgamated.hpp>

#include <kroncond/verify.hpp>

using namespace kroncond;

namespace {

SuiteConfig small_config() {
    SuiteConfig cfg;
    cfg.seed = 99;
    cfg.trials = 12;
    cfg.n_max = 4;
    cfg.d_max = 6;
    cfg.ell_max = 3;
    cfg.lambda_samples = 8;
    return cfg;
}

} // namespace

TEST_CASE("factorization suite passes and is deterministic") {
    const SuiteConfig cfg = small_config();
    const SuiteReport a = check_factorizations(cfg);
    const SuiteReport b = check_factorizations(cfg);
    REQUIRE(a.ok());
    REQUIRE(a.checks.size() == 1);
    CHECK(a.checks[0].pass == cfg.trials);
    CHECK(a.checks[0].worst == b.checks[0].worst);
    CHECK(a.checks[0].pass == b.checks[0].pass);
}

TEST_CASE("eigvec formula suite passes") {
    SuiteConfig cfg = small_config();
    cfg.trials = 6;
    cfg.n_max = 3;
    cfg.d_max = 4;
    const SuiteReport report = check_eigvec_formulas(cfg);
    REQUIRE(report.ok());
    REQUIRE(report.checks.size() == 2);
    for (const CheckResult& c : report.checks) CHECK(c.fail == 0);
}

TEST_CASE("lemma norm suite passes") {
    const SuiteReport report = check_lemma_norms(small_config());
    REQUIRE(report.ok());
    CHECK(report.checks[0].worst <= 1.0 + 1e-12);
}

TEST_CASE("bound suite passes") {
    SuiteConfig cfg = small_config();
    cfg.trials = 6;
    cfg.n_max = 3;
    cfg.d_max = 6;
    const SuiteReport report = check_bounds(cfg);
    INFO(report.to_text());
    REQUIRE(report.ok());
    REQUIRE(report.checks.size() == 5);
    // strict inequalities should not even get close to the slacked bound
    for (const CheckResult& c : report.checks) CHECK(c.worst <= 1.0);
}

TEST_CASE("failures log their trial seed and reproduce in isolation") {
    SuiteConfig cfg = small_config();
    cfg.trials = 4;
    cfg.tol_factorization = 1e-30; // impossible tolerance: every trial fails
    const SuiteReport broken = check_factorizations(cfg);
    REQUIRE(!broken.ok());
    REQUIRE(!broken.checks[0].offending_seeds.empty());

    SuiteConfig rerun = cfg;
    rerun.only_trial_seed = broken.checks[0].offending_seeds[0];
    const SuiteReport repeat = check_factorizations(rerun);
    REQUIRE(repeat.checks[0].fail == 1);
    CHECK(repeat.checks[0].pass == 0);

    // the same trial passes again at the real tolerance
    rerun.tol_factorization = 1e-12;
    const SuiteReport fixed = check_factorizations(rerun);
    CHECK(fixed.checks[0].fail == 0);
}

TEST_CASE("run_all_checks aggregates every suite") {
    SuiteConfig cfg = small_config();
    cfg.trials = 3;
    cfg.n_max = 3;
    cfg.d_max = 4;
    const SuiteReport report = run_all_checks(cfg);
    REQUIRE(report.checks.size() == 9);
    REQUIRE(report.ok());
    const std::string text = report.to_text();
    CHECK(text.find("factorizations") != std::string::npos);
    CHECK(text.find("bound_cross") != std::string::npos);
}

TEST_CASE("config validation") {
    SuiteConfig cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(check_lemma_norms(cfg), std::invalid_argument);
}
