// Command-line front end: polynomial generation and ingestion, form
// construction, eigensolving, conditioning reports, cross-form comparison,
// the verification suites, and the three experiment drivers.
//
// Exit codes: 0 success, 1 usage error, 2 data error (missing or malformed
// input), 3 numerical failure (backend breakdown, validation failure, or a
// failed verification check).

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include <kroncond/csv.hpp>
#include <kroncond/experiments.hpp>

namespace fs = std::filesystem;
using namespace kroncond;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 1;
    bool scale = false;
    std::string out = ".";
    double tol = 0.0; // 0 keeps each command's default
};

MatrixPolynomial load_input(const std::string& path, bool scale) {
    MatrixPolynomial p = read_poly(path);
    if (scale) p = scale_to_unit_max(p).first;
    return p;
}

fs::path out_file(const GlobalOptions& g, const std::string& name) {
    fs::create_directories(g.out);
    return fs::path(g.out) / name;
}

// key=value positionals accepted by gen (n=30 d=3)
void apply_kv(const std::vector<std::string>& kvs, int& n, int& d) {
    for (const std::string& kv : kvs) {
        int value = 0;
        if (std::sscanf(kv.c_str(), "n=%d", &value) == 1) n = value;
        else if (std::sscanf(kv.c_str(), "d=%d", &value) == 1) d = value;
        else throw CLI::ValidationError("expected n=<int> or d=<int>, got '" + kv + "'");
    }
}

void write_form(const BlockKroneckerForm& form, const fs::path& poly_path) {
    write_poly(form.assembled, poly_path.string());
    std::ofstream side(poly_path.string() + ".shape");
    if (!side) throw std::runtime_error("cannot open for writing: " + poly_path.string() + ".shape");
    side << "kronshape ell=" << form.shape.ell << " eps=" << form.shape.eps
         << " eta=" << form.shape.eta << " n=" << form.shape.n << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"block Kronecker ell-ifications: construction, eigensolving and conditioning"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--seed", g.seed, "generator seed");
    app.add_flag("--scale", g.scale, "divide the polynomial by max ||A_i||_2 before analysis");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--tol", g.tol, "tolerance override where a command honors one");

    // gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a synthetic polynomial");
    bool gen_random = false, gen_badly = false;
    int gen_n = 0, gen_d = 0;
    std::string gen_file = "poly.txt";
    std::vector<std::string> gen_kv;
    gen->add_flag("--random", gen_random, "standard complex Gaussian coefficients");
    gen->add_flag("--badly-scaled", gen_badly, "degree-6 badly-scaled recipe");
    gen->add_option("--n", gen_n, "matrix size");
    gen->add_option("--d", gen_d, "grade (ignored by --badly-scaled)");
    gen->add_option("--file", gen_file, "output file name");
    gen->add_option("params", gen_kv, "n=<int> d=<int> shorthand");

    // build ---------------------------------------------------------------
    auto* build = app.add_subcommand("build", "assemble an ell-ification and serialize it");
    std::string build_in = "poly.txt", build_preset = "frobenius1";
    std::string build_file = "form.txt";
    build->add_option("--in", build_in, "input polynomial (text file or MM directory)");
    build->add_option("--preset", build_preset, "form preset name");
    build->add_option("--file", build_file, "output file name (plus .shape sidecar)");

    // eig ---------------------------------------------------------------
    auto* eig = app.add_subcommand("eig", "eigentriples of P through an ell-ification");
    std::string eig_in = "poly.txt", eig_preset = "frobenius1";
    std::string eig_file = "eigentriples.csv";
    eig->add_option("--in", eig_in, "input polynomial");
    eig->add_option("--preset", eig_preset, "form preset name");
    eig->add_option("--file", eig_file, "output CSV name");

    // cond ---------------------------------------------------------------
    auto* cond = app.add_subcommand("cond", "condition-number report for a preset");
    std::string cond_in = "poly.txt", cond_preset = "frobenius1";
    std::string cond_file = "condition.csv";
    cond->add_option("--in", cond_in, "input polynomial");
    cond->add_option("--preset", cond_preset, "form preset name");
    cond->add_option("--file", cond_file, "output CSV name");

    // compare ---------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "cross ratios of two companion presets");
    std::string cmp_in = "poly.txt";
    std::vector<std::string> cmp_presets;
    std::string cmp_file = "compare.csv";
    compare->add_option("--in", cmp_in, "input polynomial");
    compare->add_option("--preset", cmp_presets, "two preset names (numerator first)")
        ->expected(2);
    compare->add_option("--file", cmp_file, "output CSV name");

    // verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    std::string verify_suite = "all";
    int verify_trials = 0;
    verify->add_option("--suite", verify_suite, "all|factorizations|eigvec|lemma|bounds");
    verify->add_option("--trials", verify_trials, "trial count override");

    // experiment ---------------------------------------------------------------
    auto* experiment = app.add_subcommand("experiment", "run an experiment driver");
    ExperimentConfig exp_cfg;
    experiment->add_option("--id", exp_cfg.id, "exp1|exp2|exp3")->required();
    experiment->add_option("--in", exp_cfg.input_path, "external problem (text file or MM directory)");
    experiment->add_option("--preset", exp_cfg.presets, "curve preset override");
    experiment->add_option("--n", exp_cfg.size_override, "synthetic matrix size override");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        apply_kv(gen_kv, gen_n, gen_d);
        if (gen_random == gen_badly)
            throw CLI::ValidationError("choose exactly one of --random / --badly-scaled");
        MatrixPolynomial p = gen_badly ? badly_scaled_poly(gen_n > 0 ? gen_n : 10, g.seed)
                                       : random_poly(gen_n > 0 ? gen_n : 30, gen_d > 0 ? gen_d : 3,
                                                     g.seed);
        if (g.scale) p = scale_to_unit_max(p).first;
        const fs::path path = out_file(g, gen_file);
        write_poly(p, path.string());
        std::cout << "wrote " << path.string() << "\n";
        return 0;
    }
    if (build->parsed()) {
        const MatrixPolynomial p = load_input(build_in, g.scale);
        const BlockKroneckerForm form = preset(p, build_preset);
        const fs::path path = out_file(g, build_file);
        write_form(form, path);
        std::cout << "wrote " << path.string() << " (+ .shape sidecar)\n";
        return 0;
    }
    if (eig->parsed()) {
        const MatrixPolynomial p = load_input(eig_in, g.scale);
        const EigResult res = eig_with_form(p, preset(p, eig_preset));
        const fs::path path = out_file(g, eig_file);
        write_eigentriples_csv(res.triples, path.string());
        std::cout << "wrote " << path.string() << " (" << res.triples.size() << " finite, "
                  << res.infinite_count << " infinite)\n";
        return 0;
    }
    if (cond->parsed()) {
        const MatrixPolynomial p = load_input(cond_in, g.scale);
        const BlockKroneckerForm form = preset(p, cond_preset);
        const std::vector<Eigentriple> refs = reference_eigentriples(p);
        const double margin = g.tol > 0.0 ? g.tol : 1e-8;
        const auto reports = condition_reports(p, form, refs, margin);
        const fs::path path = out_file(g, cond_file);
        write_condition_csv(reports, path.string());
        std::cout << "wrote " << path.string() << " (" << reports.size() << " eigenvalues, rho = "
                  << sig17(rho(p)) << ")\n";
        return 0;
    }
    if (compare->parsed()) {
        const MatrixPolynomial p = load_input(cmp_in, g.scale);
        const BlockKroneckerForm fr = preset(p, cmp_presets[0]);
        const BlockKroneckerForm fl = preset(p, cmp_presets[1]);
        const auto [lo, hi] = bound_cross(fr, fl, p);
        const FormNorms nr = form_norms(fr), nl = form_norms(fl);
        const fs::path path = out_file(g, cmp_file);
        std::ofstream out = open_csv(path.string());
        out << "index,re_lambda,im_lambda,ratio,bracket_lo,bracket_hi,inside\n";
        std::size_t idx = 0;
        for (const Eigentriple& t : reference_eigentriples(p)) {
            if (!t.converged || std::abs(t.lambda) == 0.0 || t.simplicity_margin < 1e-8) continue;
            const double ratio = coeff_cond_form(fr, nr, t) / coeff_cond_form(fl, nl, t);
            out << idx++ << ',' << sig17(t.lambda.real()) << ',' << sig17(t.lambda.imag()) << ','
                << sig17(ratio) << ',' << sig17(lo) << ',' << sig17(hi) << ','
                << (ratio >= lo && ratio <= hi ? 1 : 0) << '\n';
        }
        std::cout << "wrote " << path.string() << "\n";
        return 0;
    }
    if (verify->parsed()) {
        SuiteConfig cfg;
        cfg.seed = g.seed;
        if (verify_trials > 0) cfg.trials = verify_trials;
        if (g.tol > 0.0) {
            cfg.tol_factorization = g.tol;
            cfg.tol_eigvec = g.tol;
        }
        SuiteReport report;
        if (verify_suite == "all") report = run_all_checks(cfg);
        else if (verify_suite == "factorizations") report = check_factorizations(cfg);
        else if (verify_suite == "eigvec") report = check_eigvec_formulas(cfg);
        else if (verify_suite == "lemma") report = check_lemma_norms(cfg);
        else if (verify_suite == "bounds") report = check_bounds(cfg);
        else throw CLI::ValidationError("unknown suite: " + verify_suite);
        std::cout << report.to_text();
        std::ofstream text(out_file(g, "verify_report.txt"));
        text << report.to_text();
        write_suite_csv(report, out_file(g, "verify_report.csv").string());
        return report.ok() ? 0 : 3;
    }
    if (experiment->parsed()) {
        exp_cfg.seed = g.seed;
        exp_cfg.scaled = g.scale;
        exp_cfg.out_dir = g.out;
        const ExperimentOutputs outputs = run_experiment(exp_cfg);
        for (const std::string& f : outputs.files)
            std::cout << "wrote " << (fs::path(g.out) / f).string() << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        // IO problems dominate this path; validation and backend breakdowns
        // carry distinctive messages
        const std::string what = e.what();
        const bool numerical = what.find("zggev") != std::string::npos ||
                               what.find("ell-ification") != std::string::npos ||
                               what.find("backend") != std::string::npos;
        std::cerr << (numerical ? "numerical error: " : "data error: ") << what << "\n";
        return numerical ? 3 : 2;
    }
}
