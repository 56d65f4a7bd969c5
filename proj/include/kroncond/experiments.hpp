#pragma once

#include <filesystem>
#include <map>

#include "csv.hpp"
#include "poly_io.hpp"

namespace kroncond {

/// Driver settings for the three experiment families. `scaled` pre-scales the
/// problem before analysis where a single variant is computed (exp1); the
/// ratio experiments exp2/exp3 always emit both the unscaled and the scaled
/// variant, mirroring the upper/lower figure layout they reproduce.
struct ExperimentConfig {
    std::string id; // exp1 | exp2 | exp3
    std::uint64_t seed = 1;
    bool scaled = false;
    std::vector<std::string> presets; // optional override of the default curve set
    std::string input_path;           // optional external problem (text or MM directory)
    std::string out_dir = ".";
    int size_override = 0; // exp1 matrix size (default 30), synthetic inputs only

    void validate() const {
        if (id != "exp1" && id != "exp2" && id != "exp3")
            throw std::invalid_argument("experiment id must be exp1, exp2 or exp3");
        if (size_override < 0) throw std::invalid_argument("experiment size must be positive");
    }
};

struct ExperimentOutputs {
    std::vector<std::string> files;
};

namespace detail {

inline MatrixPolynomial experiment_input(const ExperimentConfig& cfg, int default_n, int required_d) {
    if (!cfg.input_path.empty()) {
        if (!std::filesystem::exists(cfg.input_path))
            throw std::runtime_error(
                "experiment input not found: " + cfg.input_path +
                " (expected a matpoly text file or a Matrix-Market ingestion directory "
                "holding A0.mtx ... Ad.mtx)");
        MatrixPolynomial p = read_poly(cfg.input_path);
        if (required_d > 0 && p.grade != required_d)
            throw std::invalid_argument("experiment requires grade " + std::to_string(required_d) +
                                        ", input has grade " + std::to_string(p.grade));
        return p;
    }
    const int n = cfg.size_override > 0 ? cfg.size_override : default_n;
    if (required_d == 3) return random_poly(n, 3, cfg.seed);
    return badly_scaled_poly(n, cfg.seed);
}

inline std::vector<std::string> default_curves(const std::string& id, int d) {
    if (id == "exp1") return {"frobenius1", "exp1_L2", "exp1_L3", "exp1_L4"};
    if (id == "exp2") {
        if (d == 3) return {"exp1_L2", "exp1_L3", "exp1_L4"};
        if (d == 4) return {"frobenius1"};
        if (d == 6) return {"exp2_F", "exp2_Q", "exp2_C"};
        throw std::invalid_argument("exp2 supports grades 3, 4 and 6");
    }
    // exp3 reuses the experiment-1/2 form sets
    if (d == 3) return {"frobenius1", "exp1_L2", "exp1_L3", "exp1_L4"};
    if (d == 4) return {"frobenius1", "exp2_Q"};
    if (d == 6) return {"frobenius1", "exp2_F", "exp2_Q", "exp2_C"};
    throw std::invalid_argument("exp3 supports grades 3, 4 and 6");
}

inline std::string exp2_base(int d) { return d == 4 ? "exp2_Q" : "frobenius1"; }

struct RatioTable {
    std::vector<Complex> lambdas; // admissible eigenvalues, sorted by modulus
    std::vector<std::string> curve_names;
    std::vector<std::vector<double>> columns; // one column per curve
};

/// Ratios coeff_cond_curve / denominator for every admissible eigenvalue.
/// The denominator is coeff_cond of the base form, or of P itself when
/// `base` is empty.
inline RatioTable ratio_table(const MatrixPolynomial& p, const std::string& base,
                              const std::vector<std::string>& curves, double min_margin = 1e-8) {
    const std::vector<Eigentriple> refs = reference_eigentriples(p);
    const CoeffNormProfile prof = norm_profile(p);
    RatioTable table;
    table.curve_names = curves;
    std::optional<BlockKroneckerForm> base_form;
    std::optional<FormNorms> base_norms;
    if (!base.empty()) {
        base_form = preset(p, base);
        base_norms = form_norms(*base_form);
    }
    std::vector<BlockKroneckerForm> forms;
    std::vector<FormNorms> norms;
    for (const std::string& name : curves) {
        forms.push_back(preset(p, name));
        norms.push_back(form_norms(forms.back()));
    }
    table.columns.resize(curves.size());
    for (const Eigentriple& t : refs) {
        if (!t.converged || std::abs(t.lambda) == 0.0 || t.simplicity_margin < min_margin) continue;
        const double denom = base_form ? coeff_cond_form(*base_form, *base_norms, t)
                                       : kappa(p, t, prof.per_coeff);
        table.lambdas.push_back(t.lambda);
        for (std::size_t i = 0; i < forms.size(); ++i)
            table.columns[i].push_back(coeff_cond_form(forms[i], norms[i], t) / denom);
    }
    return table;
}

inline void write_ratio_csv(const RatioTable& table, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "index,re_lambda,im_lambda";
    for (const std::string& name : table.curve_names) out << ",ratio_" << name;
    out << '\n';
    for (std::size_t i = 0; i < table.lambdas.size(); ++i) {
        out << i << ',' << sig17(table.lambdas[i].real()) << ',' << sig17(table.lambdas[i].imag());
        for (const auto& col : table.columns) out << ',' << sig17(col[i]);
        out << '\n';
    }
}

inline void write_plot_script(const std::string& path, const std::string& title,
                              const std::vector<std::string>& csvs, bool log_y) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "#!/usr/bin/env python3\n"
           "# Plots the CSV files emitted next to this script; no quantity is\n"
           "# recomputed here, so figures are reproducible from the CSVs alone.\n"
           "import csv\n"
           "import os.path\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n\n"
           "here = os.path.dirname(os.path.abspath(__file__))\n"
           "files = [";
    for (std::size_t i = 0; i < csvs.size(); ++i) out << (i ? ", " : "") << '"' << csvs[i] << '"';
    out << "]\n"
           "fig, axes = plt.subplots(len(files), 1, figsize=(9, 4.5 * len(files)), squeeze=False)\n"
           "for ax, name in zip(axes[:, 0], files):\n"
           "    with open(os.path.join(here, name)) as fh:\n"
           "        rows = list(csv.DictReader(fh))\n"
           "    idx = [int(r[\"index\"]) for r in rows]\n"
           "    for col in rows[0].keys():\n"
           "        if col in (\"index\", \"re_lambda\", \"im_lambda\"):\n"
           "            continue\n"
           "        ax.plot(idx, [float(r[col]) for r in rows], marker=\".\", label=col)\n";
    if (log_y) out << "    ax.set_yscale(\"log\")\n";
    out << "    ax.set_xlabel(\"eigenvalue index (increasing |lambda|)\")\n"
           "    ax.set_title(name)\n"
           "    ax.legend()\n"
        << "fig.suptitle(\"" << title << "\")\n"
        << "fig.tight_layout()\n"
        << "fig.savefig(os.path.join(here, \"" << title << ".png\"), dpi=150)\n"
        << "print(\"wrote " << title << ".png\")\n";
}

} // namespace detail

/// Forward errors of the four degree-3 companion pencils against the refined
/// reference, one column per pencil, eigenvalues in increasing modulus.
inline ExperimentOutputs run_exp1(const ExperimentConfig& cfg) {
    MatrixPolynomial p = detail::experiment_input(cfg, 30, 3);
    if (p.grade != 3) throw std::invalid_argument("exp1 requires grade 3");
    if (cfg.scaled) p = scale_to_unit_max(p).first;
    const std::vector<std::string> curves =
        cfg.presets.empty() ? detail::default_curves("exp1", 3) : cfg.presets;
    const std::vector<Eigentriple> refs = reference_eigentriples(p);

    std::vector<std::vector<double>> errors(curves.size(),
                                            std::vector<double>(refs.size(),
                                                                std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const EigResult res = eig_with_form(p, preset(p, curves[c]));
        const ForwardErrors fe = forward_errors(res.triples, refs);
        for (const ForwardErrors::Match& m : fe.matches)
            errors[c][static_cast<std::size_t>(m.reference_index)] = m.rel_error;
    }

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string csv_name = "exp1_forward_errors.csv";
    {
        std::ofstream out = open_csv((fs::path(cfg.out_dir) / csv_name).string());
        out << "index,re_lambda,im_lambda";
        for (const std::string& name : curves) out << ",err_" << name;
        out << '\n';
        for (std::size_t i = 0; i < refs.size(); ++i) {
            out << i << ',' << sig17(refs[i].lambda.real()) << ',' << sig17(refs[i].lambda.imag());
            for (std::size_t c = 0; c < curves.size(); ++c) out << ',' << sig17(errors[c][i]);
            out << '\n';
        }
    }
    detail::write_plot_script((fs::path(cfg.out_dir) / "exp1_plot.py").string(), "exp1_forward_errors",
                              {csv_name}, true);
    return {{csv_name, "exp1_plot.py"}};
}

/// Condition ratios of the curve forms against the degree-matched base form,
/// for the unscaled and the scaled polynomial.
inline ExperimentOutputs run_exp2(const ExperimentConfig& cfg) {
    const MatrixPolynomial p = detail::experiment_input(cfg, 10, -1);
    const std::vector<std::string> curves =
        cfg.presets.empty() ? detail::default_curves("exp2", p.grade) : cfg.presets;
    const std::string base = detail::exp2_base(p.grade);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string unscaled_name = "exp2_ratios_unscaled.csv";
    const std::string scaled_name = "exp2_ratios_scaled.csv";
    detail::write_ratio_csv(detail::ratio_table(p, base, curves),
                            (fs::path(cfg.out_dir) / unscaled_name).string());
    detail::write_ratio_csv(detail::ratio_table(scale_to_unit_max(p).first, base, curves),
                            (fs::path(cfg.out_dir) / scaled_name).string());
    detail::write_plot_script((fs::path(cfg.out_dir) / "exp2_plot.py").string(), "exp2_condition_ratios",
                              {unscaled_name, scaled_name}, true);
    return {{unscaled_name, scaled_name, "exp2_plot.py"}};
}

/// Condition ratios of the forms against the polynomial itself, plus the
/// rho factor that governs them, for the unscaled and scaled variants.
inline ExperimentOutputs run_exp3(const ExperimentConfig& cfg) {
    const MatrixPolynomial p = detail::experiment_input(cfg, 10, -1);
    const std::vector<std::string> curves =
        cfg.presets.empty() ? detail::default_curves("exp3", p.grade) : cfg.presets;

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string unscaled_name = "exp3_ratios_unscaled.csv";
    const std::string scaled_name = "exp3_ratios_scaled.csv";
    const MatrixPolynomial scaled = scale_to_unit_max(p).first;
    detail::write_ratio_csv(detail::ratio_table(p, "", curves),
                            (fs::path(cfg.out_dir) / unscaled_name).string());
    detail::write_ratio_csv(detail::ratio_table(scaled, "", curves),
                            (fs::path(cfg.out_dir) / scaled_name).string());
    {
        std::ofstream out = open_csv((fs::path(cfg.out_dir) / "exp3_summary.csv").string());
        out << "variant,rho,max_coeff_norm,min_edge_norm\n";
        const std::pair<const char*, const MatrixPolynomial*> variants[2] = {{"unscaled", &p},
                                                                             {"scaled", &scaled}};
        for (const auto& [label, poly] : variants) {
            const CoeffNormProfile prof = norm_profile(*poly);
            out << label << ',' << sig17(rho(*poly)) << ',' << sig17(prof.max_norm) << ','
                << sig17(prof.min_edge) << '\n';
        }
    }
    detail::write_plot_script((fs::path(cfg.out_dir) / "exp3_plot.py").string(),
                              "exp3_condition_ratios", {unscaled_name, scaled_name}, true);
    return {{unscaled_name, scaled_name, "exp3_summary.csv", "exp3_plot.py"}};
}

inline ExperimentOutputs run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.id == "exp1") return run_exp1(cfg);
    if (cfg.id == "exp2") return run_exp2(cfg);
    return run_exp3(cfg);
}

} // namespace kroncond
