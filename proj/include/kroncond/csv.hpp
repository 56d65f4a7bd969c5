#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "conditioning.hpp"
#include "verify.hpp"

namespace kroncond {

// CSV emission. Floats carry 17 significant digits so identical runs produce
// byte-identical files.

inline std::string sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

inline void write_eigentriples_csv(const std::vector<Eigentriple>& triples, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "index,re_lambda,im_lambda,residual_right,residual_left,simplicity_margin\n";
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const Eigentriple& t = triples[i];
        out << i << ',' << sig17(t.lambda.real()) << ',' << sig17(t.lambda.imag()) << ','
            << sig17(t.residual_right) << ',' << sig17(t.residual_left) << ','
            << sig17(t.simplicity_margin) << '\n';
    }
}

inline void write_condition_csv(const std::vector<ConditionReport>& reports, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "index,re_lambda,im_lambda,coeff_cond_P,norm_cond_P,coeff_cond_form,"
           "ratio_coeff,ratio_norm,bound_coeff,bound_norm\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const ConditionReport& r = reports[i];
        out << i << ',' << sig17(r.lambda.real()) << ',' << sig17(r.lambda.imag()) << ','
            << sig17(r.coeff_cond_P) << ',' << sig17(r.norm_cond_P) << ','
            << sig17(r.coeff_cond_form) << ',' << sig17(r.ratio_coeff) << ','
            << sig17(r.ratio_norm) << ',' << sig17(r.bound_coeff) << ',' << sig17(r.bound_norm)
            << '\n';
    }
}

inline void write_suite_csv(const SuiteReport& report, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "check,pass,fail,worst_utilization,offending_seeds\n";
    for (const CheckResult& c : report.checks) {
        out << c.name << ',' << c.pass << ',' << c.fail << ',' << sig17(c.worst) << ',';
        for (std::size_t i = 0; i < c.offending_seeds.size(); ++i) {
            if (i) out << '|';
            out << c.offending_seeds[i];
        }
        out << '\n';
    }
}

} // namespace kroncond
