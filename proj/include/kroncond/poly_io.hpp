#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "matpoly.hpp"

namespace kroncond {

// Text format:
//   matpoly v1 n=<n> grade=<d>
//   coeff 0
//   <re>+<im>i ... (n entries per line, n lines)
//   coeff 1
//   ...
// Entries carry 17 significant digits so the round-trip is lossless.

inline std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline Complex parse_complex(const std::string& tok) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double re = std::strtod(s, &end);
    if (end == s) throw std::runtime_error("bad complex entry: " + tok);
    const char* s2 = end;
    const double im = std::strtod(s2, &end);
    if (end == s2 || *end != 'i')
        throw std::runtime_error("bad complex entry: " + tok);
    return {re, im};
}

inline void write_poly(const MatrixPolynomial& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "matpoly v1 n=" << p.n << " grade=" << p.grade << "\n";
    for (int i = 0; i <= p.grade; ++i) {
        out << "coeff " << i << "\n";
        const CMatrix& a = p.coeffs[static_cast<std::size_t>(i)];
        for (int r = 0; r < p.n; ++r) {
            for (int c = 0; c < p.n; ++c) {
                if (c) out << ' ';
                out << format_complex(a(r, c));
            }
            out << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline MatrixPolynomial read_poly_text(std::istream& in, const std::string& origin) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty polynomial file: " + origin);
    int n = 0, grade = -1;
    if (std::sscanf(header.c_str(), "matpoly v1 n=%d grade=%d", &n, &grade) != 2)
        throw std::runtime_error("bad matpoly header in " + origin);
    if (n < 1 || grade < 0) throw std::runtime_error("bad matpoly dimensions in " + origin);
    std::vector<CMatrix> coeffs(static_cast<std::size_t>(grade) + 1, CMatrix::Zero(n, n));
    std::string line;
    for (int i = 0; i <= grade; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated polynomial file: " + origin);
        int idx = -1;
        if (std::sscanf(line.c_str(), "coeff %d", &idx) != 1 || idx != i)
            throw std::runtime_error("expected 'coeff " + std::to_string(i) + "' in " + origin);
        CMatrix& a = coeffs[static_cast<std::size_t>(i)];
        for (int r = 0; r < n; ++r) {
            if (!std::getline(in, line)) throw std::runtime_error("truncated polynomial file: " + origin);
            std::istringstream row(line);
            std::string tok;
            for (int c = 0; c < n; ++c) {
                if (!(row >> tok)) throw std::runtime_error("short row in " + origin);
                a(r, c) = parse_complex(tok);
            }
        }
    }
    return MatrixPolynomial(n, std::move(coeffs));
}

// --- Matrix Market ---------------------------------------------------------

inline CMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string banner;
    if (!std::getline(in, banner)) throw std::runtime_error("empty file: " + path);
    std::istringstream bs(banner);
    std::string tag, object, format, field, symmetry;
    bs >> tag >> object >> format >> field >> symmetry;
    for (auto* s : {&object, &format, &field, &symmetry})
        for (char& c : *s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (tag != "%%MatrixMarket" || object != "matrix")
        throw std::runtime_error("not a Matrix Market matrix: " + path);
    const bool coordinate = format == "coordinate";
    if (!coordinate && format != "array")
        throw std::runtime_error("unsupported Matrix Market format in " + path);
    const bool complex_field = field == "complex";
    if (!complex_field && field != "real" && field != "integer")
        throw std::runtime_error("unsupported Matrix Market field in " + path);

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sz(line);
    long rows = 0, cols = 0, nnz = 0;
    if (coordinate) {
        if (!(sz >> rows >> cols >> nnz)) throw std::runtime_error("bad size line in " + path);
    } else {
        if (!(sz >> rows >> cols)) throw std::runtime_error("bad size line in " + path);
    }
    CMatrix a = CMatrix::Zero(rows, cols);
    const auto place = [&](long r, long c, Complex v) {
        a(r, c) = v;
        if (r != c) {
            if (symmetry == "symmetric") a(c, r) = v;
            else if (symmetry == "hermitian") a(c, r) = std::conj(v);
            else if (symmetry == "skew-symmetric") a(c, r) = -v;
        }
    };
    if (coordinate) {
        for (long e = 0; e < nnz; ++e) {
            long r, c;
            double re, im = 0.0;
            if (!(in >> r >> c >> re)) throw std::runtime_error("truncated entries in " + path);
            if (complex_field && !(in >> im)) throw std::runtime_error("truncated entries in " + path);
            place(r - 1, c - 1, Complex(re, im));
        }
    } else {
        // array format is column-major over the stored triangle/full matrix
        for (long c = 0; c < cols; ++c) {
            const long r0 = symmetry == "general" ? 0 : c;
            for (long r = r0; r < rows; ++r) {
                double re, im = 0.0;
                if (!(in >> re)) throw std::runtime_error("truncated entries in " + path);
                if (complex_field && !(in >> im)) throw std::runtime_error("truncated entries in " + path);
                place(r, c, Complex(re, im));
            }
        }
    }
    return a;
}

/// Ingests a directory holding per-coefficient files A0.mtx ... Ad.mtx.
/// A missing index is treated as the zero coefficient (with a warning).
inline MatrixPolynomial read_poly_mm_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    std::map<int, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        int idx = -1;
        if (std::sscanf(name.c_str(), "A%d.mtx", &idx) == 1 && idx >= 0)
            files[idx] = entry.path().string();
    }
    if (files.empty())
        throw std::runtime_error("no A<k>.mtx coefficient files in " + dir);
    const int grade = files.rbegin()->first;
    int n = -1;
    std::vector<CMatrix> coeffs;
    for (int i = 0; i <= grade; ++i) {
        auto it = files.find(i);
        if (it == files.end()) {
            std::cerr << "warning: " << dir << " has no A" << i
                      << ".mtx; treating coefficient " << i << " as zero\n";
            coeffs.push_back(CMatrix::Zero(std::max(n, 1), std::max(n, 1)));
            continue;
        }
        CMatrix a = read_matrix_market(it->second);
        if (a.rows() != a.cols())
            throw std::runtime_error("coefficient is not square: " + it->second);
        if (n < 0) {
            n = static_cast<int>(a.rows());
            for (CMatrix& z : coeffs) z = CMatrix::Zero(n, n);
        } else if (a.rows() != n) {
            throw std::runtime_error("coefficient size mismatch in " + it->second);
        }
        coeffs.push_back(std::move(a));
    }
    return MatrixPolynomial(n, std::move(coeffs));
}

/// Reads a polynomial from the text format, or from a directory of
/// Matrix-Market coefficient files when `path` names a directory.
inline MatrixPolynomial read_poly(const std::string& path) {
    if (std::filesystem::is_directory(path)) return read_poly_mm_dir(path);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_poly_text(in, path);
}

} // namespace kroncond
