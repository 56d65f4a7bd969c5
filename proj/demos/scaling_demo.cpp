// Minimal tour: build a badly-scaled polynomial, compare the coefficientwise
// conditioning of a quadratification against the Frobenius pencil, and watch
// scaling collapse the ratio spread.

#include <iostream>

#include <kroncond/conditioning.hpp>

using namespace kroncond;

namespace {

void print_ratios(const MatrixPolynomial& p, const char* label) {
    const BlockKroneckerForm frob = frobenius1(p);
    const BlockKroneckerForm quad = exp2_Q(p);
    const FormNorms nf = form_norms(frob), nq = form_norms(quad);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const Eigentriple& t : reference_eigentriples(p)) {
        if (!t.converged || t.simplicity_margin < 1e-8) continue;
        const double ratio = coeff_cond_form(quad, nq, t) / coeff_cond_form(frob, nf, t);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    std::cout << label << ": rho(P) = " << rho(p) << ", quad/frobenius cond ratios in ["
              << lo << ", " << hi << "]\n";
}

} // namespace

int main() {
    const MatrixPolynomial p = badly_scaled_poly(8, 2024);
    print_ratios(p, "unscaled");
    print_ratios(scale_to_unit_max(p).first, "scaled  ");
    return 0;
}
