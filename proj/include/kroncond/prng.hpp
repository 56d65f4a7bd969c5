#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace kroncond {

// Counter-based 64-bit PRNG: the splitmix64 finalizer applied to an
// incrementing counter. Every draw is a pure function of (seed, draw index),
// so streams reproduce bit-identically across platforms and compilers.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never 0, so it is safe under log().
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi] (inclusive).
    int next_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    // Standard complex Gaussian: real and imaginary parts independent N(0,1).
    // Consumes exactly two uniforms (u1, u2); Box-Muller with the cosine
    // branch feeding the real part and the sine branch the imaginary part.
    std::complex<double> next_complex_gaussian() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::uint64_t state_;
};

// Derives an independent stream for a substream index (trial number,
// coefficient index, ...) without correlating neighbouring seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace kroncond
