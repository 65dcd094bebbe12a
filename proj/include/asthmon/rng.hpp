#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace asthmon {

/// Deterministic random source for the synthetic generators.
///
/// mt19937_64 is fully specified by the standard, but the standard
/// distributions are not; the mappings below are explicit so the same seed
/// yields bit-identical streams on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [lo, hi], both inclusive.
    int uniform_int(int lo, int hi) {
        int span = hi - lo + 1;
        int v = static_cast<int>(uniform() * span);
        return lo + (v < span ? v : span - 1);
    }

    /// Standard normal via Box-Muller (cosine branch only; no cached spare).
    double gaussian() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace asthmon
