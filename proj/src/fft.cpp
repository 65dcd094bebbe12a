#include "asthmon/fft.hpp"

#include <cmath>

#include "asthmon/error.hpp"

namespace asthmon {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw DataError("FFT size must be a power of two, got " + std::to_string(n));
    }
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < log2n; ++b) {
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
        }
        bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
    }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
    if (data.size() != n_) {
        throw DataError("FFT input length " + std::to_string(data.size()) +
                        " does not match plan size " + std::to_string(n_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t stride = n_ / len;
        for (std::size_t base = 0; base < n_; base += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = twiddle_[k * stride];
                if (inverse) w = std::conj(w);
                std::complex<double> u = data[base + k];
                std::complex<double> v = data[base + k + len / 2] * w;
                data[base + k] = u + v;
                data[base + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& x : data) x *= scale;
    }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }

void Fft::inverse(std::span<std::complex<double>> data) const { transform(data, true); }

}  // namespace asthmon
