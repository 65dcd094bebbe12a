#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace asthmon {

/// Iterative radix-2 FFT plan for a fixed power-of-two size. The twiddle
/// factors and bit-reversal table are precomputed once, so transforming many
/// frames of the same length amortizes to the butterfly work only.
class Fft {
public:
    explicit Fft(std::size_t n);  // throws DataError unless n is a power of two

    std::size_t size() const { return n_; }

    /// In-place transform; data.size() must equal size().
    void forward(std::span<std::complex<double>> data) const;
    void inverse(std::span<std::complex<double>> data) const;  // includes 1/n scaling

private:
    void transform(std::span<std::complex<double>> data, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddle_;  // e^(-i*2*pi*k/n), k in [0, n/2)
};

bool is_power_of_two(std::size_t n);

}  // namespace asthmon
