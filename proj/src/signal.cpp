#include "asthmon/signal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "asthmon/error.hpp"
#include "asthmon/fft.hpp"

namespace asthmon {

const char* to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::Rectangular: return "rectangular";
        case WindowKind::Hamming: return "hamming";
        case WindowKind::Hann: return "hann";
    }
    return "?";
}

WindowKind window_kind_from_string(const std::string& name) {
    if (name == "rectangular") return WindowKind::Rectangular;
    if (name == "hamming") return WindowKind::Hamming;
    if (name == "hann") return WindowKind::Hann;
    throw DataError("unknown window kind '" + name + "' (rectangular|hamming|hann)");
}

void StftConfig::validate() const {
    if (frame_len <= 0 || !is_power_of_two(static_cast<std::size_t>(frame_len))) {
        throw DataError("stft.frame_len must be a positive power of two");
    }
    if (hop <= 0 || hop > frame_len) {
        throw DataError("stft.hop must satisfy 0 < hop <= frame_len");
    }
}

namespace {

void check_audio(const AudioBuffer& buf) {
    if (buf.samples.empty()) throw DataError("audio buffer is empty");
    if (buf.sample_rate_hz <= 0) throw DataError("audio sample rate must be positive");
    for (double s : buf.samples) {
        if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
            throw DataError("audio sample out of range [-1, 1] or non-finite");
        }
    }
}

int frame_count(std::size_t len, const StftConfig& cfg) {
    if (len < static_cast<std::size_t>(cfg.frame_len)) {
        throw DataError("insufficient samples: need at least " +
                        std::to_string(cfg.frame_len) + ", got " + std::to_string(len));
    }
    return static_cast<int>((len - cfg.frame_len) / cfg.hop) + 1;
}

}  // namespace

std::vector<std::vector<double>> frame_signal(const AudioBuffer& buf, const StftConfig& cfg) {
    cfg.validate();
    check_audio(buf);
    const int n = frame_count(buf.samples.size(), cfg);
    std::vector<std::vector<double>> frames;
    frames.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto begin = buf.samples.begin() + static_cast<std::ptrdiff_t>(i) * cfg.hop;
        frames.emplace_back(begin, begin + cfg.frame_len);
    }
    return frames;
}

std::vector<double> window_coefficients(WindowKind kind, int len) {
    if (len <= 0) throw DataError("window length must be positive");
    std::vector<double> w(static_cast<std::size_t>(len), 1.0);
    if (kind == WindowKind::Rectangular || len == 1) return w;
    const double denom = static_cast<double>(len - 1);
    for (int n = 0; n < len; ++n) {
        const double phase = 2.0 * M_PI * n / denom;
        if (kind == WindowKind::Hamming) {
            w[static_cast<std::size_t>(n)] = 0.54 - 0.46 * std::cos(phase);
        } else {  // Hann
            w[static_cast<std::size_t>(n)] = 0.5 * (1.0 - std::cos(phase));
        }
    }
    return w;
}

std::vector<double> apply_window(std::span<const double> frame, WindowKind kind) {
    const auto coeffs = window_coefficients(kind, static_cast<int>(frame.size()));
    std::vector<double> out(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) out[i] = frame[i] * coeffs[i];
    return out;
}

Spectrogram stft(const AudioBuffer& buf, const StftConfig& cfg) {
    cfg.validate();
    check_audio(buf);
    const int frames = frame_count(buf.samples.size(), cfg);
    const int n = cfg.frame_len;
    const int bins = n / 2 + 1;

    Spectrogram spec;
    spec.frames = frames;
    spec.bins = bins;
    spec.sample_rate_hz = buf.sample_rate_hz;
    spec.frame_len = n;
    spec.hop = cfg.hop;
    spec.magnitudes.assign(static_cast<std::size_t>(frames) * bins, 0.0);
    spec.frame_times_s.resize(static_cast<std::size_t>(frames));
    spec.bin_freqs_hz.resize(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k) {
        spec.bin_freqs_hz[static_cast<std::size_t>(k)] =
            static_cast<double>(k) * buf.sample_rate_hz / n;
    }

    const auto coeffs = window_coefficients(cfg.window, n);
    const Fft plan(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> work(static_cast<std::size_t>(n));

    for (int m = 0; m < frames; ++m) {
        const std::size_t offset = static_cast<std::size_t>(m) * cfg.hop;
        spec.frame_times_s[static_cast<std::size_t>(m)] =
            static_cast<double>(offset) / buf.sample_rate_hz;
        for (int i = 0; i < n; ++i) {
            work[static_cast<std::size_t>(i)] = {
                buf.samples[offset + static_cast<std::size_t>(i)] *
                    coeffs[static_cast<std::size_t>(i)],
                0.0};
        }
        plan.forward(work);
        double* row = spec.magnitudes.data() + static_cast<std::size_t>(m) * bins;
        for (int k = 0; k < bins; ++k) row[k] = std::abs(work[static_cast<std::size_t>(k)]);
    }
    return spec;
}

Envelope band_power_envelope(const Spectrogram& spec, double low_hz, double high_hz) {
    if (!(low_hz < high_hz)) throw DataError("envelope band: low must be below high");
    const double nyquist = spec.sample_rate_hz / 2.0;
    if (low_hz < 0.0 || high_hz > nyquist) {
        throw DataError("envelope band must lie within [0, Nyquist]");
    }
    std::vector<int> band;
    for (int k = 0; k < spec.bins; ++k) {
        const double f = spec.bin_freqs_hz[static_cast<std::size_t>(k)];
        if (f >= low_hz && f <= high_hz) band.push_back(k);
    }
    if (band.empty()) throw DataError("envelope band captures no spectrogram bins");

    Envelope env;
    env.band_low_hz = low_hz;
    env.band_high_hz = high_hz;
    env.values.resize(static_cast<std::size_t>(spec.frames));
    for (int m = 0; m < spec.frames; ++m) {
        double acc = 0.0;
        for (int k : band) {
            const double v = spec.mag(m, k);
            acc += v * v;
        }
        env.values[static_cast<std::size_t>(m)] = acc;
    }
    return env;
}

std::vector<double> moving_average(const std::vector<double>& values, int width) {
    if (width < 2 || values.size() < 2) return values;
    const int n = static_cast<int>(values.size());
    const int left = (width - 1) / 2;
    const int right = width - 1 - left;
    std::vector<double> out(values.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - left);
        const int hi = std::min(n - 1, i + right);
        double acc = 0.0;
        for (int j = lo; j <= hi; ++j) acc += values[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc / (hi - lo + 1);
    }
    return out;
}

std::vector<int> local_minima(const Envelope& env, int min_separation_frames,
                              int smoothing_frames) {
    if (env.values.empty()) throw DataError("envelope is empty");
    const auto smoothed = moving_average(env.values, smoothing_frames);
    const int n = static_cast<int>(smoothed.size());
    std::vector<int> out;
    int last = -1;
    for (int i = 1; i + 1 < n; ++i) {
        const double v = smoothed[static_cast<std::size_t>(i)];
        const double a = smoothed[static_cast<std::size_t>(i - 1)];
        const double b = smoothed[static_cast<std::size_t>(i + 1)];
        if (v <= a && v <= b && (v < a || v < b)) {
            if (last < 0 || i - last >= std::max(1, min_separation_frames)) {
                out.push_back(i);
                last = i;
            }
        }
    }
    return out;
}

}  // namespace asthmon
