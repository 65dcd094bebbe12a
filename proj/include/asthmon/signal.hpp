#pragma once

#include <span>
#include <string>
#include <vector>

namespace asthmon {

/// Canonical audio rate for the whole pipeline. Files at other rates are
/// rejected at ingest rather than resampled.
inline constexpr int kCanonicalSampleRateHz = 8000;

/// Mono PCM recording, samples normalized into [-1, 1].
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate_hz = kCanonicalSampleRateHz;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

enum class WindowKind { Rectangular, Hamming, Hann };

const char* to_string(WindowKind kind);
WindowKind window_kind_from_string(const std::string& name);  // throws DataError

struct StftConfig {
    int frame_len = 1024;  // samples per frame, power of two
    int hop = 512;         // samples between frame starts, 0 < hop <= frame_len
    WindowKind window = WindowKind::Hamming;

    void validate() const;  // throws DataError on violation
};

/// Time-frequency magnitude grid. Row-major: frame index is the slow axis.
/// Only bins 0..frame_len/2 are kept (real-input symmetry).
struct Spectrogram {
    int frames = 0;
    int bins = 0;  // frame_len/2 + 1
    int sample_rate_hz = kCanonicalSampleRateHz;
    int frame_len = 0;
    int hop = 0;
    std::vector<double> magnitudes;     // frames * bins
    std::vector<double> frame_times_s;  // start time of each frame
    std::vector<double> bin_freqs_hz;   // k * sample_rate / frame_len

    double mag(int frame, int bin) const {
        return magnitudes[static_cast<std::size_t>(frame) * bins + bin];
    }
    std::span<const double> frame_row(int frame) const {
        return {magnitudes.data() + static_cast<std::size_t>(frame) * bins,
                static_cast<std::size_t>(bins)};
    }
    /// Seconds between consecutive frame starts.
    double frame_step_s() const {
        return static_cast<double>(hop) / sample_rate_hz;
    }
};

/// Per-frame power summed over one analysis band.
struct Envelope {
    std::vector<double> values;
    double band_low_hz = 0.0;
    double band_high_hz = 0.0;
};

/// Splits the buffer into hop-spaced frames of frame_len samples. A trailing
/// partial frame is dropped; frame count = floor((len - frame_len)/hop) + 1.
/// Throws DataError("insufficient samples") when not even one frame fits.
std::vector<std::vector<double>> frame_signal(const AudioBuffer& buf, const StftConfig& cfg);

std::vector<double> window_coefficients(WindowKind kind, int len);

/// Element-wise product of the frame with the named window.
std::vector<double> apply_window(std::span<const double> frame, WindowKind kind);

/// Windowed DFT magnitudes per frame: |sum_n s[n] w[n-m] e^(-j 2 pi k n / N)|.
Spectrogram stft(const AudioBuffer& buf, const StftConfig& cfg);

/// Sum of squared magnitudes per frame over bins whose center frequency lies
/// in [low_hz, high_hz]. Throws DataError if the band captures no bins.
Envelope band_power_envelope(const Spectrogram& spec, double low_hz, double high_hz);

/// Centered moving average; width < 2 is the identity. Edges shrink the
/// window to what is in range.
std::vector<double> moving_average(const std::vector<double>& values, int width);

/// Valley indices of the smoothed envelope: interior points no greater than
/// either neighbor and strictly below at least one (so a constant stretch
/// yields nothing). Greedy left-to-right thinning enforces the minimum
/// separation; on conflicts the earlier index wins.
std::vector<int> local_minima(const Envelope& env, int min_separation_frames,
                              int smoothing_frames);

}  // namespace asthmon
