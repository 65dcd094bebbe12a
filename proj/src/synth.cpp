#include "asthmon/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <sstream>

#include "asthmon/error.hpp"
#include "asthmon/fft.hpp"
#include "asthmon/rng.hpp"
#include "asthmon/textfmt.hpp"

namespace asthmon {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kNoiseBandLowHz = 100.0;
constexpr double kNoiseBandHighHz = 1200.0;
constexpr double kBreathNoiseRms = 0.05;
constexpr double kToneEdgeRampS = 0.005;

/// Band-limits white noise by zeroing out-of-band FFT bins. The buffer is
/// padded to the next power of two and truncated back afterwards.
std::vector<double> band_limited_noise(std::size_t len, double low_hz, double high_hz,
                                       int sample_rate_hz, Rng& rng) {
    std::size_t padded = 1;
    while (padded < len) padded <<= 1;
    std::vector<std::complex<double>> spec(padded);
    for (std::size_t i = 0; i < len; ++i) spec[i] = {rng.gaussian(), 0.0};

    const Fft plan(padded);
    plan.forward(spec);
    const double df = static_cast<double>(sample_rate_hz) / static_cast<double>(padded);
    for (std::size_t k = 0; k < padded; ++k) {
        const std::size_t sym = k <= padded / 2 ? k : padded - k;
        const double f = static_cast<double>(sym) * df;
        if (f < low_hz || f > high_hz) spec[k] = 0.0;
    }
    plan.inverse(spec);

    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = spec[i].real();
    return out;
}

double rms_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += v[i] * v[i];
    return std::sqrt(acc / static_cast<double>(hi - lo));
}

}  // namespace

SynthClip synth_breath(const BreathSynthSpec& spec) {
    if (spec.cycle_s <= 0.0 || spec.cycles < 1) {
        throw DataError("breath spec needs a positive cycle length and at least one cycle");
    }
    const int rate = kCanonicalSampleRateHz;
    const double total_s = spec.cycle_s * spec.cycles;
    const std::size_t len = static_cast<std::size_t>(std::llround(total_s * rate));
    if (len == 0) throw DataError("breath spec produces no samples");

    if (spec.wheeze) {
        const auto& w = *spec.wheeze;
        if (w.dur_s <= 0.0 || w.freq_hz <= 0.0) {
            throw DataError("wheeze spec needs positive duration and frequency");
        }
        // The interval must sit inside one exhalation phase (second half of
        // some cycle).
        const double end_s = w.onset_s + w.dur_s;
        const int cycle = static_cast<int>(std::floor(w.onset_s / spec.cycle_s));
        const double exhale_start = cycle * spec.cycle_s + spec.cycle_s / 2.0;
        const double exhale_end = (cycle + 1) * spec.cycle_s;
        if (cycle < 0 || cycle >= spec.cycles || w.onset_s < exhale_start - 1e-9 ||
            end_s > exhale_end + 1e-9) {
            throw DataError("wheeze interval outside an exhalation phase");
        }
    }

    Rng rng(spec.seed);
    auto noise = band_limited_noise(len, kNoiseBandLowHz, kNoiseBandHighHz, rate, rng);
    const double raw_rms = rms_of(noise, 0, len);
    const double noise_gain = raw_rms > 0.0 ? kBreathNoiseRms / raw_rms : 0.0;

    std::vector<double> samples(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double phase = std::fmod(t, spec.cycle_s) / spec.cycle_s;
        const double env = std::sin(M_PI * phase);  // raised cosine per cycle
        samples[i] = noise[i] * noise_gain * env * env;
    }

    SynthClip clip;
    if (spec.wheeze) {
        const auto& w = *spec.wheeze;
        const std::size_t lo = static_cast<std::size_t>(std::llround(w.onset_s * rate));
        const std::size_t hi =
            std::min(len, static_cast<std::size_t>(std::llround((w.onset_s + w.dur_s) * rate)));
        const double local_rms = rms_of(samples, lo, hi);
        const double gain_db = spec.snr_db + w.level_db;
        const double tone_rms = local_rms * std::pow(10.0, gain_db / 20.0);
        const double amp = tone_rms * std::sqrt(2.0);
        const std::size_t ramp = static_cast<std::size_t>(kToneEdgeRampS * rate);
        for (std::size_t i = lo; i < hi; ++i) {
            const double t = static_cast<double>(i) / rate;
            double taper = 1.0;
            if (ramp > 0 && i - lo < ramp) {
                taper = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(i - lo) / ramp));
            } else if (ramp > 0 && hi - 1 - i < ramp) {
                taper = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(hi - 1 - i) / ramp));
            }
            double tone = amp * std::sin(kTwoPi * w.freq_hz * t);
            if (w.second_harmonic) {
                tone += 0.5 * amp * std::sin(kTwoPi * 2.0 * w.freq_hz * t);
            }
            samples[i] += taper * tone;
        }
        clip.labels.push_back({w.onset_s * 1000.0, (w.onset_s + w.dur_s) * 1000.0, w.freq_hz});
    }

    // Keep samples inside [-1, 1]; scaling the whole clip preserves the SNR.
    double peak = 0.0;
    for (double s : samples) peak = std::max(peak, std::fabs(s));
    if (peak > 0.99) {
        const double g = 0.99 / peak;
        for (auto& s : samples) s *= g;
    }

    clip.audio.samples = std::move(samples);
    clip.audio.sample_rate_hz = rate;
    return clip;
}

const char* to_string(ImuProfile profile) {
    switch (profile) {
        case ImuProfile::Sitting: return "Sitting";
        case ImuProfile::Standing: return "Standing";
        case ImuProfile::Walking: return "Walking";
        case ImuProfile::Jogging: return "Jogging";
        case ImuProfile::ForwardLeanEpisode: return "ForwardLeanEpisode";
    }
    return "?";
}

ImuProfile imu_profile_from_string(const std::string& name) {
    if (name == "Sitting") return ImuProfile::Sitting;
    if (name == "Standing") return ImuProfile::Standing;
    if (name == "Walking") return ImuProfile::Walking;
    if (name == "Jogging") return ImuProfile::Jogging;
    if (name == "ForwardLeanEpisode") return ImuProfile::ForwardLeanEpisode;
    throw DataError("unknown IMU profile '" + name + "'");
}

std::vector<ImuSample> synth_imu(ImuProfile profile, double duration_s, std::uint64_t seed) {
    if (duration_s <= 0.0) throw DataError("IMU trace duration must be positive");
    const double rate = 50.0;
    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * rate));
    Rng rng(seed);

    double noise_sigma = 0.02;
    double swing_amp = 0.0, swing_hz = 0.0;
    switch (profile) {
        case ImuProfile::Sitting: noise_sigma = 0.02; break;
        case ImuProfile::Standing: noise_sigma = 0.04; break;
        case ImuProfile::Walking:
            noise_sigma = 0.2;
            swing_amp = 2.0;
            swing_hz = 1.5;
            break;
        case ImuProfile::Jogging:
            noise_sigma = 0.3;
            swing_amp = 4.0;
            swing_hz = 2.5;
            break;
        case ImuProfile::ForwardLeanEpisode: noise_sigma = 0.03; break;
    }

    std::vector<ImuSample> trace;
    trace.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate;
        ImuSample s;
        s.t_ms = t * 1000.0;
        const double swing = swing_amp * std::sin(kTwoPi * swing_hz * t);
        s.ax = noise_sigma * rng.gaussian();
        s.ay = swing + noise_sigma * rng.gaussian();          // vertical bounce
        s.az = 0.25 * swing + noise_sigma * rng.gaussian();   // forward component
        s.pitch_deg = 0.5 * rng.gaussian();
        s.roll_deg = 0.5 * rng.gaussian();
        s.yaw_deg = 0.0;
        if (profile == ImuProfile::ForwardLeanEpisode) {
            // Pitch ramps by 30 degrees between t=2s and t=4s, then holds.
            const double ramp = std::clamp((t - 2.0) / 2.0, 0.0, 1.0);
            s.pitch_deg += 30.0 * ramp;
        }
        trace.push_back(s);
    }
    return trace;
}

std::string format_labels(const std::vector<WheezeLabel>& labels) {
    std::string out;
    for (const auto& l : labels) {
        out += fmt_fixed(l.start_ms, 3) + " " + fmt_fixed(l.end_ms, 3) + " " +
               fmt_fixed(l.freq_hz, 3) + "\n";
    }
    return out;
}

std::vector<WheezeLabel> parse_labels(const std::string& text) {
    std::vector<WheezeLabel> labels;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream fields(line);
        double a, b, f;
        if (!(fields >> a)) continue;  // blank line
        if (!(fields >> b >> f)) {
            throw ParseError("label line needs `start_ms end_ms freq_hz`", line_no);
        }
        if (b <= a) throw ParseError("label end must follow start", line_no);
        labels.push_back({a, b, f});
    }
    return labels;
}

}  // namespace asthmon
