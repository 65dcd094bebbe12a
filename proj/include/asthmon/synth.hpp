#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asthmon/activity.hpp"
#include "asthmon/signal.hpp"

namespace asthmon {

/// Tonal component injected into a synthetic breath clip.
struct WheezeSpec {
    double onset_s = 0.0;
    double dur_s = 0.5;
    double freq_hz = 400.0;
    double level_db = 0.0;  // extra gain on top of the clip snr_db
    bool second_harmonic = true;  // adds freq*2 at -6 dB
};

/// Recipe for one synthetic clip. The same spec and seed always produce a
/// bit-identical buffer (mt19937_64 driven, no platform-dependent paths).
struct BreathSynthSpec {
    double cycle_s = 2.5;
    int cycles = 2;
    std::optional<WheezeSpec> wheeze;
    double snr_db = 10.0;  // tone RMS over breath-noise RMS inside the interval
    std::uint64_t seed = 0;
};

/// Ground-truth wheeze interval, serialized as `start_ms end_ms freq_hz`.
struct WheezeLabel {
    double start_ms = 0.0;
    double end_ms = 0.0;
    double freq_hz = 0.0;
};

struct SynthClip {
    AudioBuffer audio;
    std::vector<WheezeLabel> labels;
};

/// Breath noise is band-limited (100-1200 Hz) Gaussian noise under a
/// raised-cosine envelope per cycle; the optional wheeze tone is mixed at
/// snr_db during its interval, which must sit inside one exhalation phase
/// (second half of a cycle). Throws DataError otherwise.
SynthClip synth_breath(const BreathSynthSpec& spec);

enum class ImuProfile { Sitting, Standing, Walking, Jogging, ForwardLeanEpisode };

const char* to_string(ImuProfile profile);
ImuProfile imu_profile_from_string(const std::string& name);  // throws DataError

/// Deterministic 50 Hz IMU trace for the named scenario.
std::vector<ImuSample> synth_imu(ImuProfile profile, double duration_s, std::uint64_t seed);

/// Label sidecar format: one `start_ms end_ms freq_hz` line per wheeze.
std::string format_labels(const std::vector<WheezeLabel>& labels);
std::vector<WheezeLabel> parse_labels(const std::string& text);  // throws ParseError

}  // namespace asthmon
