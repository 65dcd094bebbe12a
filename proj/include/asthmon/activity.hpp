#pragma once

#include <span>
#include <vector>

namespace asthmon {

/// One IMU reading: linear (gravity-removed) acceleration in m/s^2 plus
/// orientation in degrees within [-180, 180].
struct ImuSample {
    double t_ms = 0.0;
    double ax = 0.0, ay = 0.0, az = 0.0;
    double pitch_deg = 0.0, roll_deg = 0.0, yaw_deg = 0.0;
};

enum class ActivityLevel { Stationary, Ambulatory };
enum class Posture { Upright, ForwardLean, SideTilt, Lying, Unknown };

const char* to_string(ActivityLevel level);
const char* to_string(Posture posture);

struct ActivityConfig {
    double sample_rate_hz = 50.0;
    int window_len = 128;  // samples per window (2.56 s at 50 Hz)
    int stride = 64;       // 50% overlap
    double am_threshold = 0.5;  // m/s^2; AM above this means Ambulatory

    void validate() const;
};

struct PostureConfig {
    double lean_deg = 20.0;
    double tilt_deg = 20.0;
    double lying_deg = 60.0;
    double dwell_s = 3.0;     // lean/tilt must persist this long
    double baseline_s = 2.0;  // calibration span at trace start

    void validate() const;
};

/// One analysis window with its feature values.
struct ActivityWindow {
    int start_index = 0;
    std::vector<double> mi_series;
    double sma = 0.0;
    double am = 0.0;
};

struct ActivityState {
    ActivityLevel level = ActivityLevel::Stationary;
    double am_value = 0.0;
    Posture posture = Posture::Unknown;
    double t_end_ms = 0.0;
};

/// Reference orientation captured at the start of a session.
struct OrientationBaseline {
    double pitch_deg = 0.0;
    double roll_deg = 0.0;
    bool valid = false;
};

/// Resultant acceleration magnitude sqrt(ax^2 + ay^2 + az^2).
double movement_intensity(const ImuSample& s);

/// Mean of summed per-axis absolute accelerations over the window.
double signal_magnitude_area(std::span<const ImuSample> window);

/// Mean absolute deviation of per-sample movement intensity from the
/// window's signal magnitude area.
double average_motion(std::span<const ImuSample> window);

/// Ambulatory iff am strictly exceeds the threshold.
ActivityLevel classify_activity(double am, double threshold);

/// Shortest signed angular difference a - b, wrapped into [-180, 180].
double angle_diff_deg(double a, double b);

/// Baseline from the first baseline_s seconds of the trace (circular mean).
OrientationBaseline estimate_baseline(std::span<const ImuSample> trace, double baseline_s);

/// Trunk posture at the end of the history. Lying is judged on the current
/// pitch deviation alone; ForwardLean and SideTilt require the deviation to
/// persist for dwell_s. Precedence: Lying > ForwardLean > SideTilt > Upright.
/// An invalid baseline yields Unknown.
Posture posture_state(std::span<const ImuSample> history, const OrientationBaseline& baseline,
                      const PostureConfig& cfg);

std::vector<ActivityWindow> make_windows(std::span<const ImuSample> trace,
                                         const ActivityConfig& cfg);

/// Full trace analysis: windowed AM classification plus the posture state as
/// of each window's end.
std::vector<ActivityState> analyze_trace(std::span<const ImuSample> trace,
                                         const ActivityConfig& acfg,
                                         const PostureConfig& pcfg);

/// Session-level summary used by the fact builder: median window AM,
/// classified at the same threshold, with the final window's posture.
ActivityState summarize_states(const std::vector<ActivityState>& states,
                               const ActivityConfig& cfg);

}  // namespace asthmon
