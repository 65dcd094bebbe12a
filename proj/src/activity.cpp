#include "asthmon/activity.hpp"

#include <algorithm>
#include <cmath>

#include "asthmon/error.hpp"

namespace asthmon {

const char* to_string(ActivityLevel level) {
    return level == ActivityLevel::Stationary ? "Stationary" : "Ambulatory";
}

const char* to_string(Posture posture) {
    switch (posture) {
        case Posture::Upright: return "Upright";
        case Posture::ForwardLean: return "ForwardLean";
        case Posture::SideTilt: return "SideTilt";
        case Posture::Lying: return "Lying";
        case Posture::Unknown: return "Unknown";
    }
    return "?";
}

void ActivityConfig::validate() const {
    if (sample_rate_hz <= 0.0) throw DataError("activity.sample_rate_hz must be positive");
    if (window_len < 1) throw DataError("activity.window_len must be at least 1");
    if (stride < 1 || stride > window_len) {
        throw DataError("activity.stride must satisfy 1 <= stride <= window_len");
    }
    if (am_threshold <= 0.0) throw DataError("activity.am_threshold must be positive");
}

void PostureConfig::validate() const {
    if (lean_deg <= 0.0 || tilt_deg <= 0.0 || lying_deg <= 0.0) {
        throw DataError("posture thresholds must be positive degrees");
    }
    if (dwell_s < 0.0) throw DataError("posture.dwell_s must be non-negative");
    if (baseline_s <= 0.0) throw DataError("posture.baseline_s must be positive");
}

double movement_intensity(const ImuSample& s) {
    if (!std::isfinite(s.ax) || !std::isfinite(s.ay) || !std::isfinite(s.az)) {
        throw DataError("non-finite acceleration sample");
    }
    return std::sqrt(s.ax * s.ax + s.ay * s.ay + s.az * s.az);
}

double signal_magnitude_area(std::span<const ImuSample> window) {
    if (window.empty()) throw DataError("empty activity window");
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (const auto& s : window) {
        sx += std::abs(s.ax);
        sy += std::abs(s.ay);
        sz += std::abs(s.az);
    }
    return (sx + sy + sz) / static_cast<double>(window.size());
}

double average_motion(std::span<const ImuSample> window) {
    if (window.empty()) throw DataError("empty activity window");
    const double sma = signal_magnitude_area(window);
    double acc = 0.0;
    for (const auto& s : window) acc += std::abs(movement_intensity(s) - sma);
    return acc / static_cast<double>(window.size());
}

ActivityLevel classify_activity(double am, double threshold) {
    if (am < 0.0) throw DataError("AM must be non-negative");
    if (threshold <= 0.0) throw DataError("AM threshold must be positive");
    return am > threshold ? ActivityLevel::Ambulatory : ActivityLevel::Stationary;
}

double angle_diff_deg(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d < -180.0) d += 360.0;
    return d;
}

OrientationBaseline estimate_baseline(std::span<const ImuSample> trace, double baseline_s) {
    OrientationBaseline base;
    if (trace.empty()) return base;
    const double limit_ms = trace.front().t_ms + baseline_s * 1000.0;
    double sin_p = 0.0, cos_p = 0.0, sin_r = 0.0, cos_r = 0.0;
    int n = 0;
    for (const auto& s : trace) {
        if (n > 0 && s.t_ms >= limit_ms) break;
        const double p = s.pitch_deg * M_PI / 180.0;
        const double r = s.roll_deg * M_PI / 180.0;
        sin_p += std::sin(p);
        cos_p += std::cos(p);
        sin_r += std::sin(r);
        cos_r += std::cos(r);
        ++n;
    }
    base.pitch_deg = std::atan2(sin_p, cos_p) * 180.0 / M_PI;
    base.roll_deg = std::atan2(sin_r, cos_r) * 180.0 / M_PI;
    base.valid = true;
    return base;
}

Posture posture_state(std::span<const ImuSample> history, const OrientationBaseline& baseline,
                      const PostureConfig& cfg) {
    cfg.validate();
    if (!baseline.valid || history.empty()) return Posture::Unknown;

    const ImuSample& last = history.back();
    const double pitch_dev = angle_diff_deg(last.pitch_deg, baseline.pitch_deg);
    if (std::abs(pitch_dev) > cfg.lying_deg) return Posture::Lying;

    // Trailing span over which a condition has held continuously.
    auto held_ms = [&](auto&& cond) {
        double start_ms = last.t_ms;
        bool any = false;
        for (auto it = history.rbegin(); it != history.rend(); ++it) {
            if (!cond(*it)) break;
            start_ms = it->t_ms;
            any = true;
        }
        return any ? last.t_ms - start_ms : -1.0;
    };

    const double lean_ms = held_ms([&](const ImuSample& s) {
        return angle_diff_deg(s.pitch_deg, baseline.pitch_deg) > cfg.lean_deg;
    });
    if (lean_ms >= cfg.dwell_s * 1000.0) return Posture::ForwardLean;

    const double tilt_ms = held_ms([&](const ImuSample& s) {
        return std::abs(angle_diff_deg(s.roll_deg, baseline.roll_deg)) > cfg.tilt_deg;
    });
    if (tilt_ms >= cfg.dwell_s * 1000.0) return Posture::SideTilt;

    return Posture::Upright;
}

std::vector<ActivityWindow> make_windows(std::span<const ImuSample> trace,
                                         const ActivityConfig& cfg) {
    cfg.validate();
    std::vector<ActivityWindow> out;
    if (trace.size() < static_cast<std::size_t>(cfg.window_len)) return out;
    const std::size_t n = trace.size();
    for (std::size_t start = 0; start + cfg.window_len <= n;
         start += static_cast<std::size_t>(cfg.stride)) {
        auto window = trace.subspan(start, static_cast<std::size_t>(cfg.window_len));
        ActivityWindow w;
        w.start_index = static_cast<int>(start);
        w.mi_series.reserve(window.size());
        for (const auto& s : window) w.mi_series.push_back(movement_intensity(s));
        w.sma = signal_magnitude_area(window);
        w.am = average_motion(window);
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<ActivityState> analyze_trace(std::span<const ImuSample> trace,
                                         const ActivityConfig& acfg,
                                         const PostureConfig& pcfg) {
    const auto windows = make_windows(trace, acfg);
    const auto baseline = estimate_baseline(trace, pcfg.baseline_s);
    std::vector<ActivityState> states;
    states.reserve(windows.size());
    for (const auto& w : windows) {
        const std::size_t end =
            static_cast<std::size_t>(w.start_index) + static_cast<std::size_t>(acfg.window_len);
        ActivityState st;
        st.am_value = w.am;
        st.level = classify_activity(w.am, acfg.am_threshold);
        st.posture = posture_state(trace.first(end), baseline, pcfg);
        st.t_end_ms = trace[end - 1].t_ms;
        states.push_back(st);
    }
    return states;
}

ActivityState summarize_states(const std::vector<ActivityState>& states,
                               const ActivityConfig& cfg) {
    ActivityState summary;
    if (states.empty()) return summary;  // Stationary / Unknown by default
    std::vector<double> ams;
    ams.reserve(states.size());
    for (const auto& st : states) ams.push_back(st.am_value);
    std::sort(ams.begin(), ams.end());
    const std::size_t mid = ams.size() / 2;
    summary.am_value =
        ams.size() % 2 ? ams[mid] : (ams[mid - 1] + ams[mid]) / 2.0;
    summary.level = classify_activity(summary.am_value, cfg.am_threshold);
    summary.posture = states.back().posture;
    summary.t_end_ms = states.back().t_end_ms;
    return summary;
}

}  // namespace asthmon
