#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "asthmon/activity.hpp"
#include "asthmon/error.hpp"
#include "asthmon/rng.hpp"
#include "asthmon/synth.hpp"
#include "doctest.h"

using namespace asthmon;

namespace {

ImuSample accel(double ax, double ay, double az) {
    ImuSample s;
    s.ax = ax;
    s.ay = ay;
    s.az = az;
    return s;
}

std::vector<ImuSample> constant_window(double ax, double ay, double az, int n) {
    std::vector<ImuSample> w;
    for (int i = 0; i < n; ++i) {
        ImuSample s = accel(ax, ay, az);
        s.t_ms = i * 20.0;
        w.push_back(s);
    }
    return w;
}

}  // namespace

TEST_CASE("movement_intensity") {
    CHECK(movement_intensity(accel(0, 0, 0)) == 0.0);
    CHECK(movement_intensity(accel(3, 4, 0)) == 5.0);
    CHECK(movement_intensity(accel(1, 1, 1)) == doctest::Approx(1.7320508).epsilon(1e-7));

    ImuSample bad = accel(1, 2, 3);
    bad.ay = std::nan("");
    CHECK_THROWS_AS(movement_intensity(bad), DataError);
}

TEST_CASE("movement_intensity symmetry properties") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = rng.uniform(-5, 5), y = rng.uniform(-5, 5), z = rng.uniform(-5, 5);
        const double mi = movement_intensity(accel(x, y, z));
        // Axis permutations and sign flips change nothing.
        CHECK(movement_intensity(accel(y, z, x)) == doctest::Approx(mi).epsilon(1e-15));
        CHECK(movement_intensity(accel(-x, y, -z)) == doctest::Approx(mi).epsilon(1e-15));
        // Homogeneity.
        const double alpha = rng.uniform(-3, 3);
        CHECK(movement_intensity(accel(alpha * x, alpha * y, alpha * z)) ==
              doctest::Approx(std::abs(alpha) * mi).epsilon(1e-12));
    }
}

TEST_CASE("signal_magnitude_area") {
    CHECK(signal_magnitude_area(constant_window(1, -2, 3, 7)) == doctest::Approx(6.0));
    CHECK(signal_magnitude_area(constant_window(0, 0, 0, 5)) == 0.0);

    // N=2 with (1,0,0) and (0,1,0).
    std::vector<ImuSample> w{accel(1, 0, 0), accel(0, 1, 0)};
    CHECK(signal_magnitude_area(w) == doctest::Approx(1.0));

    CHECK_THROWS_AS(signal_magnitude_area(std::vector<ImuSample>{}), DataError);
}

TEST_CASE("average_motion") {
    // Constant (1,0,0): MI = 1 everywhere, SMA = 1, so AM = 0.
    CHECK(average_motion(constant_window(1, 0, 0, 9)) == doctest::Approx(0.0));
    // Constant (3,4,0): MI = 5, SMA = 7, AM = 2.
    CHECK(average_motion(constant_window(3, 4, 0, 4)) == doctest::Approx(2.0));
    // N=2: MI = [2, 0], SMA = 1 -> AM = 1.
    std::vector<ImuSample> w{accel(2, 0, 0), accel(0, 0, 0)};
    CHECK(average_motion(w) == doctest::Approx(1.0));

    CHECK_THROWS_AS(average_motion(std::vector<ImuSample>{}), DataError);
}

TEST_CASE("AM of a constant window equals |MI - SMA| exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = rng.uniform(-4, 4), y = rng.uniform(-4, 4), z = rng.uniform(-4, 4);
        const auto w = constant_window(x, y, z, rng.uniform_int(1, 40));
        const double mi = movement_intensity(accel(x, y, z));
        const double sma = signal_magnitude_area(w);
        CHECK(average_motion(w) == doctest::Approx(std::abs(mi - sma)).epsilon(1e-12));
    }
}

TEST_CASE("SMA and AM scale linearly") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 64);
        std::vector<ImuSample> w;
        for (int i = 0; i < n; ++i) {
            w.push_back(accel(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)));
        }
        const double alpha = rng.uniform(-2.5, 2.5);
        std::vector<ImuSample> scaled;
        for (const auto& s : w) scaled.push_back(accel(alpha * s.ax, alpha * s.ay, alpha * s.az));

        const double tol = 1e-12;
        CHECK(std::abs(signal_magnitude_area(scaled) -
                       std::abs(alpha) * signal_magnitude_area(w)) <=
              tol * std::max(1.0, signal_magnitude_area(w)));
        CHECK(std::abs(average_motion(scaled) - std::abs(alpha) * average_motion(w)) <=
              tol * std::max(1.0, average_motion(w)));
    }
}

TEST_CASE("classify_activity thresholding") {
    CHECK(classify_activity(0.0, 0.5) == ActivityLevel::Stationary);
    CHECK(classify_activity(0.5, 0.5) == ActivityLevel::Stationary);  // boundary stays stationary
    CHECK(classify_activity(0.50001, 0.5) == ActivityLevel::Ambulatory);

    // Monotone in the threshold: raising it never flips toward Ambulatory.
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const double am = rng.uniform(0.0, 2.0);
        const double t1 = rng.uniform(0.01, 2.0);
        const double t2 = t1 + rng.uniform(0.0, 1.0);
        if (classify_activity(am, t1) == ActivityLevel::Stationary) {
            CHECK(classify_activity(am, t2) == ActivityLevel::Stationary);
        }
    }
}

TEST_CASE("synthetic sitting vs jogging straddle the default threshold") {
    const ActivityConfig cfg;
    const auto sitting = synth_imu(ImuProfile::Sitting, 10.0, 7);
    const auto jogging = synth_imu(ImuProfile::Jogging, 10.0, 7);

    for (const auto& w : make_windows(sitting, cfg)) {
        CHECK(classify_activity(w.am, cfg.am_threshold) == ActivityLevel::Stationary);
    }
    for (const auto& w : make_windows(jogging, cfg)) {
        CHECK(classify_activity(w.am, cfg.am_threshold) == ActivityLevel::Ambulatory);
    }
}

TEST_CASE("make_windows shape and stride") {
    const ActivityConfig cfg;  // 128 / 64
    const auto trace = synth_imu(ImuProfile::Sitting, 10.0, 1);  // 500 samples
    const auto windows = make_windows(trace, cfg);
    // floor((500 - 128) / 64) + 1 = 6 windows
    REQUIRE(windows.size() == 6);
    for (std::size_t i = 0; i < windows.size(); ++i) {
        CHECK(windows[i].start_index == static_cast<int>(i) * 64);
        CHECK(windows[i].mi_series.size() == 128);
        // SMA and AM stay recomputable from the window samples.
        auto span = std::span<const ImuSample>(trace).subspan(
            static_cast<std::size_t>(windows[i].start_index), 128);
        CHECK(windows[i].sma == signal_magnitude_area(span));
        CHECK(windows[i].am == average_motion(span));
    }
    // Too-short trace gives no windows.
    CHECK(make_windows(synth_imu(ImuProfile::Sitting, 1.0, 1), cfg).empty());
}

TEST_CASE("posture_state") {
    PostureConfig cfg;  // lean 20, tilt 20, lying 60, dwell 3 s
    OrientationBaseline base;
    base.pitch_deg = 0.0;
    base.roll_deg = 0.0;
    base.valid = true;

    auto attitude_trace = [](double pitch, double roll, double duration_s) {
        std::vector<ImuSample> t;
        for (int i = 0; i <= static_cast<int>(duration_s * 50); ++i) {
            ImuSample s;
            s.t_ms = i * 20.0;
            s.pitch_deg = pitch;
            s.roll_deg = roll;
            t.push_back(s);
        }
        return t;
    };

    SUBCASE("zero deviation is Upright") {
        CHECK(posture_state(attitude_trace(0, 0, 6), base, cfg) == Posture::Upright);
    }
    SUBCASE("25 degrees pitch for 5 s is ForwardLean") {
        CHECK(posture_state(attitude_trace(25, 0, 5), base, cfg) == Posture::ForwardLean);
    }
    SUBCASE("25 degrees pitch for only 2 s is not sustained") {
        auto t = attitude_trace(0, 0, 4);
        for (auto& s : t) {
            if (s.t_ms > 2000.0) s.pitch_deg = 25.0;
        }
        CHECK(posture_state(t, base, cfg) == Posture::Upright);
    }
    SUBCASE("80 degrees pitch is Lying regardless of dwell (precedence)") {
        CHECK(posture_state(attitude_trace(80, 0, 0.1), base, cfg) == Posture::Lying);
        CHECK(posture_state(attitude_trace(-80, 0, 0.1), base, cfg) == Posture::Lying);
    }
    SUBCASE("sustained roll is SideTilt, either direction") {
        CHECK(posture_state(attitude_trace(0, 30, 5), base, cfg) == Posture::SideTilt);
        CHECK(posture_state(attitude_trace(0, -30, 5), base, cfg) == Posture::SideTilt);
    }
    SUBCASE("lean takes precedence over tilt") {
        CHECK(posture_state(attitude_trace(25, 30, 5), base, cfg) == Posture::ForwardLean);
    }
    SUBCASE("missing baseline yields Unknown") {
        OrientationBaseline invalid;
        CHECK(posture_state(attitude_trace(25, 0, 5), invalid, cfg) == Posture::Unknown);
    }
    SUBCASE("wraparound deviations stay small") {
        OrientationBaseline wrapped;
        wrapped.pitch_deg = 175.0;
        wrapped.roll_deg = 0.0;
        wrapped.valid = true;
        // 175 -> -175 is a 10-degree move, not 350.
        CHECK(posture_state(attitude_trace(-175, 0, 5), wrapped, cfg) == Posture::Upright);
    }
}

TEST_CASE("angle_diff_deg wraps into [-180, 180]") {
    CHECK(angle_diff_deg(170.0, -170.0) == doctest::Approx(-20.0));
    CHECK(angle_diff_deg(-170.0, 170.0) == doctest::Approx(20.0));
    CHECK(angle_diff_deg(10.0, 5.0) == doctest::Approx(5.0));

    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const double d = angle_diff_deg(rng.uniform(-180, 180), rng.uniform(-180, 180));
        CHECK(d >= -180.0);
        CHECK(d <= 180.0);
    }
}

TEST_CASE("forward lean episode is detected after the dwell") {
    const ActivityConfig acfg;
    const PostureConfig pcfg;
    const auto trace = synth_imu(ImuProfile::ForwardLeanEpisode, 10.0, 13);
    const auto states = analyze_trace(trace, acfg, pcfg);
    REQUIRE(!states.empty());
    CHECK(states.back().posture == Posture::ForwardLean);
    CHECK(states.front().posture == Posture::Upright);  // before the ramp settles
    for (const auto& st : states) {
        CHECK(st.level == ActivityLevel::Stationary);  // lean profile is low motion
    }
}

TEST_CASE("summarize_states uses the median AM and final posture") {
    const ActivityConfig cfg;
    std::vector<ActivityState> states;
    for (double am : {0.1, 0.2, 3.0}) {
        ActivityState st;
        st.am_value = am;
        st.level = classify_activity(am, cfg.am_threshold);
        st.posture = Posture::Upright;
        states.push_back(st);
    }
    states.back().posture = Posture::SideTilt;
    const auto summary = summarize_states(states, cfg);
    CHECK(summary.am_value == doctest::Approx(0.2));
    CHECK(summary.level == ActivityLevel::Stationary);
    CHECK(summary.posture == Posture::SideTilt);

    const auto empty = summarize_states({}, cfg);
    CHECK(empty.level == ActivityLevel::Stationary);
    CHECK(empty.posture == Posture::Unknown);
}
