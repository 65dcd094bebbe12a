#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "asthmon/error.hpp"
#include "asthmon/monitor.hpp"
#include "asthmon/rng.hpp"
#include "asthmon/synth.hpp"
#include "asthmon/wheeze.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace asthmon;

namespace {

Envelope env_of(std::vector<double> v) {
    Envelope env;
    env.values = std::move(v);
    env.band_low_hz = 100.0;
    env.band_high_hz = 2500.0;
    return env;
}

}  // namespace

TEST_CASE("spectral_correlation basics") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};

    SUBCASE("self correlation is 1") {
        CHECK(spectral_correlation(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("negated input flips the sign") {
        std::vector<double> neg;
        for (double v : a) neg.push_back(-v);
        CHECK(spectral_correlation(a, neg) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("affine relation correlates perfectly") {
        const std::vector<double> b{2.0, 4.0, 6.0, 8.0};
        CHECK(spectral_correlation(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero variance is degenerate") {
        const std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
        CHECK_THROWS_WITH_AS(spectral_correlation(a, flat),
                             doctest::Contains("degenerate segment spectrum"), DataError);
        CHECK_THROWS_AS(spectral_correlation(flat, a), DataError);
    }
    SUBCASE("length mismatch rejected") {
        const std::vector<double> shorter{1.0, 2.0};
        CHECK_THROWS_AS(spectral_correlation(a, shorter), DataError);
    }
}

TEST_CASE("spectral_correlation matches the two-pass oracle on random pairs") {
    Rng rng(42);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = rng.uniform_int(4, 64);
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        for (auto& v : a) v = rng.uniform(-5.0, 5.0);
        for (auto& v : b) v = rng.uniform(-5.0, 5.0);
        const double got = spectral_correlation(a, b);
        const double expected = oracle::pearson_two_pass(a, b);
        CHECK(std::abs(got - expected) <= 1e-12);
        CHECK(got >= -1.0);
        CHECK(got <= 1.0);
    }
}

TEST_CASE("spectral_correlation invariance properties") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(4, 32);
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        for (auto& v : a) v = rng.uniform(-2.0, 2.0);
        for (auto& v : b) v = rng.uniform(-2.0, 2.0);
        const double r = spectral_correlation(a, b);

        // Symmetry.
        CHECK(spectral_correlation(b, a) == doctest::Approx(r).epsilon(1e-12));

        // Positive affine map leaves r unchanged.
        const double alpha = rng.uniform(0.1, 3.0);
        const double beta = rng.uniform(-4.0, 4.0);
        std::vector<double> mapped;
        for (double v : a) mapped.push_back(alpha * v + beta);
        CHECK(spectral_correlation(mapped, b) == doctest::Approx(r).epsilon(1e-9));

        // Negating exactly one input flips the sign.
        std::vector<double> neg;
        for (double v : b) neg.push_back(-v);
        CHECK(spectral_correlation(a, neg) == doctest::Approx(-r).epsilon(1e-9));
    }
}

TEST_CASE("segment_breath_cycles") {
    SUBCASE("all-equal envelope is one Baseline segment") {
        const auto segs = segment_breath_cycles(env_of({1, 1, 1, 1, 1, 1}), {}, 0.25);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].start_frame == 0);
        CHECK(segs[0].end_frame == 6);
        CHECK(segs[0].kind == SegmentKind::Baseline);
    }
    SUBCASE("two bursts split by a valley give two Respiratory segments") {
        // Hand-check: values sorted are [0,0,0,9,9,9,9]; the 0.25 quantile is
        // 0, each burst segment mean is 6 > 0, the tail [6,7) has mean 0.
        const std::vector<double> values{0, 9, 9, 0, 9, 9, 0};
        const auto segs = segment_breath_cycles(env_of(values), {0, 3, 6}, 0.25);
        REQUIRE(segs.size() == 3);
        CHECK(segs[0].kind == SegmentKind::Respiratory);
        CHECK(segs[1].kind == SegmentKind::Respiratory);
        CHECK(segs[2].kind == SegmentKind::Baseline);
        CHECK(segs[0].start_frame == 0);
        CHECK(segs[1].end_frame == 6);
    }
    SUBCASE("burst in the first span only") {
        // Envelope: 10 loud frames, 11 quiet frames; minima at 0, 10, 20.
        std::vector<double> values(21, 0.0);
        for (int i = 0; i < 10; ++i) values[static_cast<std::size_t>(i)] = 8.0;
        const auto segs = segment_breath_cycles(env_of(values), {0, 10, 20}, 0.25);
        REQUIRE(segs.size() >= 2);
        CHECK(segs[0].kind == SegmentKind::Respiratory);
        CHECK(segs[1].kind == SegmentKind::Baseline);
    }
    SUBCASE("fewer than two minima spans the whole envelope") {
        const auto segs = segment_breath_cycles(env_of({0, 5, 9, 5, 0}), {2}, 0.25);
        REQUIRE(segs.size() == 1);
        CHECK(segs[0].start_frame == 0);
        CHECK(segs[0].end_frame == 5);
        CHECK(segs[0].kind == SegmentKind::Respiratory);
    }
    SUBCASE("segments tile the envelope in order") {
        const auto segs = segment_breath_cycles(env_of({3, 1, 4, 1, 5, 9, 2, 6}), {1, 3, 5}, 0.5);
        int expected_start = 0;
        for (const auto& seg : segs) {
            CHECK(seg.start_frame == expected_start);
            CHECK(seg.start_frame < seg.end_frame);
            expected_start = seg.end_frame;
        }
        CHECK(expected_start == 8);
    }
}

TEST_CASE("detect_wheeze on synthetic clips") {
    SessionConfig cfg;

    SUBCASE("a 500 ms tone over breath noise yields exactly one event") {
        BreathSynthSpec spec;
        spec.cycle_s = 2.5;
        spec.cycles = 2;
        spec.snr_db = 10.0;
        spec.seed = 3;
        spec.wheeze = WheezeSpec{1.5, 0.5, 400.0, 0.0, true};
        const SynthClip clip = synth_breath(spec);
        const auto analysis = analyze_audio(clip.audio, cfg);
        REQUIRE(analysis.events.size() == 1);
        const auto& ev = analysis.events[0];
        const double bin_width = 8000.0 / cfg.stft.frame_len;
        CHECK(std::abs(ev.dominant_freq_hz - 400.0) <= bin_width);
        CHECK(ev.mean_correlation >= cfg.tftd.corr_threshold);
        CHECK(ev.end_s - ev.start_s >= cfg.tftd.min_wheeze_ms / 1000.0);
        // Interval within a couple of frame steps of the labeled truth.
        const double step = analysis.spectrogram.frame_step_s();
        CHECK(ev.start_s >= 1.5 - 2 * step);
        CHECK(ev.end_s <= 2.0 + 2 * step);
    }
    SUBCASE("noise-only breath yields no events") {
        BreathSynthSpec spec;
        spec.seed = 11;
        const SynthClip clip = synth_breath(spec);
        const auto analysis = analyze_audio(clip.audio, cfg);
        CHECK(analysis.events.empty());
    }
    SUBCASE("a 40 ms tone is below the 80 ms duration gate") {
        BreathSynthSpec spec;
        spec.cycle_s = 2.5;
        spec.cycles = 2;
        spec.snr_db = 15.0;
        spec.seed = 5;
        spec.wheeze = WheezeSpec{1.6, 0.04, 400.0, 0.0, false};
        const SynthClip clip = synth_breath(spec);
        const auto analysis = analyze_audio(clip.audio, cfg);
        CHECK(analysis.events.empty());
    }
    SUBCASE("events are ordered, disjoint, and inside the band") {
        BreathSynthSpec spec;
        spec.cycle_s = 3.0;
        spec.cycles = 1;
        spec.snr_db = 12.0;
        spec.seed = 21;
        spec.wheeze = WheezeSpec{1.6, 1.0, 650.0, 0.0, true};
        const auto analysis = analyze_audio(synth_breath(spec).audio, cfg);
        for (std::size_t i = 0; i < analysis.events.size(); ++i) {
            const auto& ev = analysis.events[i];
            CHECK(ev.dominant_freq_hz >= cfg.tftd.band_low_hz);
            CHECK(ev.dominant_freq_hz <= cfg.tftd.band_high_hz);
            CHECK(ev.mean_correlation >= -1.0);
            CHECK(ev.mean_correlation <= 1.0);
            if (i > 0) CHECK(analysis.events[i - 1].end_s <= ev.start_s);
        }
    }
    SUBCASE("byte-identical reruns") {
        BreathSynthSpec spec;
        spec.seed = 31;
        spec.wheeze = WheezeSpec{1.5, 0.6, 300.0, 0.0, true};
        const SynthClip clip = synth_breath(spec);
        const auto a = analyze_audio(clip.audio, cfg);
        const auto b = analyze_audio(clip.audio, cfg);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t i = 0; i < a.events.size(); ++i) {
            CHECK(a.events[i].start_s == b.events[i].start_s);
            CHECK(a.events[i].end_s == b.events[i].end_s);
            CHECK(a.events[i].dominant_freq_hz == b.events[i].dominant_freq_hz);
            CHECK(a.events[i].mean_correlation == b.events[i].mean_correlation);
        }
    }
}

TEST_CASE("detector monotonicity in the thresholds") {
    SessionConfig cfg;
    std::vector<AudioBuffer> clips;
    CorpusSpec corpus;
    corpus.clips = 10;
    corpus.seed_base = 500;
    for (int i = 0; i < corpus.clips; ++i) {
        clips.push_back(synth_breath(corpus_clip_spec(corpus, i)).audio);
    }

    auto total_events = [&](const SessionConfig& c) {
        std::size_t n = 0;
        for (const auto& clip : clips) n += analyze_audio(clip, c).events.size();
        return n;
    };

    std::size_t prev = total_events(cfg);
    for (double corr : {0.75, 0.8, 0.85, 0.9}) {
        SessionConfig c = cfg;
        c.tftd.corr_threshold = corr;
        const std::size_t n = total_events(c);
        CHECK(n <= prev);
        prev = n;
    }
    prev = total_events(cfg);
    for (double ms : {120.0, 160.0, 200.0}) {
        SessionConfig c = cfg;
        c.tftd.min_wheeze_ms = ms;
        const std::size_t n = total_events(c);
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("wheeze_metrics") {
    Spectrogram spec;
    spec.frames = 100;
    spec.bins = 3;
    spec.sample_rate_hz = 8000;
    spec.frame_len = 1024;
    spec.hop = 512;  // 64 ms per frame step

    const BreathSegment cycle{0, 47, SegmentKind::Respiratory};  // 3.008 s

    SUBCASE("no events") {
        const auto m = wheeze_metrics({}, cycle, spec);
        CHECK(m.total_wheeze_s == 0.0);
        CHECK(m.cycle_s == doctest::Approx(3.008));
        CHECK(m.proportion == 0.0);
        CHECK(m.event_count == 0);
    }
    SUBCASE("single event proportion") {
        WheezeEvent ev;
        ev.start_s = 1.0;
        ev.end_s = 1.6;
        const auto m = wheeze_metrics({ev}, cycle, spec);
        CHECK(m.total_wheeze_s == doctest::Approx(0.6));
        CHECK(m.proportion == doctest::Approx(0.6 / 3.008));
        CHECK(m.event_count == 1);
    }
    SUBCASE("overlapping events merge before summing") {
        WheezeEvent a, b;
        a.start_s = 0.0;
        a.end_s = 0.5;
        b.start_s = 0.4;
        b.end_s = 0.9;
        const auto m = wheeze_metrics({a, b}, cycle, spec);
        CHECK(m.total_wheeze_s == doctest::Approx(0.9));
        CHECK(m.proportion == doctest::Approx(0.9 / 3.008));
        CHECK(m.event_count == 2);
    }
    SUBCASE("zero-length cycle is rejected") {
        const BreathSegment empty{5, 5, SegmentKind::Respiratory};
        CHECK_THROWS_AS(wheeze_metrics({}, empty, spec), DataError);
    }
    SUBCASE("proportion never exceeds 1") {
        WheezeEvent ev;
        ev.start_s = 0.0;
        ev.end_s = 10.0;
        const auto m = wheeze_metrics({ev}, cycle, spec);
        CHECK(m.proportion == 1.0);
        CHECK(m.total_wheeze_s <= m.cycle_s);
    }
}

TEST_CASE("aggregate_metrics sums cycles") {
    WheezeMetrics a;
    a.total_wheeze_s = 0.5;
    a.cycle_s = 2.0;
    a.proportion = 0.25;
    a.event_count = 1;
    WheezeMetrics b;
    b.total_wheeze_s = 1.0;
    b.cycle_s = 3.0;
    b.proportion = 1.0 / 3.0;
    b.event_count = 2;

    const auto agg = aggregate_metrics({a, b});
    CHECK(agg.total_wheeze_s == doctest::Approx(1.5));
    CHECK(agg.cycle_s == doctest::Approx(5.0));
    CHECK(agg.proportion == doctest::Approx(0.3));
    CHECK(agg.event_count == 3);

    const auto empty = aggregate_metrics({});
    CHECK(empty.proportion == 0.0);
    CHECK(empty.cycle_s == 0.0);
}

TEST_CASE("quantile interpolation") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 4.0);
    CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({7.0}, 0.3) == 7.0);
    CHECK_THROWS_AS(quantile({}, 0.5), DataError);
}

TEST_CASE("harmonic requirement on a hand-built spectrogram") {
    // 20 identical frames: flat floor at 0.1 with a spike at bin 51 and
    // optionally its second harmonic at bin 102.
    auto make_spec = [](bool harmonic) {
        Spectrogram spec;
        spec.frames = 20;
        spec.bins = 513;
        spec.sample_rate_hz = 8000;
        spec.frame_len = 1024;
        spec.hop = 512;
        spec.magnitudes.assign(static_cast<std::size_t>(spec.frames) * spec.bins, 0.1);
        spec.frame_times_s.resize(20);
        spec.bin_freqs_hz.resize(513);
        for (int m = 0; m < 20; ++m) spec.frame_times_s[static_cast<std::size_t>(m)] = m * 0.064;
        for (int k = 0; k < 513; ++k) {
            spec.bin_freqs_hz[static_cast<std::size_t>(k)] = k * 8000.0 / 1024.0;
        }
        for (int m = 0; m < 20; ++m) {
            spec.magnitudes[static_cast<std::size_t>(m) * 513 + 51] = 10.0;
            if (harmonic) spec.magnitudes[static_cast<std::size_t>(m) * 513 + 102] = 5.0;
        }
        return spec;
    };
    const std::vector<BreathSegment> segments{{0, 20, SegmentKind::Respiratory}};

    TftdConfig cfg;
    cfg.harmonic_count = 2;  // fundamental plus one harmonic required
    CHECK(!detect_wheeze(make_spec(true), segments, cfg).empty());
    CHECK(detect_wheeze(make_spec(false), segments, cfg).empty());

    cfg.harmonic_count = 1;  // default: fundamental alone suffices
    CHECK(!detect_wheeze(make_spec(false), segments, cfg).empty());
}
