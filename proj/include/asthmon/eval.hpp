#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asthmon/synth.hpp"
#include "asthmon/wheeze.hpp"

namespace asthmon {

/// Detector output and ground truth for one clip.
struct ClipOutcome {
    std::vector<WheezeEvent> detections;
    std::vector<WheezeLabel> labels;
};

/// Secondary event-level match counts (>= 50% label overlap within the
/// matching tolerance).
struct EventCounts {
    int matched_labels = 0;
    int missed_labels = 0;
    int spurious_detections = 0;
};

/// Clip-level confusion counts with the derived rates. Rates whose
/// denominator is zero are reported as undefined (nullopt), never as zero.
struct EvalReport {
    int tp = 0, fp = 0, tn = 0, fn = 0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> accuracy;
    std::optional<double> false_alarm_rate;
    EventCounts events;
};

/// Clip-level scoring: a clip counts positive when it holds at least one
/// label (truth) or at least one detection (prediction). Event-level interval
/// matching fills the secondary table. Throws DataError on an empty corpus.
EvalReport evaluate(const std::vector<ClipOutcome>& outcomes, double tolerance_ms);

std::string render_eval_report(const EvalReport& report);

/// Recipe for the labeled synthetic corpus: `clips` clips seeded
/// seed_base..seed_base+clips-1, even seeds carrying one wheeze (at the
/// default prevalence of 0.5), tone SNR uniform in [snr_low_db, snr_high_db].
struct CorpusSpec {
    int clips = 200;
    double prevalence = 0.5;
    double snr_low_db = 5.0;
    double snr_high_db = 20.0;
    std::uint64_t seed_base = 0;
    double cycle_s = 2.5;
    int cycles = 2;
};

/// Deterministic per-clip synthesis recipe (tone frequency, interval, and
/// SNR drawn from the clip's own RNG stream).
BreathSynthSpec corpus_clip_spec(const CorpusSpec& corpus, int index);

}  // namespace asthmon
