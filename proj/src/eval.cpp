#include "asthmon/eval.hpp"

#include <algorithm>
#include <cmath>

#include "asthmon/error.hpp"
#include "asthmon/rng.hpp"
#include "asthmon/textfmt.hpp"

namespace asthmon {

namespace {

std::optional<double> ratio(int num, int denom) {
    if (denom == 0) return std::nullopt;
    return static_cast<double>(num) / denom;
}

bool event_matches(const WheezeEvent& ev, const WheezeLabel& label, double tolerance_ms) {
    const double lo = label.start_ms / 1000.0 - tolerance_ms / 1000.0;
    const double hi = label.end_ms / 1000.0 + tolerance_ms / 1000.0;
    const double overlap = std::min(ev.end_s, hi) - std::max(ev.start_s, lo);
    const double label_dur = (label.end_ms - label.start_ms) / 1000.0;
    return label_dur > 0.0 && overlap >= 0.5 * label_dur;
}

}  // namespace

EvalReport evaluate(const std::vector<ClipOutcome>& outcomes, double tolerance_ms) {
    if (outcomes.empty()) throw DataError("evaluation corpus is empty");
    if (tolerance_ms < 0.0) throw DataError("tolerance_ms must be non-negative");

    EvalReport r;
    for (const auto& clip : outcomes) {
        const bool truth = !clip.labels.empty();
        const bool predicted = !clip.detections.empty();
        if (truth && predicted) ++r.tp;
        else if (truth && !predicted) ++r.fn;
        else if (!truth && predicted) ++r.fp;
        else ++r.tn;

        std::vector<bool> used(clip.detections.size(), false);
        for (const auto& label : clip.labels) {
            bool matched = false;
            for (std::size_t i = 0; i < clip.detections.size(); ++i) {
                if (used[i]) continue;
                if (event_matches(clip.detections[i], label, tolerance_ms)) {
                    used[i] = true;
                    matched = true;
                    break;
                }
            }
            if (matched) ++r.events.matched_labels;
            else ++r.events.missed_labels;
        }
        for (std::size_t i = 0; i < clip.detections.size(); ++i) {
            if (!used[i]) ++r.events.spurious_detections;
        }
    }

    r.sensitivity = ratio(r.tp, r.tp + r.fn);
    r.specificity = ratio(r.tn, r.tn + r.fp);
    r.accuracy = ratio(r.tp + r.tn, r.tp + r.tn + r.fp + r.fn);
    r.false_alarm_rate = ratio(r.fp, r.fp + r.tn);
    return r;
}

std::string render_eval_report(const EvalReport& r) {
    auto rate = [](const std::optional<double>& v) {
        return v ? fmt_fixed(*v, 4) : std::string("undefined");
    };
    std::string out;
    out += "[clip-level]\n";
    out += "tp = " + std::to_string(r.tp) + "\n";
    out += "fp = " + std::to_string(r.fp) + "\n";
    out += "tn = " + std::to_string(r.tn) + "\n";
    out += "fn = " + std::to_string(r.fn) + "\n";
    out += "sensitivity = " + rate(r.sensitivity) + "\n";
    out += "specificity = " + rate(r.specificity) + "\n";
    out += "accuracy = " + rate(r.accuracy) + "\n";
    out += "false_alarm_rate = " + rate(r.false_alarm_rate) + "\n";
    out += "[event-level]\n";
    out += "matched_labels = " + std::to_string(r.events.matched_labels) + "\n";
    out += "missed_labels = " + std::to_string(r.events.missed_labels) + "\n";
    out += "spurious_detections = " + std::to_string(r.events.spurious_detections) + "\n";
    return out;
}

BreathSynthSpec corpus_clip_spec(const CorpusSpec& corpus, int index) {
    if (index < 0 || index >= corpus.clips) throw DataError("corpus clip index out of range");
    if (corpus.prevalence < 0.0 || corpus.prevalence > 1.0) {
        throw DataError("corpus prevalence must lie in [0, 1]");
    }
    BreathSynthSpec spec;
    spec.cycle_s = corpus.cycle_s;
    spec.cycles = corpus.cycles;
    spec.seed = corpus.seed_base + static_cast<std::uint64_t>(index);

    // Positives are spread evenly through the index range so any prefix of
    // the corpus keeps roughly the requested prevalence.
    const double stride = corpus.prevalence > 0.0 ? 1.0 / corpus.prevalence : 0.0;
    const bool positive =
        corpus.prevalence > 0.0 &&
        static_cast<int>(std::floor(index / stride)) !=
            static_cast<int>(std::floor((index + 1) / stride));
    if (!positive) return spec;

    // Draw tone parameters from a stream decoupled from the noise seed.
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ull + 0x5851f42d4c957f2dull);
    WheezeSpec w;
    w.freq_hz = rng.uniform(150.0, 900.0);
    w.dur_s = rng.uniform(0.4, 1.0);
    const int cycle = rng.uniform_int(0, corpus.cycles - 1);
    const double exhale_start = cycle * corpus.cycle_s + corpus.cycle_s / 2.0;
    const double exhale_end = (cycle + 1) * corpus.cycle_s;
    w.onset_s = rng.uniform(exhale_start, exhale_end - w.dur_s);
    w.second_harmonic = true;
    spec.wheeze = w;
    spec.snr_db = rng.uniform(corpus.snr_low_db, corpus.snr_high_db);
    return spec;
}

}  // namespace asthmon
