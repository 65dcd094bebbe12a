#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asthmon/config.hpp"
#include "asthmon/eval.hpp"
#include "asthmon/rules.hpp"

namespace asthmon {

/// Output of the audio half of the pipeline, kept whole so callers can emit
/// plot data or diagnostics.
struct WheezeAnalysis {
    Spectrogram spectrogram;
    Envelope envelope;
    std::vector<int> minima;
    std::vector<BreathSegment> segments;
    std::vector<WheezeEvent> events;
    std::vector<WheezeMetrics> cycle_metrics;  // one per Respiratory segment
    std::vector<int> cycle_segment_index;      // segment index per metrics row
    WheezeMetrics overall;
    std::vector<std::optional<double>> adjacent_cycle_correlation;
};

/// stft -> segment -> detect -> metrics on one buffer.
WheezeAnalysis analyze_audio(const AudioBuffer& buf, const SessionConfig& cfg);

struct MonitorInputs {
    std::string audio_path;
    std::string imu_path;
    Ambient ambient;
};

struct MonitorResult {
    WheezeAnalysis wheeze;
    std::vector<ActivityState> activity_states;
    ActivityState activity_summary;
    FactBase facts;         // session facts before inference
    InferResult inference;  // derivations, fired rules, alert
    SessionConfig config;
    std::vector<std::pair<std::string, std::string>> input_lines;  // report [inputs]
};

/// Full session: ingest both traces, run every stage, infer the alert.
/// Stage failures surface as DataError tagged with the stage name; no partial
/// result is returned.
MonitorResult run_monitor(const MonitorInputs& inputs, const SessionConfig& cfg);

/// Deterministic structured-text report (stable key order, fixed precision).
std::string render_report(const MonitorResult& result);

/// Plot-ready data files: envelope.tsv, spectrogram.tsv, am_series.tsv.
void write_plot_data(const MonitorResult& result, const std::string& dir);

/// Loads the configured ontology and rules (or the shipped defaults when the
/// paths are empty) and returns them with provenance labels for the report.
struct KnowledgeBase {
    Ontology ontology;
    RuleBase rules;
    std::string rules_source;     // path or "(builtin)"
    std::string ontology_source;  // path or "(builtin)"
    std::string rules_digest;
    std::string ontology_digest;
};
KnowledgeBase load_knowledge_base(const SessionConfig& cfg);

/// Runs the detector on every clip of a synthetic corpus and scores it
/// against the generated labels.
struct CorpusEvaluation {
    EvalReport report;
    std::vector<ClipOutcome> outcomes;
};
CorpusEvaluation evaluate_corpus(const CorpusSpec& corpus, const SessionConfig& cfg,
                                 double tolerance_ms);

}  // namespace asthmon
