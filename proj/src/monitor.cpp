#include "asthmon/monitor.hpp"

#include <filesystem>
#include <fstream>

#include "asthmon/digest.hpp"
#include "asthmon/error.hpp"
#include "asthmon/imu_csv.hpp"
#include "asthmon/textfmt.hpp"
#include "asthmon/wav.hpp"

namespace asthmon {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw DataError(std::string("[") + name + "] " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

WheezeAnalysis analyze_audio(const AudioBuffer& buf, const SessionConfig& cfg) {
    cfg.validate();
    WheezeAnalysis out;
    out.spectrogram = stft(buf, cfg.stft);
    out.envelope = band_power_envelope(out.spectrogram, cfg.tftd.band_low_hz,
                                       cfg.tftd.band_high_hz);
    out.minima = local_minima(
        out.envelope, cfg.segmentation.min_separation_frames(cfg.stft, buf.sample_rate_hz),
        cfg.segmentation.smoothing_frames);
    out.segments =
        segment_breath_cycles(out.envelope, out.minima, cfg.segmentation.noise_floor_quantile);
    out.events = detect_wheeze(out.spectrogram, out.segments, cfg.tftd);

    for (std::size_t si = 0; si < out.segments.size(); ++si) {
        const auto& seg = out.segments[si];
        if (seg.kind != SegmentKind::Respiratory) continue;
        std::vector<WheezeEvent> cycle_events;
        for (const auto& ev : out.events) {
            if (ev.segment_index == static_cast<int>(si)) cycle_events.push_back(ev);
        }
        out.cycle_metrics.push_back(wheeze_metrics(cycle_events, seg, out.spectrogram));
        out.cycle_segment_index.push_back(static_cast<int>(si));
    }
    out.overall = aggregate_metrics(out.cycle_metrics);
    out.adjacent_cycle_correlation =
        segment_correlations(out.spectrogram, out.segments, cfg.tftd);
    return out;
}

KnowledgeBase load_knowledge_base(const SessionConfig& cfg) {
    KnowledgeBase kb;
    std::string ontology_text;
    if (cfg.ontology_path.empty()) {
        ontology_text = default_ontology_text();
        kb.ontology_source = "(builtin)";
    } else {
        ontology_text = read_text_file(cfg.ontology_path);
        kb.ontology_source = cfg.ontology_path;
    }
    kb.ontology = Ontology::parse(ontology_text);
    kb.ontology_digest = fnv1a64_hex(ontology_text);

    std::string rules_text;
    if (cfg.rules_path.empty()) {
        rules_text = default_rules_text();
        kb.rules_source = "(builtin)";
    } else {
        rules_text = read_text_file(cfg.rules_path);
        kb.rules_source = cfg.rules_path;
    }
    kb.rules = parse_rules(rules_text, Vocabulary::standard(), kb.ontology);
    kb.rules_digest = fnv1a64_hex(rules_text);
    return kb;
}

MonitorResult run_monitor(const MonitorInputs& inputs, const SessionConfig& cfg) {
    cfg.validate();
    MonitorResult result;
    result.config = cfg;

    const AudioBuffer audio =
        stage("audio-ingest", [&] { return read_wav(inputs.audio_path); });
    const std::vector<ImuSample> trace =
        stage("imu-ingest", [&] { return read_imu_csv(inputs.imu_path); });
    const KnowledgeBase kb = stage("knowledge-load", [&] { return load_knowledge_base(cfg); });

    result.wheeze = stage("wheeze-analysis", [&] { return analyze_audio(audio, cfg); });
    result.activity_states = stage("activity-analysis", [&] {
        return analyze_trace(trace, cfg.activity, cfg.posture);
    });
    result.activity_summary = summarize_states(result.activity_states, cfg.activity);

    result.facts = stage("inference", [&] {
        return build_session_facts(result.wheeze.overall, result.activity_summary,
                                   inputs.ambient, cfg.ambient);
    });
    result.inference =
        stage("inference", [&] { return infer(kb.rules, result.facts, kb.ontology); });

    result.input_lines = {
        {"audio.path", inputs.audio_path},
        {"audio.fnv1a64", file_digest_hex(inputs.audio_path)},
        {"audio.samples", std::to_string(audio.samples.size())},
        {"audio.duration_s", fmt_fixed(audio.duration_s())},
        {"imu.path", inputs.imu_path},
        {"imu.fnv1a64", file_digest_hex(inputs.imu_path)},
        {"imu.samples", std::to_string(trace.size())},
        {"ambient.temp_c", fmt_number(inputs.ambient.temp_c)},
        {"ambient.humidity_pct", fmt_number(inputs.ambient.humidity_pct)},
        {"ambient.pressure_hpa", fmt_number(inputs.ambient.pressure_hpa)},
        {"rules.source", kb.rules_source},
        {"rules.fnv1a64", kb.rules_digest},
        {"ontology.source", kb.ontology_source},
        {"ontology.fnv1a64", kb.ontology_digest},
    };
    return result;
}

std::string render_report(const MonitorResult& r) {
    std::string out;
    out += "asthmon monitor report\n";
    out += "======================\n";

    out += "\n[inputs]\n";
    for (const auto& [key, value] : r.input_lines) out += key + " = " + value + "\n";

    out += "\n[config]\n";
    for (const auto& [key, value] : r.config.entries()) out += key + " = " + value + "\n";

    out += "\n[wheeze]\n";
    out += "segments = " + std::to_string(r.wheeze.segments.size()) + "\n";
    const double step_s = r.wheeze.spectrogram.frame_step_s();
    for (std::size_t i = 0; i < r.wheeze.segments.size(); ++i) {
        const auto& seg = r.wheeze.segments[i];
        out += "segment." + std::to_string(i) + " = start_s=" +
               fmt_fixed(seg.start_frame * step_s, 3) + " end_s=" +
               fmt_fixed(seg.end_frame * step_s, 3) + " kind=" + to_string(seg.kind) + "\n";
    }
    out += "events = " + std::to_string(r.wheeze.events.size()) + "\n";
    for (std::size_t i = 0; i < r.wheeze.events.size(); ++i) {
        const auto& ev = r.wheeze.events[i];
        out += "event." + std::to_string(i) + " = start_s=" + fmt_fixed(ev.start_s, 3) +
               " end_s=" + fmt_fixed(ev.end_s, 3) + " freq_hz=" +
               fmt_fixed(ev.dominant_freq_hz, 1) + " corr=" + fmt_fixed(ev.mean_correlation, 4) +
               " segment=" + std::to_string(ev.segment_index) + "\n";
    }
    for (std::size_t i = 0; i < r.wheeze.cycle_metrics.size(); ++i) {
        const auto& m = r.wheeze.cycle_metrics[i];
        out += "cycle." + std::to_string(i) + " = segment=" +
               std::to_string(r.wheeze.cycle_segment_index[i]) + " cycle_s=" +
               fmt_fixed(m.cycle_s, 3) + " wheeze_s=" + fmt_fixed(m.total_wheeze_s, 3) +
               " proportion=" + fmt_fixed(m.proportion, 4) + " events=" +
               std::to_string(m.event_count) + "\n";
    }
    for (std::size_t i = 0; i < r.wheeze.adjacent_cycle_correlation.size(); ++i) {
        const auto& c = r.wheeze.adjacent_cycle_correlation[i];
        out += "cycle_correlation." + std::to_string(i) + " = " +
               (c ? fmt_fixed(*c, 4) : std::string("undefined")) + "\n";
    }
    out += "overall.cycle_s = " + fmt_fixed(r.wheeze.overall.cycle_s, 3) + "\n";
    out += "overall.wheeze_s = " + fmt_fixed(r.wheeze.overall.total_wheeze_s, 3) + "\n";
    out += "overall.proportion = " + fmt_fixed(r.wheeze.overall.proportion, 4) + "\n";
    out += "overall.events = " + std::to_string(r.wheeze.overall.event_count) + "\n";

    out += "\n[activity]\n";
    out += "windows = " + std::to_string(r.activity_states.size()) + "\n";
    for (std::size_t i = 0; i < r.activity_states.size(); ++i) {
        const auto& st = r.activity_states[i];
        out += "window." + std::to_string(i) + " = t_end_ms=" + fmt_fixed(st.t_end_ms, 0) +
               " am=" + fmt_fixed(st.am_value, 4) + " level=" + to_string(st.level) +
               " posture=" + to_string(st.posture) + "\n";
    }
    out += "summary.am_median = " + fmt_fixed(r.activity_summary.am_value, 4) + "\n";
    out += "summary.level = " + std::string(to_string(r.activity_summary.level)) + "\n";
    out += "summary.posture = " + std::string(to_string(r.activity_summary.posture)) + "\n";

    out += "\n[facts]\n";
    for (const auto& [key, fact] : r.facts.facts()) {
        out += key + " = " + to_display(fact.value) + "\n";
    }

    out += "\n[inference]\n";
    out += "fired = ";
    for (std::size_t i = 0; i < r.inference.fired.size(); ++i) {
        if (i > 0) out += ", ";
        out += r.inference.fired[i];
    }
    if (r.inference.fired.empty()) out += "(none)";
    out += "\n";
    for (const auto& f : r.inference.derived) {
        out += "derived." + f.key + " = " + to_display(f.value) + "\n";
    }
    out += "alert = " + std::string(to_string(r.inference.alert)) + "\n";
    return out;
}

void write_plot_data(const MonitorResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create plot directory '" + dir + "'");

    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = (fs::path(dir) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write '" + path + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    };

    std::string env_tsv = "frame\ttime_s\tband_power\n";
    for (std::size_t i = 0; i < r.wheeze.envelope.values.size(); ++i) {
        env_tsv += std::to_string(i) + "\t" +
                   fmt_fixed(r.wheeze.spectrogram.frame_times_s[i], 4) + "\t" +
                   fmt_fixed(r.wheeze.envelope.values[i], 9) + "\n";
    }
    write_file("envelope.tsv", env_tsv);

    const auto& spec = r.wheeze.spectrogram;
    std::string spec_tsv = "time_s";
    for (int k = 0; k < spec.bins; ++k) {
        spec_tsv += "\t" + fmt_fixed(spec.bin_freqs_hz[static_cast<std::size_t>(k)], 1);
    }
    spec_tsv += "\n";
    for (int m = 0; m < spec.frames; ++m) {
        spec_tsv += fmt_fixed(spec.frame_times_s[static_cast<std::size_t>(m)], 4);
        const auto row = spec.frame_row(m);
        for (int k = 0; k < spec.bins; ++k) {
            spec_tsv += "\t" + fmt_fixed(row[static_cast<std::size_t>(k)], 6);
        }
        spec_tsv += "\n";
    }
    write_file("spectrogram.tsv", spec_tsv);

    std::string am_tsv = "t_end_ms\tam\tlevel\tposture\n";
    for (const auto& st : r.activity_states) {
        am_tsv += fmt_fixed(st.t_end_ms, 0) + "\t" + fmt_fixed(st.am_value, 6) + "\t" +
                  to_string(st.level) + "\t" + to_string(st.posture) + "\n";
    }
    write_file("am_series.tsv", am_tsv);
}

CorpusEvaluation evaluate_corpus(const CorpusSpec& corpus, const SessionConfig& cfg,
                                 double tolerance_ms) {
    if (corpus.clips < 1) throw DataError("corpus needs at least one clip");
    cfg.validate();
    CorpusEvaluation out;
    out.outcomes.reserve(static_cast<std::size_t>(corpus.clips));
    for (int i = 0; i < corpus.clips; ++i) {
        const SynthClip clip = synth_breath(corpus_clip_spec(corpus, i));
        ClipOutcome oc;
        oc.labels = clip.labels;
        oc.detections = analyze_audio(clip.audio, cfg).events;
        out.outcomes.push_back(std::move(oc));
    }
    out.report = evaluate(out.outcomes, tolerance_ms);
    return out;
}

}  // namespace asthmon
