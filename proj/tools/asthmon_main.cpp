// asthmon — desk-scale asthma monitoring toolkit.
//
// Subcommands: analyze-audio, classify-activity, monitor, synth, eval,
// check-rules. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 internal error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asthmon/config.hpp"
#include "asthmon/error.hpp"
#include "asthmon/eval.hpp"
#include "asthmon/imu_csv.hpp"
#include "asthmon/monitor.hpp"
#include "asthmon/synth.hpp"
#include "asthmon/textfmt.hpp"
#include "asthmon/wav.hpp"

namespace fs = std::filesystem;
using namespace asthmon;

namespace {

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "Config file (key = value lines)");
    cmd->add_option("--set", args.overrides, "Override one config key, as key=value")
        ->take_all();
}

SessionConfig resolve_config(const ConfigArgs& args) {
    SessionConfig cfg =
        args.config_path.empty() ? SessionConfig{} : load_config(args.config_path);
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw DataError("--set expects key=value, got '" + kv + "'");
        }
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + out_path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string wheeze_text(const WheezeAnalysis& analysis) {
    std::string out;
    const double step_s = analysis.spectrogram.frame_step_s();
    out += "segments = " + std::to_string(analysis.segments.size()) + "\n";
    for (std::size_t i = 0; i < analysis.segments.size(); ++i) {
        const auto& seg = analysis.segments[i];
        out += "segment." + std::to_string(i) + " = start_s=" +
               fmt_fixed(seg.start_frame * step_s, 3) + " end_s=" +
               fmt_fixed(seg.end_frame * step_s, 3) + " kind=" + to_string(seg.kind) + "\n";
    }
    out += "events = " + std::to_string(analysis.events.size()) + "\n";
    for (std::size_t i = 0; i < analysis.events.size(); ++i) {
        const auto& ev = analysis.events[i];
        out += "event." + std::to_string(i) + " = start_s=" + fmt_fixed(ev.start_s, 3) +
               " end_s=" + fmt_fixed(ev.end_s, 3) + " freq_hz=" +
               fmt_fixed(ev.dominant_freq_hz, 1) + " corr=" + fmt_fixed(ev.mean_correlation, 4) +
               "\n";
    }
    out += "overall.cycle_s = " + fmt_fixed(analysis.overall.cycle_s, 3) + "\n";
    out += "overall.wheeze_s = " + fmt_fixed(analysis.overall.total_wheeze_s, 3) + "\n";
    out += "overall.proportion = " + fmt_fixed(analysis.overall.proportion, 4) + "\n";
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"asthmon: wheeze detection, activity classification, and rule-based alerting"};
    app.require_subcommand(1);

    // analyze-audio
    auto* analyze = app.add_subcommand("analyze-audio", "Detect wheeze in a WAV recording");
    std::string analyze_wav;
    std::string analyze_out;
    ConfigArgs analyze_cfg;
    analyze->add_option("wav", analyze_wav, "PCM16 mono 8 kHz WAV file")->required();
    analyze->add_option("--out", analyze_out, "Write the report here instead of stdout");
    add_config_options(analyze, analyze_cfg);

    // classify-activity
    auto* classify = app.add_subcommand("classify-activity", "Classify an IMU CSV trace");
    std::string classify_csv;
    std::string classify_out;
    ConfigArgs classify_cfg;
    classify->add_option("csv", classify_csv, "IMU CSV trace")->required();
    classify->add_option("--out", classify_out, "Write the report here instead of stdout");
    add_config_options(classify, classify_cfg);

    // monitor
    auto* monitor = app.add_subcommand("monitor", "Full session: audio + IMU + ambient context");
    MonitorInputs mon_inputs;
    std::string mon_out, mon_plot_dir, mon_rules, mon_ontology;
    ConfigArgs mon_cfg;
    monitor->add_option("--audio", mon_inputs.audio_path, "WAV recording")->required();
    monitor->add_option("--imu", mon_inputs.imu_path, "IMU CSV trace")->required();
    monitor->add_option("--temp-c", mon_inputs.ambient.temp_c, "Ambient temperature, Celsius")
        ->required();
    monitor
        ->add_option("--humidity-pct", mon_inputs.ambient.humidity_pct,
                     "Relative humidity, percent")
        ->required();
    monitor->add_option("--pressure-hpa", mon_inputs.ambient.pressure_hpa,
                        "Air pressure, hPa (default 1013.25)");
    monitor->add_option("--rules", mon_rules, "Rule file (default: builtin set)");
    monitor->add_option("--ontology", mon_ontology, "Ontology file (default: builtin)");
    monitor->add_option("--out", mon_out, "Write the report here instead of stdout");
    monitor->add_option("--plot-dir", mon_plot_dir, "Emit envelope/spectrogram/AM data files");
    add_config_options(monitor, mon_cfg);

    // synth audio | imu | corpus
    auto* synth = app.add_subcommand("synth", "Generate labeled synthetic signals");
    synth->require_subcommand(1);

    auto* synth_audio = synth->add_subcommand("audio", "One breath clip, optionally with a wheeze");
    std::string sa_out, sa_labels;
    std::uint64_t sa_seed = 0;
    BreathSynthSpec sa_spec;
    double sa_wheeze_freq = 0.0, sa_wheeze_onset = -1.0, sa_wheeze_dur = 0.5;
    synth_audio->add_option("--out", sa_out, "Output WAV path")->required();
    synth_audio->add_option("--labels", sa_labels, "Write the label sidecar here");
    synth_audio->add_option("--seed", sa_seed, "RNG seed (default 0)");
    synth_audio->add_option("--cycle-s", sa_spec.cycle_s, "Breath cycle length, s (default 2.5)");
    synth_audio->add_option("--cycles", sa_spec.cycles, "Cycle count (default 2)");
    synth_audio->add_option("--snr-db", sa_spec.snr_db, "Tone-to-noise SNR, dB (default 10)");
    synth_audio->add_option("--wheeze-freq-hz", sa_wheeze_freq, "Add a wheeze at this frequency");
    synth_audio->add_option("--wheeze-onset-s", sa_wheeze_onset,
                            "Wheeze onset, s (must fall in an exhalation)");
    synth_audio->add_option("--wheeze-dur-s", sa_wheeze_dur, "Wheeze duration, s (default 0.5)");

    auto* synth_imu_cmd = synth->add_subcommand("imu", "One IMU trace for a scenario profile");
    std::string si_out, si_profile = "Sitting";
    double si_duration = 10.0;
    std::uint64_t si_seed = 0;
    synth_imu_cmd->add_option("--out", si_out, "Output CSV path")->required();
    synth_imu_cmd->add_option("--profile", si_profile,
                              "Sitting|Standing|Walking|Jogging|ForwardLeanEpisode");
    synth_imu_cmd->add_option("--duration-s", si_duration, "Trace length, s (default 10)");
    synth_imu_cmd->add_option("--seed", si_seed, "RNG seed (default 0)");

    auto* synth_corpus = synth->add_subcommand("corpus", "Labeled clip corpus for `eval`");
    std::string sc_dir;
    CorpusSpec sc_spec;
    synth_corpus->add_option("--dir", sc_dir, "Output directory")->required();
    synth_corpus->add_option("--clips", sc_spec.clips, "Clip count (default 200)");
    synth_corpus->add_option("--prevalence", sc_spec.prevalence,
                             "Fraction of clips with a wheeze (default 0.5)");
    synth_corpus->add_option("--snr-low", sc_spec.snr_low_db, "Minimum tone SNR, dB (default 5)");
    synth_corpus->add_option("--snr-high", sc_spec.snr_high_db,
                             "Maximum tone SNR, dB (default 20)");
    synth_corpus->add_option("--seed-base", sc_spec.seed_base, "First clip seed (default 0)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Score the detector against a labeled corpus");
    std::string eval_dir, eval_out;
    double eval_tolerance_ms = 250.0;
    ConfigArgs eval_cfg;
    eval_cmd->add_option("--corpus", eval_dir, "Directory from `synth corpus`")->required();
    eval_cmd->add_option("--tolerance-ms", eval_tolerance_ms,
                         "Event matching tolerance (default 250)");
    eval_cmd->add_option("--out", eval_out, "Write the report here instead of stdout");
    add_config_options(eval_cmd, eval_cfg);

    // check-rules
    auto* check = app.add_subcommand("check-rules", "Validate a rule file and ontology");
    std::string check_rules, check_ontology;
    check->add_option("--rules", check_rules, "Rule file (default: builtin set)");
    check->add_option("--ontology", check_ontology, "Ontology file (default: builtin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    if (*analyze) {
        const SessionConfig cfg = resolve_config(analyze_cfg);
        const AudioBuffer buf = read_wav(analyze_wav);
        const WheezeAnalysis analysis = analyze_audio(buf, cfg);
        emit(wheeze_text(analysis), analyze_out);
    } else if (*classify) {
        const SessionConfig cfg = resolve_config(classify_cfg);
        const auto trace = read_imu_csv(classify_csv);
        const auto states = analyze_trace(trace, cfg.activity, cfg.posture);
        const auto summary = summarize_states(states, cfg.activity);
        std::string out = "windows = " + std::to_string(states.size()) + "\n";
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& st = states[i];
            out += "window." + std::to_string(i) + " = t_end_ms=" + fmt_fixed(st.t_end_ms, 0) +
                   " am=" + fmt_fixed(st.am_value, 4) + " level=" + to_string(st.level) +
                   " posture=" + to_string(st.posture) + "\n";
        }
        out += "summary.am_median = " + fmt_fixed(summary.am_value, 4) + "\n";
        out += "summary.level = " + std::string(to_string(summary.level)) + "\n";
        out += "summary.posture = " + std::string(to_string(summary.posture)) + "\n";
        emit(out, classify_out);
    } else if (*monitor) {
        SessionConfig cfg = resolve_config(mon_cfg);
        if (!mon_rules.empty()) cfg.rules_path = mon_rules;
        if (!mon_ontology.empty()) cfg.ontology_path = mon_ontology;
        const MonitorResult result = run_monitor(mon_inputs, cfg);
        if (!mon_plot_dir.empty()) write_plot_data(result, mon_plot_dir);
        emit(render_report(result), mon_out);
    } else if (*synth_audio) {
        sa_spec.seed = sa_seed;
        if (sa_wheeze_freq > 0.0) {
            if (sa_wheeze_onset < 0.0) {
                // Default into the first exhalation.
                sa_wheeze_onset = sa_spec.cycle_s / 2.0 +
                                  (sa_spec.cycle_s / 2.0 - sa_wheeze_dur) / 2.0;
            }
            sa_spec.wheeze = WheezeSpec{sa_wheeze_onset, sa_wheeze_dur, sa_wheeze_freq, 0.0, true};
        }
        const SynthClip clip = synth_breath(sa_spec);
        write_wav(sa_out, clip.audio);
        if (!sa_labels.empty()) emit(format_labels(clip.labels), sa_labels);
    } else if (*synth_imu_cmd) {
        const auto trace = synth_imu(imu_profile_from_string(si_profile), si_duration, si_seed);
        write_imu_csv(si_out, trace);
    } else if (*synth_corpus) {
        std::error_code ec;
        fs::create_directories(sc_dir, ec);
        if (ec) throw DataError("cannot create corpus directory '" + sc_dir + "'");
        std::string manifest = "# clip wav labels seed wheeze\n";
        for (int i = 0; i < sc_spec.clips; ++i) {
            const BreathSynthSpec spec = corpus_clip_spec(sc_spec, i);
            const SynthClip clip = synth_breath(spec);
            char name[32];
            std::snprintf(name, sizeof(name), "clip_%04d", i);
            const std::string wav_path = (fs::path(sc_dir) / (std::string(name) + ".wav")).string();
            const std::string lbl_path =
                (fs::path(sc_dir) / (std::string(name) + ".labels")).string();
            write_wav(wav_path, clip.audio);
            emit(format_labels(clip.labels), lbl_path);
            manifest += std::string(name) + " " + std::to_string(spec.seed) + " " +
                        (spec.wheeze ? "1" : "0") + "\n";
        }
        emit(manifest, (fs::path(sc_dir) / "manifest.txt").string());
    } else if (*eval_cmd) {
        const SessionConfig cfg = resolve_config(eval_cfg);
        std::vector<fs::path> wavs;
        for (const auto& entry : fs::directory_iterator(eval_dir)) {
            if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
        }
        std::sort(wavs.begin(), wavs.end());
        if (wavs.empty()) throw DataError("no .wav clips found in '" + eval_dir + "'");
        std::vector<ClipOutcome> outcomes;
        outcomes.reserve(wavs.size());
        for (const auto& wav_path : wavs) {
            fs::path lbl_path = wav_path;
            lbl_path.replace_extension(".labels");
            std::ifstream lbl(lbl_path, std::ios::binary);
            if (!lbl) throw DataError("missing label sidecar '" + lbl_path.string() + "'");
            std::stringstream buffer;
            buffer << lbl.rdbuf();
            ClipOutcome oc;
            oc.labels = parse_labels(buffer.str());
            oc.detections = analyze_audio(read_wav(wav_path.string()), cfg).events;
            outcomes.push_back(std::move(oc));
        }
        const EvalReport report = evaluate(outcomes, eval_tolerance_ms);
        std::string out = "clips = " + std::to_string(wavs.size()) + "\n";
        out += render_eval_report(report);
        emit(out, eval_out);
    } else if (*check) {
        SessionConfig cfg;
        cfg.rules_path = check_rules;
        cfg.ontology_path = check_ontology;
        const KnowledgeBase kb = load_knowledge_base(cfg);
        std::cout << "rules = " << kb.rules.size() << " (" << kb.rules_source << ")\n";
        std::cout << "concepts = " << kb.ontology.concepts().size() << " ("
                  << kb.ontology_source << ")\n";
        std::cout << "ok\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
