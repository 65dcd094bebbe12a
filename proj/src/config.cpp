#include "asthmon/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "asthmon/error.hpp"
#include "asthmon/textfmt.hpp"

namespace asthmon {

void SegmentationConfig::validate() const {
    if (smoothing_frames < 1) throw DataError("segmentation.smoothing_frames must be >= 1");
    if (min_separation_s < 0.0) throw DataError("segmentation.min_separation_s must be >= 0");
    if (noise_floor_quantile < 0.0 || noise_floor_quantile > 1.0) {
        throw DataError("segmentation.noise_floor_quantile must lie in [0, 1]");
    }
}

int SegmentationConfig::min_separation_frames(const StftConfig& stft, int sample_rate_hz) const {
    const double step_s = static_cast<double>(stft.hop) / sample_rate_hz;
    return std::max(1, static_cast<int>(std::lround(min_separation_s / step_s)));
}

void SessionConfig::validate() const {
    stft.validate();
    tftd.validate();
    segmentation.validate();
    activity.validate();
    posture.validate();
    ambient.validate();
    const double nyquist = kCanonicalSampleRateHz / 2.0;
    if (tftd.band_high_hz > nyquist) {
        throw DataError("tftd.band_high_hz exceeds the Nyquist frequency");
    }
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw DataError("config key '" + key + "': malformed number '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw DataError("config key '" + key + "' requires an integer");
    return static_cast<int>(v);
}

}  // namespace

void SessionConfig::set(const std::string& key, const std::string& value) {
    if (key == "stft.frame_len") stft.frame_len = parse_int(key, value);
    else if (key == "stft.hop") stft.hop = parse_int(key, value);
    else if (key == "stft.window") stft.window = window_kind_from_string(value);
    else if (key == "tftd.band_low_hz") tftd.band_low_hz = parse_double(key, value);
    else if (key == "tftd.band_high_hz") tftd.band_high_hz = parse_double(key, value);
    else if (key == "tftd.corr_threshold") tftd.corr_threshold = parse_double(key, value);
    else if (key == "tftd.min_wheeze_ms") tftd.min_wheeze_ms = parse_double(key, value);
    else if (key == "tftd.min_peak_prominence_db") tftd.min_peak_prominence_db = parse_double(key, value);
    else if (key == "tftd.harmonic_count") tftd.harmonic_count = parse_int(key, value);
    else if (key == "segmentation.smoothing_frames") segmentation.smoothing_frames = parse_int(key, value);
    else if (key == "segmentation.min_separation_s") segmentation.min_separation_s = parse_double(key, value);
    else if (key == "segmentation.noise_floor_quantile") segmentation.noise_floor_quantile = parse_double(key, value);
    else if (key == "activity.sample_rate_hz") activity.sample_rate_hz = parse_double(key, value);
    else if (key == "activity.window_len") activity.window_len = parse_int(key, value);
    else if (key == "activity.stride") activity.stride = parse_int(key, value);
    else if (key == "activity.am_threshold") activity.am_threshold = parse_double(key, value);
    else if (key == "posture.lean_deg") posture.lean_deg = parse_double(key, value);
    else if (key == "posture.tilt_deg") posture.tilt_deg = parse_double(key, value);
    else if (key == "posture.lying_deg") posture.lying_deg = parse_double(key, value);
    else if (key == "posture.dwell_s") posture.dwell_s = parse_double(key, value);
    else if (key == "posture.baseline_s") posture.baseline_s = parse_double(key, value);
    else if (key == "ambient.cold_c") ambient.cold_c = parse_double(key, value);
    else if (key == "ambient.dry_pct") ambient.dry_pct = parse_double(key, value);
    else if (key == "rules.path") rules_path = value;
    else if (key == "ontology.path") ontology_path = value;
    else throw DataError("unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> SessionConfig::entries() const {
    return {
        {"activity.am_threshold", fmt_number(activity.am_threshold)},
        {"activity.sample_rate_hz", fmt_number(activity.sample_rate_hz)},
        {"activity.stride", std::to_string(activity.stride)},
        {"activity.window_len", std::to_string(activity.window_len)},
        {"ambient.cold_c", fmt_number(ambient.cold_c)},
        {"ambient.dry_pct", fmt_number(ambient.dry_pct)},
        {"ontology.path", ontology_path.empty() ? "(builtin)" : ontology_path},
        {"posture.baseline_s", fmt_number(posture.baseline_s)},
        {"posture.dwell_s", fmt_number(posture.dwell_s)},
        {"posture.lean_deg", fmt_number(posture.lean_deg)},
        {"posture.lying_deg", fmt_number(posture.lying_deg)},
        {"posture.tilt_deg", fmt_number(posture.tilt_deg)},
        {"rules.path", rules_path.empty() ? "(builtin)" : rules_path},
        {"segmentation.min_separation_s", fmt_number(segmentation.min_separation_s)},
        {"segmentation.noise_floor_quantile", fmt_number(segmentation.noise_floor_quantile)},
        {"segmentation.smoothing_frames", std::to_string(segmentation.smoothing_frames)},
        {"stft.frame_len", std::to_string(stft.frame_len)},
        {"stft.hop", std::to_string(stft.hop)},
        {"stft.window", to_string(stft.window)},
        {"tftd.band_high_hz", fmt_number(tftd.band_high_hz)},
        {"tftd.band_low_hz", fmt_number(tftd.band_low_hz)},
        {"tftd.corr_threshold", fmt_number(tftd.corr_threshold)},
        {"tftd.harmonic_count", std::to_string(tftd.harmonic_count)},
        {"tftd.min_peak_prominence_db", fmt_number(tftd.min_peak_prominence_db)},
        {"tftd.min_wheeze_ms", fmt_number(tftd.min_wheeze_ms)},
    };
}

SessionConfig parse_config(const std::string& text) {
    SessionConfig cfg;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected `key = value`", line_no);
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key before '='", line_no);
        try {
            cfg.set(key, value);
        } catch (const DataError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    cfg.validate();
    return cfg;
}

SessionConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string render_config(const SessionConfig& cfg) {
    std::string out;
    for (const auto& [key, value] : cfg.entries()) {
        out += key + " = " + value + "\n";
    }
    return out;
}

}  // namespace asthmon
