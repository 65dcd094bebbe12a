#pragma once

#include <string>
#include <vector>

#include "asthmon/activity.hpp"
#include "asthmon/rules.hpp"
#include "asthmon/signal.hpp"
#include "asthmon/wheeze.hpp"

namespace asthmon {

/// Breath-cycle segmentation knobs.
struct SegmentationConfig {
    int smoothing_frames = 5;
    double min_separation_s = 0.25;
    double noise_floor_quantile = 0.25;

    void validate() const;
    int min_separation_frames(const StftConfig& stft, int sample_rate_hz) const;
};

/// Everything one session needs, loadable from a layered key-value file with
/// CLI overrides. Unknown keys are rejected.
struct SessionConfig {
    StftConfig stft;
    TftdConfig tftd;
    SegmentationConfig segmentation;
    ActivityConfig activity;
    PostureConfig posture;
    AmbientConfig ambient;
    std::string rules_path;     // empty => shipped rule set
    std::string ontology_path;  // empty => shipped ontology

    void validate() const;

    /// Applies one `section.key = value` assignment. Throws DataError for
    /// unknown keys or unparseable values.
    void set(const std::string& key, const std::string& value);

    /// Stable `key = value` listing of every setting, for the report echo.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Parses `key = value` lines ('#' comments, blank lines ok) on top of the
/// defaults. Throws ParseError with the offending line.
SessionConfig load_config(const std::string& path);
SessionConfig parse_config(const std::string& text);

std::string render_config(const SessionConfig& cfg);

}  // namespace asthmon
