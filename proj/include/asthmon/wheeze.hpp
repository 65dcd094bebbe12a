#pragma once

#include <optional>
#include <span>
#include <vector>

#include "asthmon/signal.hpp"

namespace asthmon {

enum class SegmentKind { Respiratory, Baseline };

const char* to_string(SegmentKind kind);

/// Half-open frame range [start_frame, end_frame) delimited by envelope
/// minima, labeled by whether it carries breath energy above the noise floor.
struct BreathSegment {
    int start_frame = 0;
    int end_frame = 0;
    SegmentKind kind = SegmentKind::Baseline;
};

/// One detected wheeze: a run of tonal frames linked by spectral correlation.
struct WheezeEvent {
    double start_s = 0.0;
    double end_s = 0.0;
    double dominant_freq_hz = 0.0;  // magnitude-weighted mean peak frequency
    double mean_correlation = 0.0;  // mean of inter-frame link correlations
    int segment_index = 0;          // index into the segment list it came from
};

struct WheezeMetrics {
    double total_wheeze_s = 0.0;
    double cycle_s = 0.0;
    double proportion = 0.0;  // total_wheeze_s / cycle_s, clamped to [0, 1]
    int event_count = 0;
};

/// Thresholds of the time-frequency detector. All config-exposed.
struct TftdConfig {
    double band_low_hz = 100.0;
    double band_high_hz = 2500.0;
    double corr_threshold = 0.7;          // inter-frame spectral correlation gate
    double min_wheeze_ms = 80.0;          // minimum linked-run duration
    double min_peak_prominence_db = 6.0;  // peak over frame median band magnitude
    int harmonic_count = 1;               // spectral peaks required in the harmonic series

    void validate() const;  // throws DataError on violation
};

/// Cuts the envelope at the given minima into breath segments and labels each
/// against the noise floor (the given quantile of all envelope values,
/// exceeded strictly by the segment mean => Respiratory). Pieces before the
/// first minimum and after the last are kept as segments of their own, so the
/// whole envelope is covered; with fewer than two minima the single segment
/// spans everything.
std::vector<BreathSegment> segment_breath_cycles(const Envelope& env,
                                                 const std::vector<int>& minima,
                                                 double noise_floor_quantile);

/// Pearson correlation coefficient of two equal-length sequences.
/// Throws DataError("degenerate segment spectrum") when either input has zero
/// variance.
double spectral_correlation(std::span<const double> a, std::span<const double> b);

/// Linear-interpolated quantile of the values (q in [0, 1]).
double quantile(std::vector<double> values, double q);

/// TFTD detection inside each Respiratory segment: per-frame spectral peaks in
/// the wheeze band that clear the prominence gate are linked across adjacent
/// frames when the band spectra correlate at or above corr_threshold and the
/// peak drifts by at most one bin; a linked run spanning min_wheeze_ms becomes
/// an event. Returns time-ordered, non-overlapping events; empty means no
/// wheeze.
std::vector<WheezeEvent> detect_wheeze(const Spectrogram& spec,
                                       const std::vector<BreathSegment>& segments,
                                       const TftdConfig& cfg);

/// Duration and proportion of wheeze inside one breath cycle. Overlapping
/// event intervals are merged before summing. Throws DataError on a
/// zero-length cycle.
WheezeMetrics wheeze_metrics(const std::vector<WheezeEvent>& events,
                             const BreathSegment& cycle, const Spectrogram& spec);

/// Sums per-cycle metrics into one recording-level summary.
WheezeMetrics aggregate_metrics(const std::vector<WheezeMetrics>& per_cycle);

/// Diagnostic from the segment-to-segment view: Pearson correlation of the
/// mean band spectra of each adjacent pair of Respiratory segments. Entries
/// are nullopt when a segment spectrum is degenerate.
std::vector<std::optional<double>> segment_correlations(
    const Spectrogram& spec, const std::vector<BreathSegment>& segments,
    const TftdConfig& cfg);

}  // namespace asthmon
