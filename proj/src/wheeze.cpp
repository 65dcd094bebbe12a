#include "asthmon/wheeze.hpp"

#include <algorithm>
#include <cmath>

#include "asthmon/error.hpp"

namespace asthmon {

const char* to_string(SegmentKind kind) {
    return kind == SegmentKind::Respiratory ? "Respiratory" : "Baseline";
}

void TftdConfig::validate() const {
    if (!(band_low_hz < band_high_hz)) throw DataError("tftd band: low must be below high");
    if (band_low_hz < 0.0) throw DataError("tftd band: low must be non-negative");
    if (!(corr_threshold > 0.0 && corr_threshold < 1.0)) {
        throw DataError("tftd.corr_threshold must lie in (0, 1)");
    }
    if (!(min_wheeze_ms > 0.0)) throw DataError("tftd.min_wheeze_ms must be positive");
    if (min_peak_prominence_db < 0.0) {
        throw DataError("tftd.min_peak_prominence_db must be non-negative");
    }
    if (harmonic_count < 1) throw DataError("tftd.harmonic_count must be at least 1");
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DataError("quantile of empty sequence");
    if (q < 0.0 || q > 1.0) throw DataError("quantile fraction must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

std::vector<BreathSegment> segment_breath_cycles(const Envelope& env,
                                                 const std::vector<int>& minima,
                                                 double noise_floor_quantile) {
    if (env.values.empty()) throw DataError("envelope is empty");
    const int n = static_cast<int>(env.values.size());
    const double floor_value = quantile(env.values, noise_floor_quantile);

    auto mean_of = [&](int lo, int hi) {
        double acc = 0.0;
        for (int i = lo; i < hi; ++i) acc += env.values[static_cast<std::size_t>(i)];
        return acc / (hi - lo);
    };
    auto classify = [&](int lo, int hi) {
        return mean_of(lo, hi) > floor_value ? SegmentKind::Respiratory
                                             : SegmentKind::Baseline;
    };

    std::vector<BreathSegment> out;
    if (minima.size() < 2) {
        out.push_back({0, n, classify(0, n)});
        return out;
    }
    // Boundary pieces around the minima keep the whole envelope covered.
    std::vector<int> cuts;
    cuts.reserve(minima.size() + 2);
    if (minima.front() > 0) cuts.push_back(0);
    cuts.insert(cuts.end(), minima.begin(), minima.end());
    if (minima.back() < n) cuts.push_back(n);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int lo = cuts[i];
        const int hi = cuts[i + 1];
        if (lo >= hi) throw DataError("segment minima must be increasing frame indices");
        out.push_back({lo, hi, classify(lo, hi)});
    }
    return out;
}

double spectral_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw DataError("correlation inputs must have equal nonzero length");
    }
    // Single-pass Welford-style update of means and (co)variances; the test
    // oracle uses an independent two-pass form.
    double mean_a = 0.0, mean_b = 0.0, caa = 0.0, cbb = 0.0, cab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double k = 1.0 / static_cast<double>(i + 1);
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        mean_a += da * k;
        mean_b += db * k;
        caa += da * (a[i] - mean_a);
        cbb += db * (b[i] - mean_b);
        cab += da * (b[i] - mean_b);
    }
    if (caa <= 0.0 || cbb <= 0.0) throw DataError("degenerate segment spectrum");
    const double r = cab / (std::sqrt(caa) * std::sqrt(cbb));
    return std::clamp(r, -1.0, 1.0);
}

namespace {

struct FramePeak {
    int bin = 0;
    double mag = 0.0;
    double freq_hz = 0.0;
};

std::optional<double> try_correlation(std::span<const double> a, std::span<const double> b) {
    try {
        return spectral_correlation(a, b);
    } catch (const DataError&) {
        return std::nullopt;
    }
}

/// Qualifying spectral peaks of one frame restricted to the band bins:
/// local maxima that clear the prominence gate over the frame's median band
/// magnitude. Returns indices into `band`.
std::vector<int> qualifying_peaks(std::span<const double> row, const std::vector<int>& band,
                                  double prominence_db) {
    std::vector<double> bm(band.size());
    for (std::size_t i = 0; i < band.size(); ++i) bm[i] = row[static_cast<std::size_t>(band[i])];
    std::vector<double> sorted(bm);
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double median = sorted[sorted.size() / 2];
    if (sorted.size() % 2 == 0) {
        const auto lower = std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
        median = (median + *lower) / 2.0;
    }
    const double gate = median * std::pow(10.0, prominence_db / 20.0);

    std::vector<int> peaks;
    const int nb = static_cast<int>(bm.size());
    for (int k = 0; k < nb; ++k) {
        const double v = bm[static_cast<std::size_t>(k)];
        if (v <= 0.0) continue;
        const bool left_ok = (k == 0) || v > bm[static_cast<std::size_t>(k - 1)];
        const bool right_ok = (k == nb - 1) || v >= bm[static_cast<std::size_t>(k + 1)];
        if (!left_ok || !right_ok) continue;
        if (median <= 0.0 || v >= gate) peaks.push_back(k);
    }
    return peaks;
}

}  // namespace

std::vector<WheezeEvent> detect_wheeze(const Spectrogram& spec,
                                       const std::vector<BreathSegment>& segments,
                                       const TftdConfig& cfg) {
    cfg.validate();
    std::vector<int> band;
    for (int k = 0; k < spec.bins; ++k) {
        const double f = spec.bin_freqs_hz[static_cast<std::size_t>(k)];
        if (f >= cfg.band_low_hz && f <= cfg.band_high_hz) band.push_back(k);
    }
    if (band.empty()) throw DataError("wheeze band captures no spectrogram bins");
    const double bin_width_hz = static_cast<double>(spec.sample_rate_hz) / spec.frame_len;
    const double step_s = spec.frame_step_s();

    std::vector<WheezeEvent> events;
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const BreathSegment& seg = segments[si];
        if (seg.kind != SegmentKind::Respiratory) continue;
        if (seg.start_frame < 0 || seg.end_frame > spec.frames || seg.start_frame >= seg.end_frame) {
            throw DataError("breath segment out of spectrogram range");
        }
        const int len = seg.end_frame - seg.start_frame;

        // Dominant qualifying peak per frame, if any. The harmonic requirement
        // counts qualifying peaks sitting near integer multiples of the
        // candidate fundamental.
        std::vector<std::optional<FramePeak>> dominant(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) {
            const auto row = spec.frame_row(seg.start_frame + i);
            const auto peaks = qualifying_peaks(row, band, cfg.min_peak_prominence_db);
            std::optional<FramePeak> best;
            for (int p : peaks) {
                const int bin = band[static_cast<std::size_t>(p)];
                const double freq = spec.bin_freqs_hz[static_cast<std::size_t>(bin)];
                if (cfg.harmonic_count > 1) {
                    int series = 1;
                    for (int h = 2; freq * h <= cfg.band_high_hz + bin_width_hz; ++h) {
                        const double target = freq * h;
                        const bool found = std::any_of(peaks.begin(), peaks.end(), [&](int q) {
                            const double fq =
                                spec.bin_freqs_hz[static_cast<std::size_t>(band[static_cast<std::size_t>(q)])];
                            return std::abs(fq - target) <= bin_width_hz;
                        });
                        if (found) ++series;
                    }
                    if (series < cfg.harmonic_count) continue;
                }
                const double m = row[static_cast<std::size_t>(bin)];
                if (!best || m > best->mag) best = FramePeak{bin, m, freq};
            }
            dominant[static_cast<std::size_t>(i)] = best;
        }

        // Continuity links between adjacent frames.
        std::vector<std::optional<double>> link(len > 0 ? static_cast<std::size_t>(len - 1) : 0);
        std::vector<double> band_a(band.size()), band_b(band.size());
        for (int i = 0; i + 1 < len; ++i) {
            const auto& pa = dominant[static_cast<std::size_t>(i)];
            const auto& pb = dominant[static_cast<std::size_t>(i + 1)];
            if (!pa || !pb) continue;
            if (std::abs(pa->bin - pb->bin) > 1) continue;
            const auto ra = spec.frame_row(seg.start_frame + i);
            const auto rb = spec.frame_row(seg.start_frame + i + 1);
            for (std::size_t k = 0; k < band.size(); ++k) {
                band_a[k] = ra[static_cast<std::size_t>(band[k])];
                band_b[k] = rb[static_cast<std::size_t>(band[k])];
            }
            const auto corr = try_correlation(band_a, band_b);
            if (corr && *corr >= cfg.corr_threshold) link[static_cast<std::size_t>(i)] = corr;
        }

        // Maximal linked runs that span the duration gate become events.
        int run_start = -1;
        for (int i = 0; i <= len - 1; ++i) {
            const bool linked = i < len - 1 && link[static_cast<std::size_t>(i)].has_value();
            if (linked && run_start < 0) run_start = i;
            if (!linked && run_start >= 0) {
                const int run_end = i;  // last frame of the run
                const double duration_ms = (run_end - run_start) * step_s * 1000.0;
                if (duration_ms >= cfg.min_wheeze_ms) {
                    WheezeEvent ev;
                    ev.segment_index = static_cast<int>(si);
                    ev.start_s = spec.frame_times_s[static_cast<std::size_t>(seg.start_frame + run_start)];
                    ev.end_s = spec.frame_times_s[static_cast<std::size_t>(seg.start_frame + run_end)];
                    double wsum = 0.0, fsum = 0.0, csum = 0.0;
                    for (int j = run_start; j <= run_end; ++j) {
                        const auto& p = dominant[static_cast<std::size_t>(j)];
                        wsum += p->mag;
                        fsum += p->mag * p->freq_hz;
                    }
                    for (int j = run_start; j < run_end; ++j) {
                        csum += *link[static_cast<std::size_t>(j)];
                    }
                    ev.dominant_freq_hz = wsum > 0.0 ? fsum / wsum : 0.0;
                    ev.mean_correlation = csum / (run_end - run_start);
                    events.push_back(ev);
                }
                run_start = -1;
            }
        }
    }
    return events;
}

WheezeMetrics wheeze_metrics(const std::vector<WheezeEvent>& events,
                             const BreathSegment& cycle, const Spectrogram& spec) {
    const double step_s = spec.frame_step_s();
    const double cycle_s = (cycle.end_frame - cycle.start_frame) * step_s;
    if (cycle_s <= 0.0) throw DataError("zero-length breath cycle");

    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(events.size());
    for (const auto& ev : events) intervals.emplace_back(ev.start_s, ev.end_s);
    std::sort(intervals.begin(), intervals.end());

    double total = 0.0;
    double cur_lo = 0.0, cur_hi = -1.0;
    for (const auto& [lo, hi] : intervals) {
        if (cur_hi < cur_lo || lo > cur_hi) {  // disjoint from current merge
            if (cur_hi >= cur_lo) total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (cur_hi >= cur_lo && !intervals.empty()) total += cur_hi - cur_lo;

    WheezeMetrics m;
    m.total_wheeze_s = std::min(total, cycle_s);
    m.cycle_s = cycle_s;
    m.proportion = std::clamp(m.total_wheeze_s / cycle_s, 0.0, 1.0);
    m.event_count = static_cast<int>(events.size());
    return m;
}

WheezeMetrics aggregate_metrics(const std::vector<WheezeMetrics>& per_cycle) {
    WheezeMetrics agg;
    for (const auto& m : per_cycle) {
        agg.total_wheeze_s += m.total_wheeze_s;
        agg.cycle_s += m.cycle_s;
        agg.event_count += m.event_count;
    }
    agg.proportion =
        agg.cycle_s > 0.0 ? std::clamp(agg.total_wheeze_s / agg.cycle_s, 0.0, 1.0) : 0.0;
    return agg;
}

std::vector<std::optional<double>> segment_correlations(
    const Spectrogram& spec, const std::vector<BreathSegment>& segments,
    const TftdConfig& cfg) {
    std::vector<int> band;
    for (int k = 0; k < spec.bins; ++k) {
        const double f = spec.bin_freqs_hz[static_cast<std::size_t>(k)];
        if (f >= cfg.band_low_hz && f <= cfg.band_high_hz) band.push_back(k);
    }
    if (band.empty()) throw DataError("wheeze band captures no spectrogram bins");

    std::vector<std::vector<double>> mean_spectra;
    for (const auto& seg : segments) {
        if (seg.kind != SegmentKind::Respiratory) continue;
        std::vector<double> mean(band.size(), 0.0);
        for (int m = seg.start_frame; m < seg.end_frame; ++m) {
            const auto row = spec.frame_row(m);
            for (std::size_t k = 0; k < band.size(); ++k) {
                mean[k] += row[static_cast<std::size_t>(band[k])];
            }
        }
        for (auto& v : mean) v /= (seg.end_frame - seg.start_frame);
        mean_spectra.push_back(std::move(mean));
    }

    std::vector<std::optional<double>> out;
    for (std::size_t i = 0; i + 1 < mean_spectra.size(); ++i) {
        out.push_back(try_correlation(mean_spectra[i], mean_spectra[i + 1]));
    }
    return out;
}

}  // namespace asthmon
