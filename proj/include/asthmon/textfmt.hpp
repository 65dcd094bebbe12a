#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace asthmon {

/// Fixed-precision formatting. All report output goes through these helpers
/// so identical runs serialize to identical bytes.
inline std::string fmt_fixed(double v, int precision = 6) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

/// Integers print without a fractional part; everything else as fmt_fixed.
inline std::string fmt_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    return fmt_fixed(v);
}

}  // namespace asthmon
