#pragma once

#include <string>

#include "asthmon/signal.hpp"

namespace asthmon {

/// Reads a RIFF/WAVE file. Accepts PCM 16-bit mono at the expected rate only;
/// anything else is rejected with a descriptive DataError (no silent
/// resampling or downmixing). Samples are normalized by division by 32768.
AudioBuffer read_wav(const std::string& path, int expected_rate_hz = kCanonicalSampleRateHz);

/// Writes a PCM 16-bit mono WAV. Samples are clamped to [-1, 1] and quantized
/// with round(s * 32768), so values read back by read_wav round-trip exactly.
void write_wav(const std::string& path, const AudioBuffer& buf);

}  // namespace asthmon
