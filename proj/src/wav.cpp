#include "asthmon/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "asthmon/error.hpp"

namespace asthmon {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

AudioBuffer read_wav(const std::string& path, int expected_rate_hz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open WAV file '" + path + "'");
    std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>()};
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw DataError("'" + path + "' is not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
        const unsigned char* chunk = bytes.data() + pos + 8;
        if (pos + 8 + chunk_len > bytes.size()) {
            throw DataError("'" + path + "' is truncated inside a chunk");
        }
        if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw DataError("'" + path + "' has a malformed fmt chunk");
            format = read_u16(chunk);
            channels = read_u16(chunk + 2);
            rate = read_u32(chunk + 4);
            bits = read_u16(chunk + 14);
            have_fmt = true;
        } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
            data = chunk;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) {
        throw DataError("'" + path + "' is missing fmt or data chunk");
    }
    if (format != 1) throw DataError("PCM encoding required, got format code " + std::to_string(format));
    if (channels != 1) throw DataError("mono required, got " + std::to_string(channels) + " channels");
    if (bits != 16) throw DataError("16-bit samples required, got " + std::to_string(bits));
    if (static_cast<int>(rate) != expected_rate_hz) {
        throw DataError(std::to_string(expected_rate_hz) + " Hz required, got " +
                        std::to_string(rate) + " Hz (resampling is not performed)");
    }

    AudioBuffer buf;
    buf.sample_rate_hz = static_cast<int>(rate);
    const std::size_t n = data_len / 2;
    buf.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int16_t v =
            static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
        buf.samples[i] = static_cast<double>(v) / 32768.0;
    }
    return buf;
}

void write_wav(const std::string& path, const AudioBuffer& buf) {
    const std::uint32_t data_len = static_cast<std::uint32_t>(buf.samples.size() * 2);
    std::string out;
    out.reserve(44 + data_len);
    out += "RIFF";
    put_u32(out, 36 + data_len);
    out += "WAVE";
    out += "fmt ";
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate_hz * 2));
    put_u16(out, 2);   // block align
    put_u16(out, 16);  // bits per sample
    out += "data";
    put_u32(out, data_len);
    for (double s : buf.samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const long q = std::lround(clamped * 32768.0);
        const std::int16_t v = static_cast<std::int16_t>(std::clamp(q, -32768l, 32767l));
        put_u16(out, static_cast<std::uint16_t>(v));
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write WAV file '" + path + "'");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw DataError("failed writing WAV file '" + path + "'");
}

}  // namespace asthmon
