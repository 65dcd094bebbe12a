#include "asthmon/imu_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "asthmon/error.hpp"
#include "asthmon/textfmt.hpp"

namespace asthmon {

namespace {

constexpr const char* kHeader = "t_ms,ax,ay,az,pitch,roll,yaw";
constexpr const char* kFrameDecl = "# frame: linear";

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_field(const std::string& field, const char* name, int line_no) {
    const std::string trimmed = strip(field);
    double v = 0.0;
    const auto res = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), v);
    if (res.ec != std::errc() || res.ptr != trimmed.data() + trimmed.size()) {
        throw ParseError(std::string("malformed ") + name + " value '" + trimmed + "'", line_no);
    }
    return v;
}

void check_angle(double v, const char* name, int line_no) {
    if (v < -180.0 || v > 180.0) {
        throw ParseError(std::string(name) + " " + fmt_number(v) + " outside [-180, 180]",
                         line_no);
    }
}

}  // namespace

std::vector<ImuSample> parse_imu_csv(const std::string& text) {
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    bool frame_declared = false;
    bool header_seen = false;
    std::vector<ImuSample> trace;

    while (std::getline(stream, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (trimmed.empty()) continue;
        if (trimmed[0] == '#') {
            if (trimmed == kFrameDecl) frame_declared = true;
            else if (trimmed.rfind("# frame:", 0) == 0) {
                throw ParseError("unsupported frame declaration (expected '" +
                                     std::string(kFrameDecl) + "')",
                                 line_no);
            }
            continue;
        }
        if (!header_seen) {
            if (!frame_declared) {
                throw ParseError(std::string("missing frame declaration '") + kFrameDecl + "'",
                                 line_no);
            }
            if (trimmed != kHeader) {
                throw ParseError(std::string("header must be '") + kHeader + "'", line_no);
            }
            header_seen = true;
            continue;
        }

        std::vector<std::string> fields;
        std::string field;
        std::istringstream row(trimmed);
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw ParseError("expected 7 comma-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        ImuSample s;
        s.t_ms = parse_field(fields[0], "t_ms", line_no);
        s.ax = parse_field(fields[1], "ax", line_no);
        s.ay = parse_field(fields[2], "ay", line_no);
        s.az = parse_field(fields[3], "az", line_no);
        s.pitch_deg = parse_field(fields[4], "pitch", line_no);
        s.roll_deg = parse_field(fields[5], "roll", line_no);
        s.yaw_deg = parse_field(fields[6], "yaw", line_no);
        if (s.t_ms < 0.0) throw ParseError("t_ms must be non-negative", line_no);
        if (!trace.empty() && s.t_ms <= trace.back().t_ms) {
            throw ParseError("t_ms must be strictly increasing", line_no);
        }
        check_angle(s.pitch_deg, "pitch", line_no);
        check_angle(s.roll_deg, "roll", line_no);
        check_angle(s.yaw_deg, "yaw", line_no);
        trace.push_back(s);
    }
    if (!header_seen) {
        throw ParseError(std::string("missing header '") + kHeader + "'", line_no + 1);
    }
    return trace;
}

std::vector<ImuSample> read_imu_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open IMU CSV '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_imu_csv(buffer.str());
}

std::string format_imu_csv(const std::vector<ImuSample>& trace) {
    std::string out;
    out += kFrameDecl;
    out += "\n";
    out += kHeader;
    out += "\n";
    for (const auto& s : trace) {
        out += fmt_fixed(s.t_ms, 3) + "," + fmt_fixed(s.ax, 6) + "," + fmt_fixed(s.ay, 6) + "," +
               fmt_fixed(s.az, 6) + "," + fmt_fixed(s.pitch_deg, 4) + "," +
               fmt_fixed(s.roll_deg, 4) + "," + fmt_fixed(s.yaw_deg, 4) + "\n";
    }
    return out;
}

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write IMU CSV '" + path + "'");
    const std::string text = format_imu_csv(trace);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw DataError("failed writing IMU CSV '" + path + "'");
}

}  // namespace asthmon
