#pragma once

#include <string>
#include <vector>

#include "asthmon/activity.hpp"

namespace asthmon {

/// Reads an IMU trace. Expected layout:
///
///   # frame: linear
///   t_ms,ax,ay,az,pitch,roll,yaw
///   0,0.01,-0.02,0.00,1.2,0.4,12.0
///   ...
///
/// The frame declaration is mandatory (only gravity-removed traces are
/// accepted). Timestamps must be strictly increasing and angles within
/// [-180, 180]; violations raise ParseError with the offending line number.
std::vector<ImuSample> read_imu_csv(const std::string& path);

std::vector<ImuSample> parse_imu_csv(const std::string& text);  // same checks

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& trace);

std::string format_imu_csv(const std::vector<ImuSample>& trace);

}  // namespace asthmon
