#pragma once

#include <iosfwd>
#include <string>

#include "iocoh/interconnect.hpp"
#include "iocoh/platform.hpp"
#include "iocoh/sw_cost.hpp"

namespace iocoh {

/// Everything a run needs besides its input files.
struct Settings {
    PlatformConfig platform;
    SwCostParams sw;
    CalibrationParams calibration = CalibrationParams::shipped();
};

// INI-style file, format described in docs/config-format.md:
//
//   # comment
//   [platform]
//   l2_size_bytes = 1MiB
//   bus_freq_hz   = 300MHz
//   [sw_cost]
//   barrier_s = 5us
//   [calibration]
//   hpc.rx_derate = 0.95
//
// Keys are the field names; absent keys keep their defaults. Unknown
// sections or keys, duplicates and unparsable values throw DataError with
// the line. A file that parses but breaks an invariant throws ConfigError.
Settings load_settings(std::istream& in, const std::string& name);
Settings load_settings_file(const std::string& path);

/// Writes every key with its current value; load_settings reads it back unchanged.
void write_settings(std::ostream& out, const Settings& settings);

/// Throws ConfigError naming the first violated rule across all three parts.
void require_valid(const Settings& settings);

}  // namespace iocoh
