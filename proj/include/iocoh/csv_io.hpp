#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "iocoh/calibration.hpp"
#include "iocoh/interconnect.hpp"

namespace iocoh {

// Sweep CSV, one row per point, header included:
//   path,direction,pre_state,size_bytes,bandwidth_Bps,elapsed_s
// path is HP, HPC or ACP; pre_state is written/read/flushed or "-" for HP.
// Doubles are written with 17 significant digits so the file round-trips.
inline constexpr const char* kSweepHeader = "path,direction,pre_state,size_bytes,bandwidth_Bps,elapsed_s";

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
std::vector<SweepPoint> read_sweep_csv(std::istream& in, const std::string& name);

// Anchor CSV: '#' starts a comment line, then a header and rows of
//   path,direction,pre_state,size_bytes,bandwidth_Bps,source
// size_bytes accepts suffixed sizes (4K, 1M); source is free text without commas.
inline constexpr const char* kAnchorHeader = "path,direction,pre_state,size_bytes,bandwidth_Bps,source";

std::vector<Anchor> read_anchors(std::istream& in, const std::string& name);
std::vector<Anchor> read_anchors_file(const std::string& path);
void write_anchors(std::ostream& out, const std::vector<Anchor>& anchors);

/// Splits on commas and trims each field; no quoting.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace iocoh
