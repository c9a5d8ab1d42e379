#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "iocoh/interconnect.hpp"

namespace iocoh {

/// One measured point: a sweep case at one size and the bandwidth read for it.
struct Anchor {
    SweepCase sweep_case;
    Direction direction = Direction::CpuToPl;
    std::uint64_t size_bytes = 0;
    double bandwidth_Bps = 0.0;
    std::string source;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnchorResidual {
    Anchor anchor;
    double model_bandwidth_Bps = 0.0;
    double relative_error = 0.0;  ///< model / measured - 1
};

struct CalibrationResult {
    CalibrationParams params;
    std::vector<std::string> fitted;  ///< coefficient names that came from the anchors
    std::vector<AnchorResidual> residuals;
    double max_abs_relative_error = 0.0;
};

/// Least-squares fit of the coefficients the anchors constrain.
///
/// Each anchor is replayed exactly as a sweep point (warm cache, buffer at
/// 0, pre-state prepared), which yields coefficient-free transfer terms.
/// Elapsed time is linear in the coefficients, so the fit minimises the
/// relative elapsed-time error with a pivoted QR solve; coefficients that
/// come out negative are pinned to zero and the rest refitted. The RX derate
/// is fitted afterwards against the (fitted or base) HP startup.
/// Coefficients without anchors keep their value from `base`.
///
/// Throws CalibrationError on an empty anchor list, a non-positive
/// bandwidth, or anchors that leave a coefficient undetermined (the message
/// lists the anchor classes to add).
CalibrationResult calibrate(std::span<const Anchor> anchors, const PlatformConfig& config,
                            const CalibrationParams& base);

/// Same replay calibrate() uses; exposed for round-trip tests.
double model_bandwidth(const Anchor& anchor, const PlatformConfig& config, const CalibrationParams& params);

}  // namespace iocoh
