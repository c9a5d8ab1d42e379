#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iocoh/cache.hpp"
#include "iocoh/platform.hpp"

namespace iocoh {

/// Fitted timing coefficients. Every *_cycles value is bus cycles spent in
/// addition to the one cycle each data beat occupies, so no coefficient
/// setting can push a path above peak bandwidth.
struct CalibrationParams {
    struct Hp {
        double startup_cycles = 0.0;
    };
    struct Hpc {
        double startup_cycles = 0.0;
        double snoop_per_beat_cycles = 0.0;
        double cached_tx_per_byte_penalty_s = 0.0;  ///< per resident-dirty byte read through the snoop path
        double rx_derate = 1.0;                     ///< RX bandwidth relative to HP, in (0, 1]
    };
    struct Acp {
        double hit_per_beat_cycles = 0.0;
        double miss_per_beat_cycles = 0.0;
    };

    Hp hp;
    Hpc hpc;
    Acp acp;
    std::string provenance;

    /// Uncalibrated values derived from the platform's nominal latencies.
    static CalibrationParams nominal(const PlatformConfig& config);

    /// Result of fitting data/anchors.csv with the default platform; the
    /// calibration test re-derives these from the file.
    static CalibrationParams shipped();
};

std::vector<ConfigViolation> validate_params(const CalibrationParams& params);

struct CacheEvents {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t evictions = 0;
    std::uint64_t snoops = 0;
};

/// Everything about a transfer that does not depend on timing coefficients.
/// Elapsed time is linear in the coefficients given these counts (HPC RX
/// is linear in hp.startup / rx_derate), which is what calibration relies on.
struct TransferTerms {
    InterfacePath path = InterfacePath::HP_NC;
    Direction direction = Direction::CpuToPl;
    std::uint64_t size_bytes = 0;
    std::uint64_t beats = 0;
    std::uint64_t hit_beats = 0;   ///< ACP only
    std::uint64_t miss_beats = 0;  ///< ACP only
    std::uint64_t dirty_resident_bytes = 0;  ///< HPC TX only
    double resident_fraction = 0.0;          ///< of the buffer, before the transfer
    CacheEvents events;
};

double elapsed_seconds(const TransferTerms& terms, const CalibrationParams& params, const PlatformConfig& config);

struct TransferResult {
    double elapsed_s = 0.0;
    double effective_bandwidth = 0.0;
    std::uint64_t beats = 0;
    double resident_fraction = 0.0;
    CacheEvents cache_events;
    CacheState post_state;
};

/// True when the path can carry the direction (PL->PL only over HP).
bool path_legal(InterfacePath path, Direction direction);

/// Applies the transfer's cache side effects in place and returns its
/// coefficient-free terms. base_addr is rounded down to a line boundary.
/// Throws SpecError for an illegal path/direction or a zero size.
TransferTerms run_transfer(const TransferSpec& spec, CacheState& cache, const PlatformConfig& config);

/// Pure form: the input cache is copied, the copy becomes post_state.
TransferResult simulate_transfer(const TransferSpec& spec, const CacheState& cache, const PlatformConfig& config,
                                 const CalibrationParams& params);

/// Puts a buffer into a measurement pre-state: Written touches every line
/// with an allocating write, Read with an allocating read, Flushed cleans
/// and invalidates the range.
void prepare_pre_state(std::uint64_t base, std::uint64_t len, PreState pre, CacheState& cache);

// ---------------------------------------------------------------------------
// Sweeps.

/// One curve of a sweep: HP rows carry no pre-state (HP never looks at the cache).
struct SweepCase {
    InterfacePath path = InterfacePath::HP_NC;
    std::optional<PreState> pre_state;

    bool operator==(const SweepCase&) const = default;
};

/// The five preparations measured per direction: HP, HPC and ACP each after
/// Written (TX) or Read (RX), and after Flushed.
std::vector<SweepCase> standard_cases(Direction direction);

struct SweepPoint {
    SweepCase sweep_case;
    Direction direction = Direction::CpuToPl;
    std::uint64_t size_bytes = 0;
    double bandwidth_Bps = 0.0;
    double elapsed_s = 0.0;
};

/// Base address of the unrelated data that fills a warm cache.
inline constexpr std::uint64_t kBackgroundBase = std::uint64_t{1} << 40;

/// Coefficient-free terms of one sweep point.
TransferTerms sweep_point_terms(std::uint64_t size, Direction direction, const SweepCase& c,
                                const PlatformConfig& config);

/// Runs one (size, case) point on a fresh warm cache with the buffer at address 0.
SweepPoint sweep_point(std::uint64_t size, Direction direction, const SweepCase& c, const PlatformConfig& config,
                       const CalibrationParams& params);

/// Reference implementation: one point after another.
std::vector<SweepPoint> sweep_serial(std::span<const std::uint64_t> sizes, Direction direction,
                                     std::span<const SweepCase> cases, const PlatformConfig& config,
                                     const CalibrationParams& params);

/// OpenMP fan-out over (size, case); output order matches sweep_serial.
/// Throws SpecError if sizes is empty or not ascending.
std::vector<SweepPoint> sweep(std::span<const std::uint64_t> sizes, Direction direction,
                              std::span<const SweepCase> cases, const PlatformConfig& config,
                              const CalibrationParams& params);

/// Label used in CSV path columns: "HP" for either HP variant.
std::string sweep_path_label(InterfacePath path);

}  // namespace iocoh
