#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iocoh/platform.hpp"

namespace iocoh {

enum class RegionKind { Cacheable, NonCacheable };

std::string_view to_string(RegionKind k);
RegionKind parse_region_kind(std::string_view s);

/// CPU-side cost constants.
///
/// Streaming rates are for an A53-class core working on cacheable data.
/// The barrier dominates maintenance: the share of an HP transfer spent on
/// maintenance is above 50% at 4 KiB and below 10% at 16 MiB with these
/// defaults. The two transpose penalties split at the L2 size.
struct SwCostParams {
    double cacheable_read_Bps = 6.4e9;
    double cacheable_write_Bps = 4.8e9;
    double nc_read_penalty = 30.0;
    double nc_irregular_write_penalty_small = 4.0;
    double nc_irregular_write_penalty_large = 1.33;
    double maintenance_per_byte_s = 1.0e-11;
    double barrier_s = 15.0e-6;
    double barrier_contended_multiplier = 2.0;
};

std::vector<ConfigViolation> validate_sw_params(const SwCostParams& params);

struct MemcpyCost {
    double read_s = 0.0;
    double write_s = 0.0;
    double total_s = 0.0;
};

/// Reads pay nc_read_penalty from non-cacheable memory; sequential writes to
/// non-cacheable memory run at the cacheable rate (write-combining).
/// Throws DomainError for size 0.
MemcpyCost memcpy_cost(RegionKind src, RegionKind dst, std::uint64_t size, const SwCostParams& params);

/// Irregular (transpose-like) writes of a working set. Cacheable costs
/// working_set / cacheable_write_Bps; non-cacheable multiplies that by the
/// small or large penalty depending on whether the set fits in L2.
double irregular_write_cost(RegionKind dst, std::uint64_t working_set_bytes, std::uint64_t l2_size_bytes,
                            const SwCostParams& params);

/// Penalty factor irregular_write_cost applies.
double irregular_write_factor(RegionKind dst, std::uint64_t working_set_bytes, std::uint64_t l2_size_bytes,
                              const SwCostParams& params);

struct MaintenanceCost {
    double flush_s = 0.0;
    double barrier_s = 0.0;
    double total_s = 0.0;
    bool contended = false;  ///< reports flag when the contended multiplier was applied
};

/// One flush/invalidate pass per buffer plus one global barrier per buffer.
/// Direction does not enter: cleaning and invalidating cost the same here.
MaintenanceCost maintenance_cost(std::span<const std::uint64_t> buffer_sizes, bool contended,
                                 const SwCostParams& params);

enum class AccessPattern { Sequential, Irregular };

struct CpuStage {
    std::uint64_t bytes_read = 0;
    std::uint64_t bytes_written = 0;
    AccessPattern write_pattern = AccessPattern::Sequential;
    RegionKind src_kind = RegionKind::Cacheable;
    RegionKind dst_kind = RegionKind::Cacheable;
};

struct CpuStageCost {
    double read_s = 0.0;
    double write_s = 0.0;
    double total_s = 0.0;
    double penalty_s = 0.0;  ///< share of total_s above the all-cacheable cost
};

/// Reads at the memcpy read rate; writes either sequential (WC-aware) or
/// through irregular_write_cost with the written bytes as working set.
CpuStageCost cpu_stage_cost(const CpuStage& stage, std::uint64_t l2_size_bytes, const SwCostParams& params);

}  // namespace iocoh
