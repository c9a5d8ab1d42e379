#include "iocoh/sw_cost.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

namespace iocoh {

std::string_view to_string(RegionKind k) { return k == RegionKind::Cacheable ? "cacheable" : "noncacheable"; }

RegionKind parse_region_kind(std::string_view s) {
    std::string k;
    for (unsigned char c : s) {
        if (c != '_' && c != '-') k.push_back(static_cast<char>(std::tolower(c)));
    }
    if (k == "cacheable" || k == "c") return RegionKind::Cacheable;
    if (k == "noncacheable" || k == "nc") return RegionKind::NonCacheable;
    throw std::invalid_argument("unknown region kind '" + std::string(s) + "'");
}

std::vector<ConfigViolation> validate_sw_params(const SwCostParams& p) {
    std::vector<ConfigViolation> out;
    auto positive = [&](double v, const char* f) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back({f, "must be finite and > 0"});
    };
    auto at_least_one = [&](double v, const char* f) {
        if (!(v >= 1.0) || !std::isfinite(v)) out.push_back({f, "must be >= 1"});
    };
    positive(p.cacheable_read_Bps, "cacheable_read_Bps");
    positive(p.cacheable_write_Bps, "cacheable_write_Bps");
    positive(p.maintenance_per_byte_s, "maintenance_per_byte_s");
    positive(p.barrier_s, "barrier_s");
    if (!(p.nc_read_penalty > 1.0)) out.push_back({"nc_read_penalty", "must be > 1"});
    at_least_one(p.nc_irregular_write_penalty_small, "nc_irregular_write_penalty_small");
    at_least_one(p.nc_irregular_write_penalty_large, "nc_irregular_write_penalty_large");
    at_least_one(p.barrier_contended_multiplier, "barrier_contended_multiplier");
    return out;
}

MemcpyCost memcpy_cost(RegionKind src, RegionKind dst, std::uint64_t size, const SwCostParams& p) {
    if (size == 0) throw DomainError("memcpy_cost: size must be positive");
    (void)dst;  // sequential NC writes are write-combined to full speed
    const double bytes = static_cast<double>(size);
    const double read_rate = src == RegionKind::NonCacheable ? p.cacheable_read_Bps / p.nc_read_penalty
                                                             : p.cacheable_read_Bps;
    MemcpyCost c;
    c.read_s = bytes / read_rate;
    c.write_s = bytes / p.cacheable_write_Bps;
    c.total_s = c.read_s + c.write_s;
    return c;
}

double irregular_write_factor(RegionKind dst, std::uint64_t working_set_bytes, std::uint64_t l2_size_bytes,
                              const SwCostParams& p) {
    if (dst == RegionKind::Cacheable) return 1.0;
    return working_set_bytes <= l2_size_bytes ? p.nc_irregular_write_penalty_small
                                              : p.nc_irregular_write_penalty_large;
}

double irregular_write_cost(RegionKind dst, std::uint64_t working_set_bytes, std::uint64_t l2_size_bytes,
                            const SwCostParams& p) {
    if (working_set_bytes == 0) throw DomainError("irregular_write_cost: working set must be positive");
    return static_cast<double>(working_set_bytes) / p.cacheable_write_Bps *
           irregular_write_factor(dst, working_set_bytes, l2_size_bytes, p);
}

MaintenanceCost maintenance_cost(std::span<const std::uint64_t> buffer_sizes, bool contended, const SwCostParams& p) {
    MaintenanceCost c;
    const auto bytes = std::accumulate(buffer_sizes.begin(), buffer_sizes.end(), std::uint64_t{0});
    c.flush_s = static_cast<double>(bytes) * p.maintenance_per_byte_s;
    c.barrier_s = static_cast<double>(buffer_sizes.size()) * p.barrier_s *
                  (contended ? p.barrier_contended_multiplier : 1.0);
    c.total_s = c.flush_s + c.barrier_s;
    c.contended = contended && !buffer_sizes.empty();
    return c;
}

CpuStageCost cpu_stage_cost(const CpuStage& s, std::uint64_t l2_size_bytes, const SwCostParams& p) {
    CpuStageCost c;
    if (s.bytes_read > 0) {
        c.read_s = memcpy_cost(s.src_kind, RegionKind::Cacheable, s.bytes_read, p).read_s;
        const double base = memcpy_cost(RegionKind::Cacheable, RegionKind::Cacheable, s.bytes_read, p).read_s;
        c.penalty_s += c.read_s - base;
    }
    if (s.bytes_written > 0) {
        if (s.write_pattern == AccessPattern::Sequential) {
            c.write_s = static_cast<double>(s.bytes_written) / p.cacheable_write_Bps;
        } else {
            c.write_s = irregular_write_cost(s.dst_kind, s.bytes_written, l2_size_bytes, p);
            c.penalty_s += c.write_s - irregular_write_cost(RegionKind::Cacheable, s.bytes_written, l2_size_bytes, p);
        }
    }
    c.total_s = c.read_s + c.write_s;
    return c;
}

}  // namespace iocoh
