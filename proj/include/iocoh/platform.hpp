#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iocoh {

/// Physical PL interface paired with the buffer's memory attribute.
enum class InterfacePath {
    HP_NC,  ///< direct-to-memory port, non-cacheable buffer
    HP_C,   ///< direct-to-memory port, cacheable buffer with manual maintenance
    HPC,    ///< snooping coherent port (device -> cache coherency)
    ACP,    ///< direct L2 cache port, every access allocates
};

inline constexpr InterfacePath kAllPaths[] = {InterfacePath::HP_NC, InterfacePath::HPC,
                                              InterfacePath::ACP, InterfacePath::HP_C};

enum class Direction {
    CpuToPl,  ///< TX
    PlToCpu,  ///< RX
    PlToPl,
};

enum class PreState {
    Written,  ///< resident and dirty
    Read,     ///< resident and clean
    Flushed,  ///< not resident
};

enum class CpuRole { MostlyWrite, MixedReadWrite, MostlyRead };
enum class WritePattern { Sequential, MakeableSequential, Irregular };
enum class ConsumeLatency { Immediate, Delayed };

std::string_view to_string(InterfacePath p);
std::string_view to_string(Direction d);
std::string_view to_string(PreState s);
std::string_view to_string(CpuRole r);
std::string_view to_string(WritePattern w);
std::string_view to_string(ConsumeLatency c);

/// Human-facing label, e.g. "HP (NC)".
std::string_view display_name(InterfacePath p);

// Parsers accept the to_string() spelling case-insensitively plus a few
// short aliases (tx/rx, nc, ...). They throw std::invalid_argument.
InterfacePath parse_path(std::string_view s);
Direction parse_direction(std::string_view s);
PreState parse_pre_state(std::string_view s);
CpuRole parse_cpu_role(std::string_view s);
WritePattern parse_write_pattern(std::string_view s);
ConsumeLatency parse_consume_latency(std::string_view s);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid transfer/pipeline description (illegal path, missing assignment...).
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Bad input file content. what() reads "file:line: message".
class DataError : public std::runtime_error {
public:
    DataError(std::string file, std::size_t line, const std::string& message);
    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

struct PlatformConfig {
    std::uint32_t bus_width_bits = 128;
    std::uint64_t bus_freq_hz = 300'000'000;
    std::uint64_t l2_size_bytes = 1u << 20;
    std::uint32_t l2_ways = 16;
    std::uint32_t l2_line_bytes = 64;
    std::uint32_t dram_latency_cycles = 10;
    std::uint32_t snoop_penalty_cycles = 1;       ///< per snooped line
    std::uint32_t cache_miss_penalty_cycles = 3;  ///< per beat, on top of the data beat
    std::uint32_t wc_chunk_bits = 128;
    std::uint64_t bypass_threshold_bytes = 4 * 64;
    std::uint64_t seed = 0;

    std::uint64_t beat_bytes() const { return bus_width_bits / 8; }
    std::uint64_t wc_chunk_bytes() const { return wc_chunk_bits / 8; }
    std::uint64_t num_sets() const { return l2_size_bytes / (std::uint64_t{l2_ways} * l2_line_bytes); }
    double cycle_s() const { return 1.0 / static_cast<double>(bus_freq_hz); }
};

struct ConfigViolation {
    std::string field;
    std::string rule;
};

std::vector<ConfigViolation> validate_config(const PlatformConfig& config);

/// Throws ConfigError naming the first violation.
void require_valid(const PlatformConfig& config);

/// Bytes per second: bus_width_bits / 8 * bus_freq_hz.
double peak_bandwidth(const PlatformConfig& config);

struct TransferSpec {
    std::uint64_t size_bytes = 0;
    Direction direction = Direction::CpuToPl;
    InterfacePath path = InterfacePath::HP_NC;
    PreState pre_state = PreState::Flushed;
    std::uint64_t base_addr = 0;
};

struct WorkloadProfile {
    std::uint64_t buffer_bytes = 0;
    Direction direction = Direction::CpuToPl;
    CpuRole cpu_role = CpuRole::MostlyWrite;
    WritePattern write_pattern = WritePattern::Sequential;
    ConsumeLatency consume_latency = ConsumeLatency::Immediate;
    std::uint64_t intervening_traffic_bytes = 0;
    bool background_memory_intensive = false;

    bool operator==(const WorkloadProfile&) const = default;
};

/// Seconds. total_s is always the sum of the four parts.
struct CostBreakdown {
    double hw_transfer_s = 0.0;
    double maintenance_s = 0.0;
    double barrier_s = 0.0;
    double cpu_access_penalty_s = 0.0;
    double total_s = 0.0;

    static CostBreakdown make(double hw, double maintenance, double barrier, double cpu_penalty);
    CostBreakdown& operator+=(const CostBreakdown& other);
};

}  // namespace iocoh
