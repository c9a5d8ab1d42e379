#include "iocoh/platform.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace iocoh {

DataError::DataError(std::string file, std::size_t line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), file_(std::move(file)), line_(line) {}


namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::erase_if(out, [](char c) { return c == '_' || c == '-' || c == ' ' || c == '(' || c == ')'; });
    return out;
}

[[noreturn]] void bad_enum(std::string_view kind, std::string_view s) {
    throw std::invalid_argument("unknown " + std::string(kind) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(InterfacePath p) {
    switch (p) {
        case InterfacePath::HP_NC: return "HP_NC";
        case InterfacePath::HP_C: return "HP_C";
        case InterfacePath::HPC: return "HPC";
        case InterfacePath::ACP: return "ACP";
    }
    return "?";
}

std::string_view display_name(InterfacePath p) {
    switch (p) {
        case InterfacePath::HP_NC: return "HP (NC)";
        case InterfacePath::HP_C: return "HP (C)";
        case InterfacePath::HPC: return "HPC";
        case InterfacePath::ACP: return "ACP";
    }
    return "?";
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::CpuToPl: return "tx";
        case Direction::PlToCpu: return "rx";
        case Direction::PlToPl: return "pl2pl";
    }
    return "?";
}

std::string_view to_string(PreState s) {
    switch (s) {
        case PreState::Written: return "written";
        case PreState::Read: return "read";
        case PreState::Flushed: return "flushed";
    }
    return "?";
}

std::string_view to_string(CpuRole r) {
    switch (r) {
        case CpuRole::MostlyWrite: return "mostly_write";
        case CpuRole::MixedReadWrite: return "mixed";
        case CpuRole::MostlyRead: return "mostly_read";
    }
    return "?";
}

std::string_view to_string(WritePattern w) {
    switch (w) {
        case WritePattern::Sequential: return "sequential";
        case WritePattern::MakeableSequential: return "makeable_sequential";
        case WritePattern::Irregular: return "irregular";
    }
    return "?";
}

std::string_view to_string(ConsumeLatency c) {
    switch (c) {
        case ConsumeLatency::Immediate: return "immediate";
        case ConsumeLatency::Delayed: return "delayed";
    }
    return "?";
}

InterfacePath parse_path(std::string_view s) {
    std::string k;
    for (unsigned char c : s) {
        if (c == ' ' || c == '-') continue;
        k.push_back(static_cast<char>(std::toupper(c)));
    }
    if (k == "HP_NC" || k == "HP(NC)" || k == "HPNC") return InterfacePath::HP_NC;
    if (k == "HP_C" || k == "HP(C)") return InterfacePath::HP_C;
    if (k == "HPC") return InterfacePath::HPC;
    if (k == "ACP") return InterfacePath::ACP;
    bad_enum("interface path", s);
}

Direction parse_direction(std::string_view s) {
    const auto k = lower(s);
    if (k == "tx" || k == "cputopl" || k == "cpu2pl") return Direction::CpuToPl;
    if (k == "rx" || k == "pltocpu" || k == "pl2cpu") return Direction::PlToCpu;
    if (k == "pl2pl" || k == "pltopl") return Direction::PlToPl;
    bad_enum("direction", s);
}

PreState parse_pre_state(std::string_view s) {
    const auto k = lower(s);
    if (k == "written" || k == "write") return PreState::Written;
    if (k == "read") return PreState::Read;
    if (k == "flushed" || k == "flush") return PreState::Flushed;
    bad_enum("pre-state", s);
}

CpuRole parse_cpu_role(std::string_view s) {
    const auto k = lower(s);
    if (k == "mostlywrite" || k == "write") return CpuRole::MostlyWrite;
    if (k == "mixed" || k == "mixedreadwrite" || k == "readwrite") return CpuRole::MixedReadWrite;
    if (k == "mostlyread" || k == "read") return CpuRole::MostlyRead;
    bad_enum("cpu role", s);
}

WritePattern parse_write_pattern(std::string_view s) {
    const auto k = lower(s);
    if (k == "sequential" || k == "seq") return WritePattern::Sequential;
    if (k == "makeablesequential" || k == "makeable") return WritePattern::MakeableSequential;
    if (k == "irregular" || k == "random") return WritePattern::Irregular;
    bad_enum("write pattern", s);
}

ConsumeLatency parse_consume_latency(std::string_view s) {
    const auto k = lower(s);
    if (k == "immediate") return ConsumeLatency::Immediate;
    if (k == "delayed") return ConsumeLatency::Delayed;
    bad_enum("consume latency", s);
}

std::vector<ConfigViolation> validate_config(const PlatformConfig& c) {
    std::vector<ConfigViolation> out;
    auto check = [&](bool ok, const char* field, const char* rule) {
        if (!ok) out.push_back({field, rule});
    };
    check(c.bus_width_bits > 0, "bus_width_bits", "must be positive");
    check(c.bus_width_bits % 8 == 0, "bus_width_bits", "must be a whole number of bytes");
    check(c.bus_freq_hz > 0, "bus_freq_hz", "must be positive");
    check(c.l2_size_bytes > 0, "l2_size_bytes", "must be positive");
    check(c.l2_ways > 0, "l2_ways", "must be positive");
    check(c.l2_line_bytes > 0, "l2_line_bytes", "must be positive");
    check(c.wc_chunk_bits > 0, "wc_chunk_bits", "must be positive");
    check(c.wc_chunk_bits % 8 == 0, "wc_chunk_bits", "must be a whole number of bytes");
    if (c.l2_ways > 0 && c.l2_line_bytes > 0) {
        const std::uint64_t way_set = std::uint64_t{c.l2_ways} * c.l2_line_bytes;
        check(c.l2_size_bytes % way_set == 0, "l2_size_bytes",
              "must be a multiple of l2_ways * l2_line_bytes");
    }
    if (c.bus_width_bits >= 8 && c.l2_line_bytes > 0) {
        check(c.l2_line_bytes % (c.bus_width_bits / 8) == 0, "l2_line_bytes",
              "must be a multiple of the bus beat size");
    }
    return out;
}

void require_valid(const PlatformConfig& config) {
    const auto v = validate_config(config);
    if (!v.empty()) throw ConfigError("invalid platform config: " + v.front().field + " " + v.front().rule);
}

double peak_bandwidth(const PlatformConfig& config) {
    if (config.bus_width_bits == 0) throw ConfigError("invalid platform config: bus_width_bits must be positive");
    if (config.bus_freq_hz == 0) throw ConfigError("invalid platform config: bus_freq_hz must be positive");
    return static_cast<double>(config.bus_width_bits) / 8.0 * static_cast<double>(config.bus_freq_hz);
}

CostBreakdown CostBreakdown::make(double hw, double maintenance, double barrier, double cpu_penalty) {
    return {hw, maintenance, barrier, cpu_penalty, hw + maintenance + barrier + cpu_penalty};
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
    *this = make(hw_transfer_s + o.hw_transfer_s, maintenance_s + o.maintenance_s, barrier_s + o.barrier_s,
                 cpu_access_penalty_s + o.cpu_access_penalty_s);
    return *this;
}

}  // namespace iocoh
