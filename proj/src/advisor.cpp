#include "iocoh/advisor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "iocoh/units.hpp"

namespace iocoh {

namespace {

// Unrelated memory the intervening traffic walks through; far from both the
// buffer and the warm-cache background.
constexpr std::uint64_t kInterveningBase = std::uint64_t{1} << 39;

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int tie_rank(InterfacePath p) {
    switch (p) {
        case InterfacePath::HP_NC: return 0;
        case InterfacePath::HPC: return 1;
        case InterfacePath::ACP: return 2;
        case InterfacePath::HP_C: return 3;
    }
    return 4;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(std::string_view s) {
    std::string k;
    for (unsigned char c : s) k.push_back(static_cast<char>(std::tolower(c)));
    if (k == "true" || k == "yes" || k == "1") return true;
    if (k == "false" || k == "no" || k == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

}  // namespace

double total_cost(double alpha_bytes, double raw_bandwidth_Bps, double software_cost_s) {
    if (!(raw_bandwidth_Bps > 0.0)) throw DomainError("total_cost: raw bandwidth must be positive");
    if (alpha_bytes < 0.0 || software_cost_s < 0.0) throw DomainError("total_cost: negative input");
    return alpha_bytes / raw_bandwidth_Bps + software_cost_s;
}

Recommendation recommend(const WorkloadProfile& p) {
    Recommendation r;
    auto step = [&](const char* id, const char* question, std::string answer) {
        r.rationale.push_back({id, question, std::move(answer)});
    };

    step("direction", "Which way does the data move?", std::string(to_string(p.direction)));
    if (p.direction == Direction::PlToPl) {
        r.path = InterfacePath::HP_NC;
        return r;
    }
    if (p.direction == Direction::PlToCpu) {
        r.path = InterfacePath::HPC;
        return r;
    }

    const bool nc_safe = p.cpu_role == CpuRole::MostlyWrite && p.write_pattern != WritePattern::Irregular;
    step("nc_safe_writes", "Does the CPU mostly write the buffer with sequential (or sequentializable) stores?",
         yes_no(nc_safe));
    if (nc_safe) {
        r.path = InterfacePath::HP_NC;
        return r;
    }

    const bool large = p.buffer_bytes > kLargeBufferBytes;
    step("large_buffer", "Is the buffer larger than 16 MiB?", yes_no(large));
    if (large) {
        r.path = InterfacePath::HPC;
        return r;
    }

    const bool small_now = p.buffer_bytes < kSmallBufferBytes && p.consume_latency == ConsumeLatency::Immediate;
    step("small_immediate", "Is the buffer under 64 KiB and read by the accelerator right away?", yes_no(small_now));
    if (small_now) {
        r.path = InterfacePath::ACP;
        return r;
    }

    const bool reordered = p.intervening_traffic_bytes > kLargeBufferBytes;
    step("reordered_traffic", "Can more than 16 MiB of other memory traffic run before the accelerator reads it?",
         yes_no(reordered));
    if (reordered) {
        r.path = InterfacePath::HPC;
        return r;
    }

    step("background_load", "Is the background workload memory intensive?", yes_no(p.background_memory_intensive));
    r.path = p.background_memory_intensive ? InterfacePath::HPC : InterfacePath::HP_C;
    return r;
}

std::string format_rationale(const std::vector<DecisionStep>& rationale) {
    std::string out;
    for (const auto& s : rationale) out += s.node_id + " | " + s.question + " | " + s.answer + "\n";
    return out;
}

std::vector<InterfacePath> legal_paths(Direction direction) {
    std::vector<InterfacePath> out;
    for (auto p : kAllPaths) {
        if (path_legal(p, direction)) out.push_back(p);
    }
    return out;
}

PreState inferred_pre_state(const WorkloadProfile& p) {
    switch (p.direction) {
        case Direction::CpuToPl: return PreState::Written;
        case Direction::PlToCpu: return PreState::Read;
        case Direction::PlToPl: return PreState::Flushed;
    }
    return PreState::Flushed;
}

std::vector<RankedPath> rank_all(const WorkloadProfile& p, const PlatformConfig& config,
                                 const CalibrationParams& params, const SwCostParams& sw) {
    if (p.buffer_bytes == 0) throw DomainError("rank_all: buffer_bytes must be positive");
    require_valid(config);

    const auto pre = inferred_pre_state(p);
    auto cache = CacheState::warm(config, kBackgroundBase);
    prepare_pre_state(0, p.buffer_bytes, pre, cache);
    if (p.direction == Direction::CpuToPl && p.intervening_traffic_bytes > 0) {
        const auto replay = std::min(p.intervening_traffic_bytes, 8 * config.l2_size_bytes);
        for (std::uint64_t off = 0; off < replay; off += config.l2_line_bytes) {
            cache.access(kInterveningBase + off, AccessKind::Write, true);
        }
    }

    double read_mult = p.cpu_role == CpuRole::MostlyWrite ? 0.0 : 1.0;
    double write_mult = p.cpu_role == CpuRole::MostlyRead ? 0.0 : 1.0;
    if (p.direction == Direction::CpuToPl) write_mult = 1.0;
    if (p.direction == Direction::PlToCpu) read_mult = 1.0;
    if (p.direction == Direction::PlToPl) read_mult = write_mult = 0.0;

    std::vector<RankedPath> out;
    for (auto path : legal_paths(p.direction)) {
        TransferSpec spec{p.buffer_bytes, p.direction, path, pre, 0};
        const auto t = simulate_transfer(spec, cache, config, params);
        double maintenance = 0.0, barrier = 0.0, penalty = 0.0;
        if (path == InterfacePath::HP_C) {
            const std::uint64_t sizes[] = {p.buffer_bytes};
            const auto m = maintenance_cost(sizes, p.background_memory_intensive, sw);
            maintenance = m.flush_s;
            barrier = m.barrier_s;
        } else if (path == InterfacePath::HP_NC) {
            if (read_mult > 0.0) {
                const auto nc = memcpy_cost(RegionKind::NonCacheable, RegionKind::Cacheable, p.buffer_bytes, sw);
                const auto c = memcpy_cost(RegionKind::Cacheable, RegionKind::Cacheable, p.buffer_bytes, sw);
                penalty += read_mult * (nc.read_s - c.read_s);
            }
            if (write_mult > 0.0 && p.write_pattern == WritePattern::Irregular) {
                penalty += write_mult *
                           (irregular_write_cost(RegionKind::NonCacheable, p.buffer_bytes, config.l2_size_bytes, sw) -
                            irregular_write_cost(RegionKind::Cacheable, p.buffer_bytes, config.l2_size_bytes, sw));
            }
        }
        RankedPath r;
        r.path = path;
        r.pre_state = pre;
        r.bandwidth_Bps = t.effective_bandwidth;
        r.cost = CostBreakdown::make(t.elapsed_s, maintenance, barrier, penalty);
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedPath& a, const RankedPath& b) {
        if (a.cost.total_s != b.cost.total_s) return a.cost.total_s < b.cost.total_s;
        return tie_rank(a.path) < tie_rank(b.path);
    });
    return out;
}

WorkloadProfile read_profile(std::istream& in, const std::string& name) {
    WorkloadProfile p;
    std::set<std::string> seen;
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw DataError(name, n, "expected 'key = value'");
        const auto key = std::string(trim(line.substr(0, eq)));
        auto value = trim(line.substr(eq + 1));
        if (const auto hash = value.find('#'); hash != std::string_view::npos) value = trim(value.substr(0, hash));
        if (!seen.insert(key).second) throw DataError(name, n, "duplicate key '" + key + "'");
        try {
            if (key == "buffer_bytes") {
                p.buffer_bytes = parse_size(value);
                if (p.buffer_bytes == 0) throw std::invalid_argument("buffer_bytes must be positive");
            } else if (key == "direction") {
                p.direction = parse_direction(value);
            } else if (key == "cpu_role") {
                p.cpu_role = parse_cpu_role(value);
            } else if (key == "write_pattern") {
                p.write_pattern = parse_write_pattern(value);
            } else if (key == "consume_latency") {
                p.consume_latency = parse_consume_latency(value);
            } else if (key == "intervening_traffic_bytes") {
                p.intervening_traffic_bytes = parse_size(value);
            } else if (key == "background_memory_intensive") {
                p.background_memory_intensive = parse_bool(value);
            } else {
                throw DataError(name, n, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw DataError(name, n, key + ": " + e.what());
        }
    }
    for (const char* required : {"buffer_bytes", "direction"}) {
        if (!seen.count(required)) throw DataError(name, n, std::string("missing required key '") + required + "'");
    }
    return p;
}

WorkloadProfile read_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path, 0, "cannot open file");
    return read_profile(in, path);
}

void write_profile(std::ostream& out, const WorkloadProfile& p) {
    out << "buffer_bytes = " << p.buffer_bytes << '\n'
        << "direction = " << to_string(p.direction) << '\n'
        << "cpu_role = " << to_string(p.cpu_role) << '\n'
        << "write_pattern = " << to_string(p.write_pattern) << '\n'
        << "consume_latency = " << to_string(p.consume_latency) << '\n'
        << "intervening_traffic_bytes = " << p.intervening_traffic_bytes << '\n'
        << "background_memory_intensive = " << (p.background_memory_intensive ? "true" : "false") << '\n';
}

}  // namespace iocoh
