#include "iocoh/interconnect.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iocoh {

CalibrationParams CalibrationParams::shipped() {
    CalibrationParams p;
    p.hp.startup_cycles = 11.061426;
    p.hpc.startup_cycles = 29.670523;
    p.hpc.snoop_per_beat_cycles = 0.058451963;
    p.hpc.cached_tx_per_byte_penalty_s = 8.0261440e-10;
    p.hpc.rx_derate = 0.94956444;
    p.acp.hit_per_beat_cycles = 0.020819750;
    p.acp.miss_per_beat_cycles = 3.0060322;
    p.provenance = "fitted to data/anchors.csv (70 anchors), default platform";
    return p;
}

CalibrationParams CalibrationParams::nominal(const PlatformConfig& config) {
    const double beats_per_line = static_cast<double>(config.l2_line_bytes) / static_cast<double>(config.beat_bytes());
    CalibrationParams p;
    p.hp.startup_cycles = config.dram_latency_cycles;
    p.hpc.startup_cycles = config.dram_latency_cycles + config.snoop_penalty_cycles;
    p.hpc.snoop_per_beat_cycles = config.snoop_penalty_cycles / beats_per_line;
    p.hpc.cached_tx_per_byte_penalty_s = (config.snoop_penalty_cycles + config.cache_miss_penalty_cycles) *
                                         config.cycle_s() / static_cast<double>(config.beat_bytes());
    p.hpc.rx_derate = 1.0 / (1.0 + p.hpc.snoop_per_beat_cycles);
    p.acp.hit_per_beat_cycles = 0.0;
    p.acp.miss_per_beat_cycles = config.cache_miss_penalty_cycles;
    p.provenance = "nominal platform latencies (uncalibrated)";
    return p;
}

std::vector<ConfigViolation> validate_params(const CalibrationParams& p) {
    std::vector<ConfigViolation> out;
    auto nonneg = [&](double v, const char* field) {
        if (!(v >= 0.0) || !std::isfinite(v)) out.push_back({field, "must be finite and >= 0"});
    };
    nonneg(p.hp.startup_cycles, "hp.startup_cycles");
    nonneg(p.hpc.startup_cycles, "hpc.startup_cycles");
    nonneg(p.hpc.snoop_per_beat_cycles, "hpc.snoop_per_beat_cycles");
    nonneg(p.hpc.cached_tx_per_byte_penalty_s, "hpc.cached_tx_per_byte_penalty_s");
    nonneg(p.acp.hit_per_beat_cycles, "acp.hit_per_beat_cycles");
    nonneg(p.acp.miss_per_beat_cycles, "acp.miss_per_beat_cycles");
    if (!(p.hpc.rx_derate > 0.0 && p.hpc.rx_derate <= 1.0)) out.push_back({"hpc.rx_derate", "must be in (0, 1]"});
    return out;
}

bool path_legal(InterfacePath path, Direction direction) {
    if (direction != Direction::PlToPl) return true;
    return path == InterfacePath::HP_NC || path == InterfacePath::HP_C;
}

double elapsed_seconds(const TransferTerms& t, const CalibrationParams& p, const PlatformConfig& config) {
    const double cyc = config.cycle_s();
    const auto beats = static_cast<double>(t.beats);
    const double hp = (p.hp.startup_cycles + beats) * cyc;
    switch (t.path) {
        case InterfacePath::HP_NC:
        case InterfacePath::HP_C:
            return hp;
        case InterfacePath::HPC:
            if (t.direction == Direction::PlToCpu) return hp / p.hpc.rx_derate;
            return (p.hpc.startup_cycles + beats * (1.0 + p.hpc.snoop_per_beat_cycles)) * cyc +
                   static_cast<double>(t.dirty_resident_bytes) * p.hpc.cached_tx_per_byte_penalty_s;
        case InterfacePath::ACP:
            return (beats + static_cast<double>(t.hit_beats) * p.acp.hit_per_beat_cycles +
                    static_cast<double>(t.miss_beats) * p.acp.miss_per_beat_cycles) *
                   cyc;
    }
    return hp;
}

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Calls fn(line_addr, overlap_bytes) for every line the transfer touches.
template <typename Fn>
void for_each_line(std::uint64_t base, std::uint64_t size, std::uint32_t line_bytes, Fn&& fn) {
    const std::uint64_t end = base + size;
    for (std::uint64_t line = base / line_bytes * line_bytes; line < end; line += line_bytes) {
        const std::uint64_t lo = std::max(line, base);
        const std::uint64_t hi = std::min(line + line_bytes, end);
        fn(line, hi - lo);
    }
}

}  // namespace

TransferTerms run_transfer(const TransferSpec& spec, CacheState& cache, const PlatformConfig& config) {
    if (spec.size_bytes == 0) throw SpecError("transfer size must be at least one byte");
    if (!path_legal(spec.path, spec.direction)) {
        throw SpecError("path " + std::string(to_string(spec.path)) + " cannot carry a " +
                        std::string(to_string(spec.direction)) + " transfer");
    }
    const std::uint32_t line_bytes = cache.line_bytes();
    const std::uint64_t base = spec.base_addr / line_bytes * line_bytes;
    const std::uint64_t beat = config.beat_bytes();

    TransferTerms t;
    t.path = spec.path;
    t.direction = spec.direction;
    t.size_bytes = spec.size_bytes;
    t.beats = ceil_div(spec.size_bytes, beat);
    t.resident_fraction = cache.resident_fraction(base, spec.size_bytes);

    switch (spec.path) {
        case InterfacePath::HP_NC:
        case InterfacePath::HP_C:
            break;
        case InterfacePath::HPC:
            if (spec.direction == Direction::PlToCpu) {
                // Device writes: stale copies in L2 are dropped.
                const auto lines = lines_spanned(base, spec.size_bytes, line_bytes).count();
                t.events.snoops = lines;
                t.events.hits = cache.invalidate_range(base, spec.size_bytes);
                t.events.misses = lines - t.events.hits;
            } else {
                std::vector<std::uint64_t> dirty;
                for_each_line(base, spec.size_bytes, line_bytes, [&](std::uint64_t line, std::uint64_t bytes) {
                    ++t.events.snoops;
                    const auto* l = cache.peek(line);
                    if (l == nullptr) {
                        ++t.events.misses;
                        return;
                    }
                    ++t.events.hits;
                    if (l->dirty) {
                        t.dirty_resident_bytes += bytes;
                        dirty.push_back(line);
                    }
                });
                for (auto line : dirty) cache.invalidate_range(line, line_bytes);
            }
            break;
        case InterfacePath::ACP: {
            const auto kind = spec.direction == Direction::PlToCpu ? AccessKind::Write : AccessKind::Read;
            const auto before = cache.stats();
            for_each_line(base, spec.size_bytes, line_bytes, [&](std::uint64_t line, std::uint64_t bytes) {
                const std::uint64_t line_beats = ceil_div(bytes, beat);
                const auto r = cache.access(line, kind, true);
                (r.hit ? t.hit_beats : t.miss_beats) += line_beats;
            });
            const auto& after = cache.stats();
            t.events.hits = after.hits - before.hits;
            t.events.misses = after.misses - before.misses;
            t.events.evictions = after.evictions - before.evictions;
            t.events.snoops = t.events.hits + t.events.misses;
            break;
        }
    }
    return t;
}

TransferResult simulate_transfer(const TransferSpec& spec, const CacheState& cache, const PlatformConfig& config,
                                 const CalibrationParams& params) {
    TransferResult r{0.0, 0.0, 0, 0.0, {}, cache};
    const auto terms = run_transfer(spec, r.post_state, config);
    r.elapsed_s = elapsed_seconds(terms, params, config);
    r.effective_bandwidth = static_cast<double>(spec.size_bytes) / r.elapsed_s;
    r.beats = terms.beats;
    r.resident_fraction = terms.resident_fraction;
    r.cache_events = terms.events;
    return r;
}

void prepare_pre_state(std::uint64_t base, std::uint64_t len, PreState pre, CacheState& cache) {
    if (len == 0) return;
    if (pre == PreState::Flushed) {
        cache.flush_range(base, len);
        return;
    }
    const auto kind = pre == PreState::Written ? AccessKind::Write : AccessKind::Read;
    const std::uint32_t line_bytes = cache.line_bytes();
    for_each_line(base, len, line_bytes, [&](std::uint64_t line, std::uint64_t) { cache.access(line, kind, true); });
}

std::vector<SweepCase> standard_cases(Direction direction) {
    const PreState cached = direction == Direction::PlToCpu ? PreState::Read : PreState::Written;
    return {
        {InterfacePath::HP_NC, std::nullopt},
        {InterfacePath::HPC, cached},
        {InterfacePath::HPC, PreState::Flushed},
        {InterfacePath::ACP, cached},
        {InterfacePath::ACP, PreState::Flushed},
    };
}

std::string sweep_path_label(InterfacePath path) {
    if (path == InterfacePath::HP_NC || path == InterfacePath::HP_C) return "HP";
    return std::string(to_string(path));
}

TransferTerms sweep_point_terms(std::uint64_t size, Direction direction, const SweepCase& c,
                                const PlatformConfig& config) {
    CacheState cache = CacheState::warm(config, kBackgroundBase);
    const TransferSpec spec{size, direction, c.path, c.pre_state.value_or(PreState::Flushed), 0};
    if (c.pre_state) prepare_pre_state(spec.base_addr, size, *c.pre_state, cache);
    return run_transfer(spec, cache, config);
}

SweepPoint sweep_point(std::uint64_t size, Direction direction, const SweepCase& c, const PlatformConfig& config,
                       const CalibrationParams& params) {
    const auto terms = sweep_point_terms(size, direction, c, config);
    const double elapsed = elapsed_seconds(terms, params, config);
    return {c, direction, size, static_cast<double>(size) / elapsed, elapsed};
}

namespace {

void check_sizes(std::span<const std::uint64_t> sizes) {
    if (sizes.empty()) throw SpecError("sweep needs at least one size");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw SpecError("sweep sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw SpecError("sweep sizes must be strictly ascending");
    }
}

void check_cases(std::span<const SweepCase> cases, Direction direction) {
    for (const auto& c : cases) {
        if (!path_legal(c.path, direction)) {
            throw SpecError("path " + std::string(to_string(c.path)) + " cannot carry a " +
                            std::string(to_string(direction)) + " transfer");
        }
    }
}

}  // namespace

std::vector<SweepPoint> sweep_serial(std::span<const std::uint64_t> sizes, Direction direction,
                                     std::span<const SweepCase> cases, const PlatformConfig& config,
                                     const CalibrationParams& params) {
    check_sizes(sizes);
    check_cases(cases, direction);
    std::vector<SweepPoint> out;
    out.reserve(sizes.size() * cases.size());
    for (const auto& c : cases) {
        for (auto s : sizes) out.push_back(sweep_point(s, direction, c, config, params));
    }
    return out;
}

std::vector<SweepPoint> sweep(std::span<const std::uint64_t> sizes, Direction direction,
                              std::span<const SweepCase> cases, const PlatformConfig& config,
                              const CalibrationParams& params) {
    check_sizes(sizes);
    check_cases(cases, direction);
    const auto n_sizes = static_cast<std::int64_t>(sizes.size());
    const auto n = n_sizes * static_cast<std::int64_t>(cases.size());
    std::vector<SweepPoint> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& c = cases[static_cast<std::size_t>(i / n_sizes)];
        const auto s = sizes[static_cast<std::size_t>(i % n_sizes)];
        out[static_cast<std::size_t>(i)] = sweep_point(s, direction, c, config, params);
    }
    return out;
}

}  // namespace iocoh
