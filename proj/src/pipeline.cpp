#include "iocoh/pipeline.hpp"

#include <algorithm>
#include <array>

#include "iocoh/write_combine.hpp"

namespace iocoh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Longest contiguous run an irregular (column-stride) writer produces: one element.
constexpr std::uint64_t kIrregularRunBytes = 4;

bool touches(const std::vector<std::size_t>& list, std::size_t b) {
    return std::find(list.begin(), list.end(), b) != list.end();
}

void check_assignment(const Pipeline& p, const Assignment& a) {
    if (a.size() != p.num_transfers()) {
        throw SpecError("assignment covers " + std::to_string(a.size()) + " of " +
                        std::to_string(p.num_transfers()) + " transfers in scenario " + p.name);
    }
}

std::vector<RegionKind> region_kinds(const Pipeline& p, const Assignment& a) {
    std::vector<RegionKind> kinds(p.buffers.size(), RegionKind::Cacheable);
    for (const auto& s : p.stages) {
        if (const auto* t = std::get_if<Transfer>(&s); t && a[t->transfer_id] == InterfacePath::HP_NC) {
            kinds[t->buffer] = RegionKind::NonCacheable;
        }
    }
    return kinds;
}

void touch_lines(CacheState& cache, const Buffer& b, AccessKind kind, bool allocate) {
    const auto line = cache.line_bytes();
    for (std::uint64_t off = 0; off < b.size_bytes; off += line) cache.access(b.base_addr + off, kind, allocate);
}

// Compute time is the all-cacheable cost so it stays identical across paths;
// whatever a non-cacheable region adds on top is the access penalty.
void add_cpu_cost(const CpuStage& s, const PlatformConfig& config, const SwCostParams& sw, double& compute,
                  double& penalty) {
    CpuStage cached = s;
    cached.src_kind = RegionKind::Cacheable;
    cached.dst_kind = RegionKind::Cacheable;
    const double base = cpu_stage_cost(cached, config.l2_size_bytes, sw).total_s;
    compute += base;
    penalty += cpu_stage_cost(s, config.l2_size_bytes, sw).total_s - base;
}

StageReport run_cpu(const Pipeline& p, const CpuCompute& c, const std::vector<RegionKind>& kinds, CacheState& cache,
                    const PlatformConfig& config, const SwCostParams& sw) {
    StageReport r;
    r.label = "cpu " + c.name;
    double penalty = 0.0;
    for (auto bi : c.reads) {
        const auto& b = p.buffers[bi];
        if (b.size_bytes == 0) continue;
        CpuStage s;
        s.bytes_read = b.size_bytes;
        s.src_kind = kinds[bi];
        add_cpu_cost(s, config, sw, r.compute_s, penalty);
        if (kinds[bi] == RegionKind::Cacheable) touch_lines(cache, b, AccessKind::Read, true);
    }
    std::uint64_t written = 0;
    for (auto bi : c.writes) written += p.buffers[bi].size_bytes;
    // Makeable-sequential writes cost the same as sequential ones here: the
    // cacheable irregular cost equals the sequential one, and non-cacheable
    // use presumes the rewrite was done.
    const bool irregular = c.pattern == WritePattern::Irregular;
    WriteStreamSummary summary;
    summary.total_bytes = written;
    summary.sequential_run_bytes = irregular ? std::min(written, kIrregularRunBytes) : written;
    summary.write_only = c.reads.empty();
    const bool bypass = classify_write_stream(summary, config) == AllocationDecision::BypassToMemory;
    for (auto bi : c.writes) {
        const auto& b = p.buffers[bi];
        if (b.size_bytes == 0) continue;
        CpuStage s;
        s.bytes_written = b.size_bytes;
        s.dst_kind = kinds[bi];
        s.write_pattern = irregular ? AccessPattern::Irregular : AccessPattern::Sequential;
        add_cpu_cost(s, config, sw, r.compute_s, penalty);
        if (kinds[bi] == RegionKind::Cacheable) touch_lines(cache, b, AccessKind::Write, !bypass);
    }
    r.cost = CostBreakdown::make(0.0, 0.0, 0.0, penalty);
    return r;
}

StageReport run_transfer_stage(const Pipeline& p, const Transfer& t, InterfacePath path, CacheState& cache,
                               const PlatformConfig& config, const CalibrationParams& params,
                               const SwCostParams& sw) {
    const auto& b = p.buffers[t.buffer];
    StageReport r;
    r.label = std::string(to_string(t.direction)) + " " + b.name;
    r.path = path;
    if (!path_legal(path, t.direction)) {
        throw SpecError("scenario " + p.name + ": " + r.label + " cannot use " + std::string(display_name(path)));
    }
    if (b.size_bytes == 0) return r;

    double flush = 0.0, barrier = 0.0;
    if (path == InterfacePath::HP_C) {
        std::vector<std::uint64_t> passes;
        if (t.direction != Direction::PlToCpu) {
            cache.flush_range(b.base_addr, b.size_bytes);
            passes.push_back(b.size_bytes);
        }
        if (t.direction != Direction::CpuToPl) {
            cache.invalidate_range(b.base_addr, b.size_bytes);
            passes.push_back(b.size_bytes);
        }
        const auto m = maintenance_cost(passes, p.background_memory_intensive, sw);
        flush = m.flush_s;
        barrier = m.barrier_s;
    }
    TransferSpec spec;
    spec.size_bytes = b.size_bytes;
    spec.direction = t.direction;
    spec.path = path;
    spec.base_addr = b.base_addr;
    const auto terms = run_transfer(spec, cache, config);
    r.cost = CostBreakdown::make(elapsed_seconds(terms, params, config), flush, barrier, 0.0);
    return r;
}

}  // namespace

PipelineReport run_pipeline(const Pipeline& p, const Assignment& assignment, const PlatformConfig& config,
                            const CalibrationParams& params, const SwCostParams& sw) {
    check_assignment(p, assignment);
    const auto kinds = region_kinds(p, assignment);
    auto cache = CacheState::warm(config, kBackgroundBase);

    PipelineReport rep;
    rep.scenario = p.name;
    rep.assignment = assignment;
    for (const auto& stage : p.stages) {
        auto r = std::visit(overloaded{
                                [&](const CpuCompute& c) { return run_cpu(p, c, kinds, cache, config, sw); },
                                [&](const Transfer& t) {
                                    return run_transfer_stage(p, t, assignment[t.transfer_id], cache, config,
                                                              params, sw);
                                },
                                [&](const AccelCompute& a) {
                                    StageReport s;
                                    s.label = "accel " + a.name;
                                    s.compute_s = a.time_s;
                                    return s;
                                },
                            },
                            stage);
        r.total_s = r.compute_s + r.cost.total_s;
        rep.end_to_end_s += r.total_s;
        rep.compute_s += r.compute_s;
        rep.cost += r.cost;
        rep.stages.push_back(std::move(r));
    }
    return rep;
}

WorkloadProfile infer_profile(const Pipeline& p, std::size_t transfer_id) {
    if (transfer_id >= p.num_transfers()) throw SpecError("no transfer " + std::to_string(transfer_id));
    std::size_t at = 0;
    for (; at < p.stages.size(); ++at) {
        const auto* t = std::get_if<Transfer>(&p.stages[at]);
        if (t && t->transfer_id == transfer_id) break;
    }
    if (at == p.stages.size()) throw SpecError("transfer " + std::to_string(transfer_id) + " never runs");
    const auto& t = std::get<Transfer>(p.stages[at]);
    const auto buf = t.buffer;

    WorkloadProfile w;
    w.buffer_bytes = p.buffers[buf].size_bytes;
    w.direction = t.direction;
    w.background_memory_intensive = p.background_memory_intensive;
    w.cpu_role = CpuRole::MostlyWrite;
    w.write_pattern = WritePattern::Sequential;
    w.consume_latency = ConsumeLatency::Immediate;
    if (t.direction == Direction::PlToPl) return w;

    auto is_transfer_of = [&](const Stage& s) {
        const auto* o = std::get_if<Transfer>(&s);
        return o && o->buffer == buf;
    };
    auto role = [](bool reads, bool writes, CpuRole none) {
        if (reads && writes) return CpuRole::MixedReadWrite;
        if (writes) return CpuRole::MostlyWrite;
        if (reads) return CpuRole::MostlyRead;
        return none;
    };

    bool reads = false, writes = false;
    if (t.direction == Direction::CpuToPl) {
        std::optional<std::size_t> producer;
        for (std::size_t i = at; i-- > 0;) {
            if (is_transfer_of(p.stages[i])) break;
            const auto* c = std::get_if<CpuCompute>(&p.stages[i]);
            if (!c) continue;
            reads = reads || touches(c->reads, buf);
            if (touches(c->writes, buf)) {
                writes = true;
                if (!producer) producer = i;
            }
        }
        w.cpu_role = role(reads, writes, CpuRole::MostlyWrite);
        if (!producer) {
            w.consume_latency = ConsumeLatency::Delayed;
            return w;
        }
        w.write_pattern = std::get<CpuCompute>(p.stages[*producer]).pattern;
        for (std::size_t i = *producer + 1; i < at; ++i) {
            if (std::holds_alternative<Transfer>(p.stages[i])) continue;
            w.consume_latency = ConsumeLatency::Delayed;
            if (const auto* c = std::get_if<CpuCompute>(&p.stages[i])) {
                for (auto bi : c->reads) w.intervening_traffic_bytes += p.buffers[bi].size_bytes;
                for (auto bi : c->writes) w.intervening_traffic_bytes += p.buffers[bi].size_bytes;
            }
        }
        return w;
    }

    // PL -> CPU
    bool first_consumer_seen = false;
    for (std::size_t i = at + 1; i < p.stages.size(); ++i) {
        if (is_transfer_of(p.stages[i])) break;
        if (std::holds_alternative<Transfer>(p.stages[i])) continue;
        const auto* c = std::get_if<CpuCompute>(&p.stages[i]);
        const bool uses = c && (touches(c->reads, buf) || touches(c->writes, buf));
        if (!first_consumer_seen && !uses) w.consume_latency = ConsumeLatency::Delayed;
        if (!uses) continue;
        first_consumer_seen = true;
        reads = reads || touches(c->reads, buf);
        if (touches(c->writes, buf)) {
            if (!writes) w.write_pattern = c->pattern;
            writes = true;
        }
    }
    w.cpu_role = role(reads, writes, CpuRole::MostlyRead);
    return w;
}

Assignment advised_assignment(const Pipeline& p) {
    Assignment a;
    for (std::size_t i = 0; i < p.num_transfers(); ++i) a.push_back(recommend(infer_profile(p, i)).path);
    return a;
}

std::optional<Assignment> pure_assignment(const Pipeline& p, InterfacePath path) {
    for (const auto& s : p.stages) {
        if (const auto* t = std::get_if<Transfer>(&s); t && !path_legal(path, t->direction)) return std::nullopt;
    }
    return Assignment(p.num_transfers(), path);
}

std::string assignment_label(std::size_t index) {
    static const std::array<const char*, 5> labels = {"HP (NC)", "HP (C)", "HPC", "ACP", "optimized"};
    return index < labels.size() ? labels[index] : "?";
}

Comparison compare_assignments(const Pipeline& p, const PlatformConfig& config, const CalibrationParams& params,
                               const SwCostParams& sw) {
    static constexpr std::array<InterfacePath, 4> pure = {InterfacePath::HP_NC, InterfacePath::HP_C,
                                                          InterfacePath::HPC, InterfacePath::ACP};
    require_valid(config);
    std::array<std::optional<Assignment>, 5> assignments;
    for (std::size_t i = 0; i < pure.size(); ++i) assignments[i] = pure_assignment(p, pure[i]);
    assignments[kOptimizedIndex] = advised_assignment(p);

    Comparison cmp;
    cmp.scenario = p.name;
    cmp.transfer_labels = p.transfer_labels;
    cmp.reports.resize(assignments.size());
    // Config and paths are checked above; nothing in the loop throws.
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(assignments.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (!assignments[idx]) continue;
        auto rep = run_pipeline(p, *assignments[idx], config, params, sw);
        rep.label = assignment_label(idx);
        cmp.reports[idx] = std::move(rep);
    }
    return cmp;
}

}  // namespace iocoh
