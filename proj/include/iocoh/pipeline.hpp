#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iocoh/advisor.hpp"
#include "iocoh/interconnect.hpp"
#include "iocoh/platform.hpp"
#include "iocoh/sw_cost.hpp"

namespace iocoh {

struct Buffer {
    std::string name;
    std::uint64_t size_bytes = 0;
    std::uint64_t base_addr = 0;
};

/// CPU work over whole buffers: every read buffer is read once, every
/// written buffer written once, writes following `pattern`.
struct CpuCompute {
    std::string name;
    std::vector<std::size_t> reads;   ///< buffer indices
    std::vector<std::size_t> writes;  ///< buffer indices
    WritePattern pattern = WritePattern::Sequential;
};

struct Transfer {
    std::size_t buffer = 0;
    Direction direction = Direction::CpuToPl;
    std::size_t transfer_id = 0;  ///< declaration index; repeats share it
};

struct AccelCompute {
    std::string name;
    double time_s = 0.0;
};

using Stage = std::variant<CpuCompute, Transfer, AccelCompute>;

struct Pipeline {
    std::string name;
    std::vector<Buffer> buffers;
    std::vector<Stage> stages;  ///< repeats already unrolled
    std::vector<std::string> transfer_labels;  ///< one per declaration, e.g. "tx gray"
    bool background_memory_intensive = false;

    std::size_t num_transfers() const { return transfer_labels.size(); }
};

/// One interface path per transfer declaration.
using Assignment = std::vector<InterfacePath>;

struct StageReport {
    std::string label;
    std::optional<InterfacePath> path;  ///< transfers only
    double compute_s = 0.0;  ///< CPU time at cacheable speed, or accelerator time
    CostBreakdown cost;      ///< coherence-related time on top of compute_s
    double total_s = 0.0;    ///< compute_s + cost.total_s
};

struct PipelineReport {
    std::string scenario;
    std::string label;  ///< "HP (NC)", ..., "optimized"
    Assignment assignment;
    std::vector<StageReport> stages;
    double end_to_end_s = 0.0;  ///< stage totals summed in stage order
    CostBreakdown cost;         ///< component sums over stages
    double compute_s = 0.0;
};

/// Runs the stages in order against one cache, warm at the start.
///
/// A buffer is non-cacheable when any of its transfers is assigned HP_NC;
/// CPU stages then bypass the cache for it and pay the non-cacheable
/// penalties. Cacheable buffers are read and written through the cache,
/// except that a stage with no reads and sequential writes is a bypass
/// (read-allocate mode) stream and does not allocate. HP_C transfers clean
/// (TX) or invalidate (RX) the buffer first and pay one maintenance pass
/// and barrier; a PL->PL buffer on HP_C pays both passes.
///
/// Throws SpecError when the assignment does not cover every transfer or
/// gives a transfer an illegal path.
PipelineReport run_pipeline(const Pipeline& pipeline, const Assignment& assignment, const PlatformConfig& config,
                            const CalibrationParams& params, const SwCostParams& sw);

/// What the advisor is told about one transfer declaration.
///
/// TX: the CPU stages since the buffer's previous transfer decide the role
/// (writes only, reads only, both); the last writer gives the pattern; the
/// transfer is immediate when no CPU or accelerator stage runs between that
/// writer and the transfer, and the bytes those stages touch are the
/// intervening traffic. RX: the CPU stages after the transfer up to the
/// buffer's next transfer decide the role and pattern. PL->PL carries no
/// CPU role. Background load comes from the scenario.
WorkloadProfile infer_profile(const Pipeline& pipeline, std::size_t transfer_id);

/// recommend() applied to every transfer declaration.
Assignment advised_assignment(const Pipeline& pipeline);

/// The same path for every transfer, or nothing if some transfer cannot use it.
std::optional<Assignment> pure_assignment(const Pipeline& pipeline, InterfacePath path);

struct Comparison {
    std::string scenario;
    std::vector<std::string> transfer_labels;
    /// HP (NC), HP (C), HPC, ACP, optimized. A pure baseline is absent
    /// when the path cannot carry one of the transfers.
    std::vector<std::optional<PipelineReport>> reports;
};

inline constexpr std::size_t kOptimizedIndex = 4;

/// Runs the five assignments in parallel; results keep the fixed order.
Comparison compare_assignments(const Pipeline& pipeline, const PlatformConfig& config,
                               const CalibrationParams& params, const SwCostParams& sw);

/// Baseline labels in Comparison order.
std::string assignment_label(std::size_t index);

// Scenario files: see docs/scenario-format.md. Errors are DataError with
// the offending line.
std::vector<Pipeline> read_scenarios(std::istream& in, const std::string& name);
std::vector<Pipeline> read_scenarios_file(const std::string& path);

// Reports. CSV: one summary row per assignment, then optionally one row per stage.
void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& comparisons, bool stages);
void write_comparison_table(std::ostream& out, const std::vector<Comparison>& comparisons, bool stages);

}  // namespace iocoh
