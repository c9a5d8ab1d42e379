#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iocoh/interconnect.hpp"
#include "iocoh/platform.hpp"
#include "iocoh/sw_cost.hpp"

namespace iocoh {

/// Tree thresholds. Both comparisons are strict.
inline constexpr std::uint64_t kLargeBufferBytes = 16u << 20;  // routes to HPC when exceeded
inline constexpr std::uint64_t kSmallBufferBytes = 64u << 10;  // ACP only below this

struct DecisionStep {
    std::string node_id;
    std::string question;
    std::string answer;

    bool operator==(const DecisionStep&) const = default;
};

struct Recommendation {
    InterfacePath path = InterfacePath::HP_NC;
    std::vector<DecisionStep> rationale;  ///< root first, one entry per node visited
    std::optional<CostBreakdown> estimated_cost;
};

/// alpha / raw_bandwidth + software_cost. alpha is the bytes the flow moves.
/// Throws DomainError if raw_bandwidth <= 0 or an input is negative.
double total_cost(double alpha_bytes, double raw_bandwidth_Bps, double software_cost_s);

/// The decision tree. Node order:
///   direction -> nc_safe_writes -> large_buffer -> small_immediate
///   -> reordered_traffic -> background_load
/// PL->PL stops at the first node (HP_NC), PL->CPU too (HPC).
Recommendation recommend(const WorkloadProfile& profile);

/// One line per step: "node_id | question | answer".
std::string format_rationale(const std::vector<DecisionStep>& rationale);

struct RankedPath {
    InterfacePath path = InterfacePath::HP_NC;
    PreState pre_state = PreState::Flushed;  ///< state the buffer was put in before the transfer
    double bandwidth_Bps = 0.0;
    CostBreakdown cost;
};

/// The buffer state rank_all assumes when the transfer starts:
/// TX buffers were just written by the CPU, RX buffers hold stale copies the
/// CPU read earlier, PL->PL buffers are not cached.
PreState inferred_pre_state(const WorkloadProfile& profile);

/// Models every legal path for the flow and sorts by total cost, ties in
/// the order HP_NC, HPC, ACP, HP_C.
///
/// The buffer sits at address 0 of a warm cache in the inferred pre-state.
/// For TX, the intervening traffic (capped at 8x L2) is then replayed as
/// writes to unrelated memory, which is what evicts the buffer before the
/// accelerator reads it. HP_C pays one flush/invalidate pass and a barrier,
/// contended when the background is memory intensive. HP_NC pays the CPU
/// penalty of touching a non-cacheable buffer: reads are charged unless the
/// CPU mostly writes, irregular writes are charged unless it mostly reads,
/// and a TX producer always writes while an RX consumer always reads.
/// Makeable-sequential writes are charged as sequential.
std::vector<RankedPath> rank_all(const WorkloadProfile& profile, const PlatformConfig& config,
                                 const CalibrationParams& params, const SwCostParams& sw);

/// Paths that can carry the flow, in tie-break order.
std::vector<InterfacePath> legal_paths(Direction direction);

// Profile file: "key = value" lines, '#' comments. Keys are the
// WorkloadProfile field names; buffer_bytes and direction are required,
// the rest default to mostly_write / sequential / immediate / 0 / false.
// Throws DataError with the line for unknown keys or bad values.
WorkloadProfile read_profile(std::istream& in, const std::string& name);
WorkloadProfile read_profile_file(const std::string& path);
void write_profile(std::ostream& out, const WorkloadProfile& profile);

}  // namespace iocoh
