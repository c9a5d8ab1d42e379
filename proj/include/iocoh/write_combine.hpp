#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iocoh/platform.hpp"

namespace iocoh {

struct WriteOp {
    std::uint64_t addr = 0;
    std::uint32_t size = 0;
};

struct WcEmitted {
    std::uint64_t requests = 0;
    std::uint64_t bytes = 0;

    bool operator==(const WcEmitted&) const = default;
};

/// Single write-combine buffer in front of non-cacheable memory.
///
/// Writes merge while they land in the currently open aligned chunk and do
/// not overlap bytes already held. A write to another chunk, or one that
/// overlaps held bytes, drains the buffer as one memory request first.
class WcBuffer {
public:
    explicit WcBuffer(std::uint32_t chunk_bytes);

    /// Caller splits writes that straddle a chunk boundary. Throws SpecError otherwise.
    void write(const WriteOp& w);
    void drain();

    bool open() const { return open_; }
    std::uint64_t chunk_addr() const { return chunk_addr_; }
    const std::vector<bool>& fill_mask() const { return fill_mask_; }
    const WcEmitted& emitted() const { return emitted_; }

private:
    std::uint32_t chunk_bytes_;
    bool open_ = false;
    std::uint64_t chunk_addr_ = 0;
    std::vector<bool> fill_mask_;
    WcEmitted emitted_;
};

/// Runs a whole stream through a fresh buffer and drains it at the end.
WcEmitted wc_write_stream(std::span<const WriteOp> writes, std::uint32_t chunk_bytes);

/// Splits one write into pieces that never cross a chunk boundary.
std::vector<WriteOp> split_at_chunks(const WriteOp& w, std::uint32_t chunk_bytes);

// ---------------------------------------------------------------------------
// Read-allocate-mode (cache bypass) classification.

struct WriteStreamSummary {
    std::uint64_t sequential_run_bytes = 0;  ///< longest run of address-contiguous writes
    std::uint64_t total_bytes = 0;
    bool write_only = true;  ///< no reads interleaved with the stream
};

enum class AllocationDecision { AllocateLines, BypassToMemory };

/// Throws SpecError if sequential_run_bytes > total_bytes.
AllocationDecision classify_write_stream(const WriteStreamSummary& summary, const PlatformConfig& config);

/// Longest run where each write starts exactly where the previous one ended.
WriteStreamSummary summarize_writes(std::span<const WriteOp> writes);

}  // namespace iocoh
