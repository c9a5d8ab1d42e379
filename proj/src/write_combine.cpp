#include "iocoh/write_combine.hpp"

#include <algorithm>
#include <string>

namespace iocoh {

WcBuffer::WcBuffer(std::uint32_t chunk_bytes) : chunk_bytes_(chunk_bytes), fill_mask_(chunk_bytes, false) {
    if (chunk_bytes == 0) throw ConfigError("write-combine chunk must be at least one byte");
}

void WcBuffer::drain() {
    if (!open_) return;
    const auto held = static_cast<std::uint64_t>(std::count(fill_mask_.begin(), fill_mask_.end(), true));
    ++emitted_.requests;
    emitted_.bytes += held;
    std::fill(fill_mask_.begin(), fill_mask_.end(), false);
    open_ = false;
}

void WcBuffer::write(const WriteOp& w) {
    if (w.size == 0) return;
    const std::uint64_t chunk = w.addr / chunk_bytes_ * chunk_bytes_;
    if (w.addr + w.size > chunk + chunk_bytes_) {
        throw SpecError("write of " + std::to_string(w.size) + " bytes at " + std::to_string(w.addr) +
                        " straddles a write-combine chunk boundary");
    }
    const std::uint64_t lo = w.addr - chunk;
    if (open_) {
        bool overlap = chunk != chunk_addr_;
        for (std::uint64_t i = lo; !overlap && i < lo + w.size; ++i) overlap = fill_mask_[i];
        if (overlap) drain();
    }
    if (!open_) {
        open_ = true;
        chunk_addr_ = chunk;
    }
    for (std::uint64_t i = lo; i < lo + w.size; ++i) fill_mask_[i] = true;
}

WcEmitted wc_write_stream(std::span<const WriteOp> writes, std::uint32_t chunk_bytes) {
    WcBuffer buf(chunk_bytes);
    for (const auto& w : writes) buf.write(w);
    buf.drain();
    return buf.emitted();
}

std::vector<WriteOp> split_at_chunks(const WriteOp& w, std::uint32_t chunk_bytes) {
    std::vector<WriteOp> out;
    std::uint64_t addr = w.addr;
    std::uint64_t left = w.size;
    while (left > 0) {
        const std::uint64_t room = chunk_bytes - addr % chunk_bytes;
        const std::uint64_t n = std::min(room, left);
        out.push_back({addr, static_cast<std::uint32_t>(n)});
        addr += n;
        left -= n;
    }
    return out;
}

AllocationDecision classify_write_stream(const WriteStreamSummary& s, const PlatformConfig& config) {
    if (s.sequential_run_bytes > s.total_bytes) {
        throw SpecError("write stream summary: sequential run exceeds total bytes");
    }
    const bool bypass = s.write_only && s.sequential_run_bytes >= config.bypass_threshold_bytes;
    return bypass ? AllocationDecision::BypassToMemory : AllocationDecision::AllocateLines;
}

WriteStreamSummary summarize_writes(std::span<const WriteOp> writes) {
    WriteStreamSummary s;
    std::uint64_t run = 0;
    std::uint64_t next = 0;
    bool first = true;
    for (const auto& w : writes) {
        s.total_bytes += w.size;
        run = (!first && w.addr == next) ? run + w.size : w.size;
        next = w.addr + w.size;
        first = false;
        s.sequential_run_bytes = std::max(s.sequential_run_bytes, run);
    }
    return s;
}

}  // namespace iocoh
