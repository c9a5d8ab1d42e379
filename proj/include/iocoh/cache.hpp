#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "iocoh/platform.hpp"

namespace iocoh {

enum class AccessKind { Read, Write };

struct CacheStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t evictions = 0;
    std::uint64_t writebacks = 0;

    bool operator==(const CacheStats&) const = default;
};

struct EvictedLine {
    std::uint64_t line_addr = 0;  ///< byte address of the line start
    bool dirty = false;
};

struct AccessResult {
    bool hit = false;
    std::optional<EvictedLine> evicted;
};

struct FlushResult {
    std::uint64_t lines_cleaned = 0;
    std::uint64_t lines_invalidated = 0;
};

/// Shared L2 model: physically indexed, set-associative, write-back,
/// write-allocate, random replacement.
///
/// Set index is (addr / line) mod num_sets. A miss that allocates takes the
/// lowest-numbered invalid way; only when the set is full does it draw from
/// the generator (std::mt19937_64 seeded with config.seed) and evict way
/// `draw % ways`. That rule is the whole replacement contract, so two caches
/// fed the same seed and operation sequence end bit-identical.
class CacheState {
public:
    struct Line {
        std::uint64_t line_addr = 0;
        bool valid = false;
        bool dirty = false;

        bool operator==(const Line&) const = default;
    };

    explicit CacheState(const PlatformConfig& config);

    /// Cache whose every way already holds a clean line of unrelated data
    /// starting at `background_base` (an L2 that has been running for a while).
    static CacheState warm(const PlatformConfig& config, std::uint64_t background_base);

    AccessResult access(std::uint64_t addr, AccessKind kind, bool allocate);

    /// Non-mutating probe; no counters move.
    const Line* peek(std::uint64_t addr) const;

    FlushResult flush_range(std::uint64_t base, std::uint64_t len);
    std::uint64_t invalidate_range(std::uint64_t base, std::uint64_t len);

    /// Valid lines overlapping [base, base+len) over lines spanned. len == 0 throws DomainError.
    double resident_fraction(std::uint64_t base, std::uint64_t len) const;

    std::uint64_t resident_lines(std::uint64_t base, std::uint64_t len) const;
    std::uint64_t resident_dirty_lines(std::uint64_t base, std::uint64_t len) const;

    std::uint64_t valid_lines() const;
    std::uint64_t num_sets() const { return num_sets_; }
    std::uint32_t ways() const { return ways_; }
    std::uint32_t line_bytes() const { return line_bytes_; }
    std::uint64_t line_of(std::uint64_t addr) const { return addr / line_bytes_; }
    std::uint64_t set_of(std::uint64_t addr) const { return line_of(addr) % num_sets_; }

    const CacheStats& stats() const { return stats_; }
    const std::vector<Line>& lines() const { return lines_; }

    bool operator==(const CacheState& other) const;

private:
    Line* find(std::uint64_t line_addr);
    const Line* find(std::uint64_t line_addr) const;

    template <typename Fn>
    void for_each_resident(std::uint64_t base, std::uint64_t len, Fn&& fn);

    std::uint64_t num_sets_;
    std::uint32_t ways_;
    std::uint32_t line_bytes_;
    std::vector<Line> lines_;  // num_sets_ * ways_, set-major
    std::mt19937_64 rng_;
    CacheStats stats_;
};

/// Line-aligned [first, last) line indices covering a byte range.
struct LineSpan {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::uint64_t count() const { return last - first; }
};

LineSpan lines_spanned(std::uint64_t base, std::uint64_t len, std::uint32_t line_bytes);

}  // namespace iocoh
