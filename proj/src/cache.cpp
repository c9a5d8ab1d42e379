#include "iocoh/cache.hpp"

#include <algorithm>

namespace iocoh {

LineSpan lines_spanned(std::uint64_t base, std::uint64_t len, std::uint32_t line_bytes) {
    if (len == 0) return {base / line_bytes, base / line_bytes};
    return {base / line_bytes, (base + len - 1) / line_bytes + 1};
}

CacheState::CacheState(const PlatformConfig& config)
    : num_sets_((require_valid(config), config.num_sets())),
      ways_(config.l2_ways),
      line_bytes_(config.l2_line_bytes),
      lines_(num_sets_ * ways_),
      rng_(config.seed) {}

CacheState CacheState::warm(const PlatformConfig& config, std::uint64_t background_base) {
    CacheState c(config);
    const std::uint64_t first = background_base / c.line_bytes_;
    // Line k of the background region maps to set (first + k) % num_sets,
    // so num_sets * ways consecutive lines fill every way exactly once.
    for (std::uint64_t k = 0; k < c.num_sets_ * c.ways_; ++k) {
        const std::uint64_t line = first + k;
        const std::uint64_t set = line % c.num_sets_;
        const std::uint64_t way = k / c.num_sets_;
        c.lines_[set * c.ways_ + way] = Line{line * c.line_bytes_, true, false};
    }
    return c;
}

CacheState::Line* CacheState::find(std::uint64_t line_addr) {
    const std::uint64_t set = (line_addr / line_bytes_) % num_sets_;
    Line* row = lines_.data() + set * ways_;
    for (std::uint32_t w = 0; w < ways_; ++w) {
        if (row[w].valid && row[w].line_addr == line_addr) return &row[w];
    }
    return nullptr;
}

const CacheState::Line* CacheState::find(std::uint64_t line_addr) const {
    return const_cast<CacheState*>(this)->find(line_addr);
}

const CacheState::Line* CacheState::peek(std::uint64_t addr) const {
    return find(addr / line_bytes_ * line_bytes_);
}

AccessResult CacheState::access(std::uint64_t addr, AccessKind kind, bool allocate) {
    const std::uint64_t line_addr = addr / line_bytes_ * line_bytes_;
    if (Line* l = find(line_addr)) {
        ++stats_.hits;
        if (kind == AccessKind::Write) l->dirty = true;
        return {true, std::nullopt};
    }
    ++stats_.misses;
    if (!allocate) return {false, std::nullopt};

    const std::uint64_t set = (line_addr / line_bytes_) % num_sets_;
    Line* row = lines_.data() + set * ways_;
    Line* slot = nullptr;
    for (std::uint32_t w = 0; w < ways_; ++w) {
        if (!row[w].valid) {
            slot = &row[w];
            break;
        }
    }
    AccessResult result{false, std::nullopt};
    if (slot == nullptr) {
        slot = &row[rng_() % ways_];
        ++stats_.evictions;
        if (slot->dirty) ++stats_.writebacks;
        result.evicted = EvictedLine{slot->line_addr, slot->dirty};
    }
    *slot = Line{line_addr, true, kind == AccessKind::Write};
    return result;
}

template <typename Fn>
void CacheState::for_each_resident(std::uint64_t base, std::uint64_t len, Fn&& fn) {
    if (len == 0) return;
    const LineSpan span = lines_spanned(base, len, line_bytes_);
    if (span.count() > lines_.size()) {
        // Range larger than the cache: scan the cache instead of the range.
        for (auto& l : lines_) {
            const std::uint64_t idx = l.line_addr / line_bytes_;
            if (l.valid && idx >= span.first && idx < span.last) fn(l);
        }
        return;
    }
    for (std::uint64_t i = span.first; i < span.last; ++i) {
        if (Line* l = find(i * line_bytes_)) fn(*l);
    }
}

FlushResult CacheState::flush_range(std::uint64_t base, std::uint64_t len) {
    FlushResult r;
    for_each_resident(base, len, [&](Line& l) {
        if (l.dirty) {
            ++r.lines_cleaned;
            ++stats_.writebacks;
        }
        ++r.lines_invalidated;
        l = Line{};
    });
    return r;
}

std::uint64_t CacheState::invalidate_range(std::uint64_t base, std::uint64_t len) {
    std::uint64_t dropped = 0;
    for_each_resident(base, len, [&](Line& l) {
        ++dropped;
        l = Line{};
    });
    return dropped;
}

std::uint64_t CacheState::resident_lines(std::uint64_t base, std::uint64_t len) const {
    std::uint64_t n = 0;
    const_cast<CacheState*>(this)->for_each_resident(base, len, [&](Line&) { ++n; });
    return n;
}

std::uint64_t CacheState::resident_dirty_lines(std::uint64_t base, std::uint64_t len) const {
    std::uint64_t n = 0;
    const_cast<CacheState*>(this)->for_each_resident(base, len, [&](Line& l) { n += l.dirty ? 1 : 0; });
    return n;
}

double CacheState::resident_fraction(std::uint64_t base, std::uint64_t len) const {
    if (len == 0) throw DomainError("resident_fraction: empty range");
    const LineSpan span = lines_spanned(base, len, line_bytes_);
    return static_cast<double>(resident_lines(base, len)) / static_cast<double>(span.count());
}

std::uint64_t CacheState::valid_lines() const {
    return static_cast<std::uint64_t>(std::count_if(lines_.begin(), lines_.end(), [](const Line& l) { return l.valid; }));
}

bool CacheState::operator==(const CacheState& o) const {
    return num_sets_ == o.num_sets_ && ways_ == o.ways_ && line_bytes_ == o.line_bytes_ && lines_ == o.lines_ &&
           rng_ == o.rng_ && stats_ == o.stats_;
}

}  // namespace iocoh
