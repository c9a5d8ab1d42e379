#include <doctest.h>

#include <random>

#include "iocoh/write_combine.hpp"
#include "oracles/oracles.hpp"

using namespace iocoh;

TEST_CASE("sequential 4-byte stores coalesce into full chunks") {
    std::vector<WriteOp> w;
    for (std::uint64_t a = 0; a < 256; a += 4) w.push_back({a, 4});
    const auto e = wc_write_stream(w, 16);
    CHECK(e.requests == 16);
    CHECK(e.bytes == 256);
}

TEST_CASE("column-stride stores get one request each") {
    std::vector<WriteOp> w;
    for (std::uint64_t r = 0; r < 32; ++r) w.push_back({r * 1024, 4});
    CHECK(wc_write_stream(w, 16).requests == 32);
}

TEST_CASE("overlap drains the open chunk") {
    WcBuffer b(16);
    b.write({0, 8});
    b.write({8, 4});
    CHECK(b.emitted().requests == 0);
    b.write({4, 4});  // rewrites held bytes
    CHECK(b.emitted().requests == 1);
    CHECK(b.emitted().bytes == 12);
    CHECK(b.open());
    b.drain();
    CHECK(b.emitted().requests == 2);
    CHECK(b.emitted().bytes == 16);
    CHECK_FALSE(b.open());
}

TEST_CASE("straddling writes are rejected; split_at_chunks fixes them") {
    WcBuffer b(16);
    CHECK_THROWS_AS(b.write({12, 8}), SpecError);
    const auto parts = split_at_chunks({12, 40}, 16);
    REQUIRE(parts.size() == 4);
    CHECK(parts[0].addr == 12);
    CHECK(parts[0].size == 4);
    CHECK(parts[3].addr == 48);
    CHECK(parts[3].size == 4);
    CHECK_THROWS_AS(WcBuffer(0), ConfigError);
}

TEST_CASE("bypass classification") {
    PlatformConfig c;
    CHECK(classify_write_stream({256, 1024, true}, c) == AllocationDecision::BypassToMemory);
    CHECK(classify_write_stream({255, 1024, true}, c) == AllocationDecision::AllocateLines);
    CHECK(classify_write_stream({4096, 4096, false}, c) == AllocationDecision::AllocateLines);
    CHECK_THROWS_AS(classify_write_stream({10, 5, true}, c), SpecError);
}

TEST_CASE("summarize_writes finds the longest contiguous run") {
    const std::vector<WriteOp> w = {{0, 4}, {4, 4}, {8, 8}, {100, 4}, {104, 4}, {0, 4}};
    const auto s = summarize_writes(w);
    CHECK(s.total_bytes == 28);
    CHECK(s.sequential_run_bytes == 16);
}

// 1000 random streams against the run-length oracle.
TEST_CASE("property: byte conservation and request bounds") {
    std::mt19937_64 gen(99);
    for (int k = 0; k < 1000; ++k) {
        const std::uint32_t chunk = 8u << (gen() % 3);  // 8, 16, 32
        std::vector<WriteOp> writes;
        const int n = 1 + static_cast<int>(gen() % 64);
        std::uint64_t cursor = gen() % 256;
        for (int i = 0; i < n; ++i) {
            // mostly sequential with random jumps and rewrites
            const auto mode = gen() % 4;
            if (mode == 0) cursor = gen() % 512;
            if (mode == 1 && cursor >= 8) cursor -= 8;
            const WriteOp w{cursor, static_cast<std::uint32_t>(1 + gen() % 12)};
            for (const auto& piece : split_at_chunks(w, chunk)) writes.push_back(piece);
            cursor += w.size;
        }
        const auto got = wc_write_stream(writes, chunk);
        const auto want = oracle::wc_runs(writes, chunk);
        std::uint64_t bytes = 0;
        for (const auto& w : writes) bytes += w.size;
        REQUIRE(got.bytes == bytes);
        REQUIRE(got.requests == want.requests);
        REQUIRE(got.requests <= writes.size());
        REQUIRE(got.requests * chunk >= bytes);
    }
}
