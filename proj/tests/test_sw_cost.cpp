#include <doctest.h>

#include "iocoh/sw_cost.hpp"

using namespace iocoh;

namespace {
const SwCostParams kSw;
constexpr std::uint64_t kL2 = 1u << 20;
}  // namespace

TEST_CASE("memcpy: non-cacheable source pays the read penalty, destination does not matter") {
    const std::uint64_t n = 1u << 20;
    const auto cc = memcpy_cost(RegionKind::Cacheable, RegionKind::Cacheable, n, kSw);
    const auto nc = memcpy_cost(RegionKind::NonCacheable, RegionKind::Cacheable, n, kSw);
    const auto cn = memcpy_cost(RegionKind::Cacheable, RegionKind::NonCacheable, n, kSw);
    CHECK(cc.read_s == doctest::Approx(n / 6.4e9));
    CHECK(cc.write_s == doctest::Approx(n / 4.8e9));
    CHECK(cc.total_s == cc.read_s + cc.write_s);
    CHECK(nc.read_s / cc.read_s == doctest::Approx(30.0));
    CHECK(cn.total_s == cc.total_s);
    CHECK_THROWS_AS(memcpy_cost(RegionKind::Cacheable, RegionKind::Cacheable, 0, kSw), DomainError);
}

TEST_CASE("irregular writes: penalty depends on whether the set fits in L2") {
    CHECK(irregular_write_factor(RegionKind::Cacheable, 1u << 24, kL2, kSw) == 1.0);
    CHECK(irregular_write_factor(RegionKind::NonCacheable, 64u << 10, kL2, kSw) == 4.0);
    CHECK(irregular_write_factor(RegionKind::NonCacheable, kL2, kL2, kSw) == 4.0);
    CHECK(irregular_write_factor(RegionKind::NonCacheable, kL2 + 1, kL2, kSw) == 1.33);
    const double c = irregular_write_cost(RegionKind::Cacheable, 1u << 24, kL2, kSw);
    CHECK(c == doctest::Approx((1u << 24) / 4.8e9));
    CHECK(irregular_write_cost(RegionKind::NonCacheable, 1u << 24, kL2, kSw) / c == doctest::Approx(1.33));
    CHECK_THROWS_AS(irregular_write_cost(RegionKind::Cacheable, 0, kL2, kSw), DomainError);
}

TEST_CASE("maintenance: per-byte pass plus one barrier per buffer") {
    const std::uint64_t one[] = {1u << 20};
    const auto m = maintenance_cost(one, false, kSw);
    CHECK(m.flush_s == doctest::Approx((1u << 20) * 1e-11));
    CHECK(m.barrier_s == doctest::Approx(15e-6));
    CHECK(m.total_s == m.flush_s + m.barrier_s);
    CHECK_FALSE(m.contended);

    const std::uint64_t two[] = {4096, 8192};
    const auto c = maintenance_cost(two, true, kSw);
    CHECK(c.barrier_s == doctest::Approx(2 * 15e-6 * 2.0));
    CHECK(c.flush_s == doctest::Approx(12288 * 1e-11));
    CHECK(c.contended);
    CHECK(maintenance_cost(std::span<const std::uint64_t>{}, true, kSw).total_s == 0.0);
}

TEST_CASE("cpu stage cost splits compute and penalty") {
    CpuStage s;
    s.bytes_read = 1u << 20;
    s.bytes_written = 1u << 20;
    s.src_kind = RegionKind::NonCacheable;
    s.dst_kind = RegionKind::NonCacheable;
    s.write_pattern = AccessPattern::Irregular;
    const auto c = cpu_stage_cost(s, kL2, kSw);
    const double read_c = (1u << 20) / 6.4e9, write_c = (1u << 20) / 4.8e9;
    CHECK(c.read_s == doctest::Approx(30 * read_c));
    CHECK(c.write_s == doctest::Approx(4 * write_c));
    CHECK(c.penalty_s == doctest::Approx(29 * read_c + 3 * write_c));
    CHECK(c.total_s - c.penalty_s == doctest::Approx(read_c + write_c));

    s.src_kind = s.dst_kind = RegionKind::Cacheable;
    CHECK(cpu_stage_cost(s, kL2, kSw).penalty_s == 0.0);
    CHECK(cpu_stage_cost(CpuStage{}, kL2, kSw).total_s == 0.0);
}

TEST_CASE("parameter validation") {
    CHECK(validate_sw_params(kSw).empty());
    SwCostParams p;
    p.nc_read_penalty = 1.0;
    REQUIRE_FALSE(validate_sw_params(p).empty());
    CHECK(validate_sw_params(p).front().field == "nc_read_penalty");
    p = SwCostParams{};
    p.barrier_s = 0;
    CHECK(validate_sw_params(p).front().field == "barrier_s");
}

TEST_CASE("region kind spelling") {
    CHECK(parse_region_kind(to_string(RegionKind::Cacheable)) == RegionKind::Cacheable);
    CHECK(parse_region_kind("non-cacheable") == RegionKind::NonCacheable);
    CHECK(parse_region_kind("NC") == RegionKind::NonCacheable);
    CHECK_THROWS_AS(parse_region_kind("write-through"), std::invalid_argument);
}
