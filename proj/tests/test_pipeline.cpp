#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "iocoh/pipeline.hpp"
#include "support.hpp"

using namespace iocoh;

namespace {

const PlatformConfig kCfg;
const CalibrationParams kParams = CalibrationParams::shipped();
const SwCostParams kSw;

std::vector<Pipeline> shipped(const std::string& file) { return read_scenarios_file(test::repo_path("scenarios/" + file)); }

Pipeline parse_one(const std::string& text) {
    std::istringstream in(text);
    auto v = read_scenarios(in, "t.scn");
    REQUIRE(v.size() == 1);
    return v.front();
}

std::size_t error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        read_scenarios(in, "t.scn");
    } catch (const DataError& e) {
        return e.line();
    }
    return 0;
}

const char* kSmall =
    "scenario small\n"
    "buffer src 64K\n"
    "buffer dst 64K\n"
    "cpu fill write=src\n"
    "tx src\n"
    "accel work time=10us\n"
    "rx dst\n"
    "cpu use read=dst write=src pattern=irregular\n";

}  // namespace

TEST_CASE("scenario parsing: buffers, stages, repeats") {
    const auto p = parse_one(
        "# comment\n"
        "scenario r\n"
        "background memory-intensive\n"
        "buffer a 4K\n"
        "buffer b 10000\n"
        "repeat 3 {\n"
        "  tx a\n"
        "  repeat 2 {\n"
        "    accel k time=1us\n"
        "  }\n"
        "}\n"
        "pl2pl b\n");
    CHECK(p.name == "r");
    CHECK(p.background_memory_intensive);
    REQUIRE(p.buffers.size() == 2);
    CHECK(p.buffers[0].base_addr == 0);
    CHECK(p.buffers[1].base_addr == 8192);  // 4K rounded up plus a 4K gap
    CHECK(p.stages.size() == 3 * 3 + 1);
    CHECK(p.num_transfers() == 2);
    CHECK(p.transfer_labels == std::vector<std::string>{"tx a", "pl2pl b"});
    CHECK(std::get<Transfer>(p.stages[3]).transfer_id == 0);  // repeats share the declaration
}

TEST_CASE("scenario parsing errors name the line") {
    CHECK(error_line("buffer a 4K\n") == 1);
    CHECK(error_line("scenario s\nbuffer a 4K\ntx b\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\nbuffer a 8K\ntx a\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\nfly a\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\nrepeat 0 {\ntx a\n}\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\nrepeat 2 {\ntx a\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\n}\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\naccel x 5us\ntx a\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\ncpu c write=a pattern=zigzag\ntx a\n") == 3);
    CHECK(error_line("scenario s\nbuffer a 4K\n") == 2);  // no transfer
    CHECK(error_line("# empty\n") == 1);
    CHECK_THROWS_AS(read_scenarios_file("/nonexistent.scn"), DataError);
}

TEST_CASE("profile inference from neighbouring stages") {
    const auto p = parse_one(kSmall);
    const auto tx = infer_profile(p, 0);
    CHECK(tx.direction == Direction::CpuToPl);
    CHECK(tx.cpu_role == CpuRole::MostlyWrite);
    CHECK(tx.write_pattern == WritePattern::Sequential);
    CHECK(tx.consume_latency == ConsumeLatency::Immediate);
    const auto rx = infer_profile(p, 1);
    CHECK(rx.direction == Direction::PlToCpu);
    CHECK(rx.cpu_role == CpuRole::MostlyRead);
    CHECK(advised_assignment(p) == Assignment{InterfacePath::HP_NC, InterfacePath::HPC});

    const auto delayed = parse_one(
        "scenario d\nbuffer a 1M\nbuffer x 32M\n"
        "cpu make read=a write=a pattern=irregular\n"
        "cpu other read=x write=x\n"
        "tx a\n");
    const auto d = infer_profile(delayed, 0);
    CHECK(d.cpu_role == CpuRole::MixedReadWrite);
    CHECK(d.write_pattern == WritePattern::Irregular);
    CHECK(d.consume_latency == ConsumeLatency::Delayed);
    CHECK(d.intervening_traffic_bytes == 64u << 20);
    CHECK(recommend(d).path == InterfacePath::HPC);
    CHECK_THROWS_AS(infer_profile(delayed, 1), SpecError);
}

TEST_CASE("stage times add up to end to end, exactly") {
    for (const auto* file : {"dog.scn", "sgemm.scn", "dnn.scn"}) {
        for (const auto& p : shipped(file)) {
            const auto cmp = compare_assignments(p, kCfg, kParams, kSw);
            for (const auto& r : cmp.reports) {
                if (!r) continue;
                double sum = 0.0, compute = 0.0;
                for (const auto& s : r->stages) {
                    CHECK(s.total_s == s.compute_s + s.cost.total_s);
                    sum += s.total_s;
                    compute += s.compute_s;
                }
                CHECK(r->end_to_end_s == sum);
                CHECK(r->compute_s == compute);
                CHECK(r->stages.size() == p.stages.size());
            }
        }
    }
}

TEST_CASE("zero-byte pipeline costs nothing") {
    const auto p = parse_one(
        "scenario zero\nbuffer a 0\nbuffer b 0\n"
        "cpu make write=a\ntx a\naccel k time=0s\nrx b\ncpu use read=b\n");
    for (auto path : kAllPaths) {
        const auto r = run_pipeline(p, Assignment(2, path), kCfg, kParams, kSw);
        CHECK(r.end_to_end_s == 0.0);
    }
}

TEST_CASE("HP (C) pays maintenance on every transfer, HP (NC) pays at the CPU instead") {
    const auto p = shipped("dog.scn").front();
    const auto c = run_pipeline(p, *pure_assignment(p, InterfacePath::HP_C), kCfg, kParams, kSw);
    const auto nc = run_pipeline(p, *pure_assignment(p, InterfacePath::HP_NC), kCfg, kParams, kSw);
    for (const auto& s : c.stages) {
        if (s.path) {
            CHECK(s.cost.maintenance_s > 0.0);
            CHECK(s.cost.barrier_s > 0.0);
        }
    }
    for (const auto& s : nc.stages) CHECK(s.cost.maintenance_s + s.cost.barrier_s == 0.0);
    CHECK(nc.cost.cpu_access_penalty_s > 0.0);
    CHECK(c.cost.cpu_access_penalty_s == 0.0);
    CHECK(nc.compute_s == c.compute_s);  // compute is path independent
}

TEST_CASE("PL->PL on HP (C) pays two passes") {
    const auto p = parse_one("scenario q\nbuffer f 64K\npl2pl f\n");
    const auto r = run_pipeline(p, {InterfacePath::HP_C}, kCfg, kParams, kSw);
    CHECK(r.cost.barrier_s == doctest::Approx(2 * kSw.barrier_s));
    CHECK(r.cost.maintenance_s == doctest::Approx(2 * 65536 * kSw.maintenance_per_byte_s));
}

TEST_CASE("bad assignments") {
    const auto p = parse_one(kSmall);
    CHECK_THROWS_AS(run_pipeline(p, {InterfacePath::HP_NC}, kCfg, kParams, kSw), SpecError);
    const auto q = parse_one("scenario q\nbuffer f 64K\npl2pl f\n");
    CHECK_THROWS_AS(run_pipeline(q, {InterfacePath::ACP}, kCfg, kParams, kSw), SpecError);
    CHECK_FALSE(pure_assignment(q, InterfacePath::HPC).has_value());
    CHECK(pure_assignment(q, InterfacePath::HP_C).has_value());
}

TEST_CASE("determinism: repeated and parallel runs agree with a serial run") {
    for (const auto& p : shipped("sgemm.scn")) {
        const auto a = compare_assignments(p, kCfg, kParams, kSw);
        const auto b = compare_assignments(p, kCfg, kParams, kSw);
        REQUIRE(a.reports.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            REQUIRE(a.reports[i].has_value() == b.reports[i].has_value());
            if (!a.reports[i]) continue;
            CHECK(a.reports[i]->end_to_end_s == b.reports[i]->end_to_end_s);
            const auto serial = run_pipeline(p, a.reports[i]->assignment, kCfg, kParams, kSw);
            CHECK(serial.end_to_end_s == a.reports[i]->end_to_end_s);
            CHECK(a.reports[i]->label == assignment_label(i));
        }
    }
}

TEST_CASE("optimized is never worse than the best pure baseline on shipped scenarios") {
    for (const auto* file : {"dog.scn", "sgemm.scn", "dnn.scn"}) {
        for (const auto& p : shipped(file)) {
            const auto cmp = compare_assignments(p, kCfg, kParams, kSw);
            const auto& opt = cmp.reports[kOptimizedIndex];
            REQUIRE(opt);
            for (std::size_t i = 0; i < kOptimizedIndex; ++i) {
                if (cmp.reports[i]) CHECK_MESSAGE(opt->end_to_end_s <= cmp.reports[i]->end_to_end_s, p.name);
            }
        }
    }
}

TEST_CASE("sgemm: ACP wins on small blocks, HPC on large matrices") {
    const auto s = shipped("sgemm.scn");
    REQUIRE(s.size() == 2);
    const auto small = compare_assignments(s[0], kCfg, kParams, kSw);
    const auto large = compare_assignments(s[1], kCfg, kParams, kSw);
    CHECK(small.reports[3]->end_to_end_s < small.reports[2]->end_to_end_s);
    CHECK(large.reports[2]->end_to_end_s < large.reports[3]->end_to_end_s);
}

TEST_CASE("DNN chain has no pure HPC or ACP baseline") {
    const auto d = shipped("dnn.scn");
    REQUIRE(d.size() == 1);
    const auto cmp = compare_assignments(d[0], kCfg, kParams, kSw);
    CHECK(cmp.reports[0].has_value());
    CHECK(cmp.reports[1].has_value());
    CHECK_FALSE(cmp.reports[2].has_value());
    CHECK_FALSE(cmp.reports[3].has_value());
}

TEST_CASE("report writers") {
    const auto p = parse_one(kSmall);
    const std::vector<Comparison> cmps = {compare_assignments(p, kCfg, kParams, kSw)};
    std::ostringstream csv;
    write_comparison_csv(csv, cmps, false);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "scenario,assignment,stage,path,compute_s,hw_transfer_s,maintenance_s,barrier_s,"
                  "cpu_access_penalty_s,total_s");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.rfind("small,", 0) == 0);
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK(rows == 5);

    std::ostringstream with_stages;
    write_comparison_csv(with_stages, cmps, true);
    const auto text = with_stages.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 5 * (5 + 1));

    std::ostringstream table;
    write_comparison_table(table, cmps, false);
    CHECK(table.str().find("optimized: tx src -> HP (NC), rx dst -> HPC") != std::string::npos);
}
