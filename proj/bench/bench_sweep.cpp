// Serial reference sweep vs the OpenMP sweep, plus the five-assignment
// pipeline comparison.

#include <benchmark/benchmark.h>

#include "iocoh/interconnect.hpp"
#include "iocoh/pipeline.hpp"
#include "iocoh/units.hpp"

using namespace iocoh;

namespace {

const PlatformConfig kCfg;

void BM_SweepSerial(benchmark::State& state) {
    const auto sizes = parse_size_list("4K..32M");
    const auto cases = standard_cases(Direction::CpuToPl);
    const auto params = CalibrationParams::shipped();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_serial(sizes, Direction::CpuToPl, cases, kCfg, params));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sizes.size() * cases.size()));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto sizes = parse_size_list("4K..32M");
    const auto cases = standard_cases(Direction::CpuToPl);
    const auto params = CalibrationParams::shipped();
    for (auto _ : state) benchmark::DoNotOptimize(sweep(sizes, Direction::CpuToPl, cases, kCfg, params));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sizes.size() * cases.size()));
}

void BM_CompareAssignments(benchmark::State& state) {
    const auto pipelines = read_scenarios_file(std::string(IOCOH_SOURCE_DIR) + "/scenarios/sgemm.scn");
    const auto params = CalibrationParams::shipped();
    const SwCostParams sw;
    for (auto _ : state) {
        for (const auto& p : pipelines) benchmark::DoNotOptimize(compare_assignments(p, kCfg, params, sw));
    }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CompareAssignments)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
