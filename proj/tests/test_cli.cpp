#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "iocoh/advisor.hpp"
#include "iocoh/config.hpp"
#include "iocoh/csv_io.hpp"
#include "iocoh/pipeline.hpp"
#include "iocoh/units.hpp"
#include "support.hpp"

#ifndef IOCOH_CLI
#error "IOCOH_CLI must name the built command-line binary"
#endif

using namespace iocoh;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

Run run(const std::string& args) {
    const std::string err_file = std::string(IOCOH_BINARY_DIR) + "/cli_test_stderr.txt";
    const std::string cmd = std::string(IOCOH_CLI) + " " + args + " 2>" + err_file;
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.err = test::slurp(err_file);
    return r;
}

std::string repo(const std::string& rel) { return test::repo_path(rel); }

}  // namespace

TEST_CASE("pipeline table matches compare_assignments output byte for byte") {
    const auto r = run("pipeline --scenario " + repo("scenarios/dog.scn"));
    REQUIRE(r.status == 0);
    std::vector<Comparison> cmps;
    const Settings s;
    for (const auto& p : read_scenarios_file(repo("scenarios/dog.scn"))) {
        cmps.push_back(compare_assignments(p, s.platform, s.calibration, s.sw));
    }
    std::ostringstream want;
    write_comparison_table(want, cmps, false);
    CHECK(r.out == want.str());
}

TEST_CASE("pipeline CSV with stages matches the library writer") {
    const auto r = run("--output-format csv pipeline --stages --scenario " + repo("scenarios/sgemm.scn"));
    REQUIRE(r.status == 0);
    std::vector<Comparison> cmps;
    const Settings s;
    for (const auto& p : read_scenarios_file(repo("scenarios/sgemm.scn"))) {
        cmps.push_back(compare_assignments(p, s.platform, s.calibration, s.sw));
    }
    std::ostringstream want;
    write_comparison_csv(want, cmps, true);
    CHECK(r.out == want.str());
}

TEST_CASE("identical invocations give identical bytes") {
    for (const std::string& args : std::vector<std::string>{"sweep --sizes 4K..4M", "sweep --direction rx --seed 5",
                                   "pipeline --scenario " + repo("scenarios/dnn.scn"),
                                   "advise --mode rank --profile " + repo("data/profiles/tx-delayed.profile")}) {
        const auto a = run(args);
        const auto b = run(args);
        REQUIRE(a.status == 0);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("sweep CSV round-trips through the sweep schema and equals the library sweep") {
    const auto r = run("sweep --direction tx --sizes 4K..32M");
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    const auto pts = read_sweep_csv(in, "stdout");
    CHECK(pts.size() == 14 * 5);
    const auto sizes = parse_size_list("4K..32M");
    const auto want = sweep(sizes, Direction::CpuToPl, standard_cases(Direction::CpuToPl), PlatformConfig{},
                            CalibrationParams::shipped());
    REQUIRE(want.size() == pts.size());
    std::ostringstream again;
    write_sweep_csv(again, want);
    CHECK(again.str() == r.out);
}

TEST_CASE("advise tree on a PL->PL profile prints HP (NC) with one rationale line") {
    const auto r = run("advise --profile " + repo("data/profiles/pl2pl.profile") + " --mode tree");
    REQUIRE(r.status == 0);
    CHECK(r.out == "HP (NC)\ndirection | Which way does the data move? | pl2pl\n");
}

TEST_CASE("advise outputs for the shipped profiles") {
    CHECK(run("advise --profile " + repo("data/profiles/tx-small-irregular.profile")).out.rfind("ACP\n", 0) == 0);
    CHECK(run("advise --profile " + repo("data/profiles/tx-delayed.profile")).out.rfind("HP (C)\n", 0) == 0);
    const auto csv = run("advise --output-format csv --profile " + repo("data/profiles/tx-sequential.profile"));
    CHECK(csv.out.rfind("path,node_id,question,answer\nHP_NC,direction,", 0) == 0);
    const auto rank = run("advise --mode rank --profile " + repo("data/profiles/pl2pl.profile"));
    CHECK(rank.out.find("tree picks HP (NC)") != std::string::npos);
}

TEST_CASE("global options also work after the subcommand") {
    const auto a = run("--output-format table sweep --sizes 4K,1M");
    const auto b = run("sweep --sizes 4K,1M --output-format table");
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("path", 0) == 0);
}

TEST_CASE("--seed and --config feed the model") {
    const std::string cfg = std::string(IOCOH_BINARY_DIR) + "/cli_test.cfg";
    {
        std::ofstream f(cfg);
        f << "[calibration]\nhpc.rx_derate = 0.5\n";
    }
    const auto base = run("sweep --direction rx --sizes 1M");
    const auto slow = run("--config " + cfg + " sweep --direction rx --sizes 1M");
    REQUIRE(slow.status == 0);
    CHECK(base.out != slow.out);
    const auto s1 = run("sweep --sizes 4M --seed 1");
    const auto s2 = run("sweep --sizes 4M --seed 2");
    CHECK(s1.out != s2.out);  // ACP self-eviction depends on the draw
}

TEST_CASE("--output writes a file") {
    const std::string path = std::string(IOCOH_BINARY_DIR) + "/cli_test_sweep.csv";
    std::remove(path.c_str());
    const auto r = run("sweep --sizes 4K --output " + path);
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    CHECK(test::slurp(path).rfind(kSweepHeader, 0) == 0);
}

TEST_CASE("calibrate prints a loadable calibration section") {
    const auto r = run("calibrate --anchors " + repo("data/anchors.csv"));
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    const auto s = load_settings(in, "calibrate-output");
    CHECK(s.calibration.hpc.rx_derate == doctest::Approx(CalibrationParams::shipped().hpc.rx_derate).epsilon(1e-6));
    CHECK(s.calibration.acp.miss_per_beat_cycles ==
          doctest::Approx(CalibrationParams::shipped().acp.miss_per_beat_cycles).epsilon(1e-6));
    const auto csv = run("--output-format csv calibrate --anchors " + repo("data/anchors.csv"));
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 71);
}

TEST_CASE("usage errors exit 1 and name the flag") {
    auto r = run("");
    CHECK(r.status == 1);
    r = run("sweep --sizes 4Q");
    CHECK(r.status == 1);
    CHECK(r.err.find("--sizes") != std::string::npos);
    r = run("sweep --sizes 8K,4K");
    CHECK(r.status == 1);
    r = run("sweep --direction up");
    CHECK(r.status == 1);
    CHECK(r.err.find("--direction") != std::string::npos);
    r = run("advise");
    CHECK(r.status == 1);
    CHECK(r.err.find("--profile") != std::string::npos);
    r = run("advise --profile " + repo("data/profiles/pl2pl.profile") + " --mode guess");
    CHECK(r.status == 1);
    r = run("--output-format xml sweep");
    CHECK(r.status == 1);
    r = run("frobnicate");
    CHECK(r.status == 1);
    CHECK(run("--help").status == 0);
}

TEST_CASE("data errors exit 2 with file:line") {
    const std::string dir = IOCOH_BINARY_DIR;
    {
        std::ofstream f(dir + "/cli_bad.scn");
        f << "scenario x\nbuffer a 4K\ntx b\n";
    }
    auto r = run("pipeline --scenario " + dir + "/cli_bad.scn");
    CHECK(r.status == 2);
    CHECK(r.err.find("cli_bad.scn:3:") != std::string::npos);
    CHECK(r.err.find("unknown buffer") != std::string::npos);

    {
        std::ofstream f(dir + "/cli_bad.profile");
        f << "buffer_bytes = 4K\ndirection = up\n";
    }
    r = run("advise --profile " + dir + "/cli_bad.profile");
    CHECK(r.status == 2);
    CHECK(r.err.find("cli_bad.profile:2:") != std::string::npos);

    {
        std::ofstream f(dir + "/cli_bad.csv");
        f << "path,direction,pre_state,size_bytes,bandwidth_Bps,source\nHP,tx,-,4K,fast,x\n";
    }
    r = run("calibrate --anchors " + dir + "/cli_bad.csv");
    CHECK(r.status == 2);
    CHECK(r.err.find("cli_bad.csv:2:") != std::string::npos);

    {
        std::ofstream f(dir + "/cli_bad.cfg");
        f << "[platform]\nl2_ways = many\n";
    }
    r = run("--config " + dir + "/cli_bad.cfg sweep");
    CHECK(r.status == 2);
    CHECK(r.err.find("cli_bad.cfg:2:") != std::string::npos);

    r = run("pipeline --scenario /nonexistent/x.scn");
    CHECK(r.status == 2);
    CHECK(r.err.find("error: ") == 0);
}
