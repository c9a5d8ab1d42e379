#include <doctest.h>

#include <sstream>

#include "iocoh/config.hpp"
#include "support.hpp"

using namespace iocoh;

namespace {

Settings parse(const std::string& text) {
    std::istringstream in(text);
    return load_settings(in, "test.cfg");
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("empty file gives defaults with the shipped calibration") {
    const auto s = parse("# nothing\n\n");
    CHECK(s.platform.l2_size_bytes == (1u << 20));
    CHECK(s.sw.barrier_s == 15e-6);
    CHECK(s.calibration.hpc.rx_derate == CalibrationParams::shipped().hpc.rx_derate);
}

TEST_CASE("suffixed values") {
    const auto s = parse(
        "[platform]\n"
        "l2_size_bytes = 2MiB\n"
        "bus_freq_hz = 250MHz\n"
        "seed = 9\n"
        "[sw_cost]\n"
        "barrier_s = 5us   # inline comment\n"
        "cacheable_read_Bps = 3.2GB/s\n"
        "[calibration]\n"
        "hpc.rx_derate = 0.9\n"
        "provenance = hand tuned\n");
    CHECK(s.platform.l2_size_bytes == (2u << 20));
    CHECK(s.platform.bus_freq_hz == 250'000'000);
    CHECK(s.platform.seed == 9);
    CHECK(s.sw.barrier_s == doctest::Approx(5e-6));
    CHECK(s.sw.cacheable_read_Bps == doctest::Approx(3.2e9));
    CHECK(s.calibration.hpc.rx_derate == 0.9);
    CHECK(s.calibration.provenance == "hand tuned");
}

TEST_CASE("write_settings round-trips exactly") {
    Settings s;
    s.platform.l2_ways = 8;
    s.platform.seed = 77;
    s.sw.nc_read_penalty = 27.125;
    s.sw.maintenance_per_byte_s = 1.234567890123e-11;
    s.calibration.acp.miss_per_beat_cycles = 2.718281828459045;
    s.calibration.provenance = "round trip";
    std::ostringstream out;
    write_settings(out, s);
    const auto back = parse(out.str());
    CHECK(back.platform.l2_ways == 8);
    CHECK(back.platform.seed == 77);
    CHECK(back.sw.nc_read_penalty == s.sw.nc_read_penalty);
    CHECK(back.sw.maintenance_per_byte_s == s.sw.maintenance_per_byte_s);
    CHECK(back.calibration.acp.miss_per_beat_cycles == s.calibration.acp.miss_per_beat_cycles);
    CHECK(back.calibration.hp.startup_cycles == s.calibration.hp.startup_cycles);
    CHECK(back.calibration.provenance == "round trip");
    std::ostringstream again;
    write_settings(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("checked-in default config equals the built-in defaults") {
    const auto s = load_settings_file(test::repo_path("data/default.cfg"));
    std::ostringstream a, b;
    write_settings(a, s);
    write_settings(b, Settings{});
    CHECK(a.str() == b.str());
}

TEST_CASE("errors carry the line") {
    CHECK(error_line("[platform]\nl2_ways = four\n") == 2);
    CHECK(error_line("[platform]\n\nl2_wayz = 4\n") == 3);
    CHECK(error_line("[gpu]\n") == 1);
    CHECK(error_line("l2_ways = 4\n") == 1);
    CHECK(error_line("[platform]\nl2_ways = 4\nl2_ways = 8\n") == 3);
    CHECK(error_line("[platform\n") == 1);
    CHECK(error_line("[sw_cost]\nbarrier_s\n") == 2);
    CHECK_THROWS_AS(load_settings_file("/nonexistent.cfg"), DataError);
}

TEST_CASE("files that parse but break a rule throw ConfigError") {
    CHECK_THROWS_AS(parse("[platform]\nl2_size_bytes = 1000\n"), ConfigError);
    CHECK_THROWS_AS(parse("[sw_cost]\nnc_read_penalty = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("[calibration]\nhpc.rx_derate = 1.5\n"), ConfigError);
    try {
        parse("[calibration]\nacp.hit_per_beat_cycles = -1\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()) == "calibration.acp.hit_per_beat_cycles: must be finite and >= 0");
    }
}
