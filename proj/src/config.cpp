#include "iocoh/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include "iocoh/units.hpp"

namespace iocoh {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument("invalid number '" + std::string(s) + "'");
    }
    return v;
}

// "3.2GB/s" or "3.2e9": bytes per second, decimal suffixes as in parse_size.
double parse_rate(std::string_view s) {
    if (s.size() > 2 && s.substr(s.size() - 2) == "/s") s.remove_suffix(2);
    const auto first_alpha = s.find_first_of("kKmMgGbB");
    if (first_alpha == std::string_view::npos) return parse_real(s);
    return static_cast<double>(parse_size(s));
}

std::uint32_t narrow32(std::uint64_t v, std::string_view text) {
    if (v > 0xffffffffu) throw std::invalid_argument("value '" + std::string(text) + "' out of range");
    return static_cast<std::uint32_t>(v);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

struct Key {
    const char* section;
    const char* name;
    std::function<void(Settings&, std::string_view)> set;
    std::function<std::string(const Settings&)> get;
};

#define IOCOH_U64(sec, field, member, parser)                                                     \
    Key{sec, #field, [](Settings& s, std::string_view v) { s.member.field = parser(v); },        \
        [](const Settings& s) { return std::to_string(s.member.field); }}
#define IOCOH_U32(sec, field, member, parser)                                                           \
    Key{sec, #field, [](Settings& s, std::string_view v) { s.member.field = narrow32(parser(v), v); }, \
        [](const Settings& s) { return std::to_string(s.member.field); }}
#define IOCOH_REAL(sec, name, lvalue, parser)                                      \
    Key{sec, name, [](Settings& s, std::string_view v) { lvalue = parser(v); }, \
        [](const Settings& s) { return fmt(lvalue); }}

const std::vector<Key>& keys() {
    static const std::vector<Key> k = {
        IOCOH_U32("platform", bus_width_bits, platform, parse_size),
        IOCOH_U64("platform", bus_freq_hz, platform, parse_frequency),
        IOCOH_U64("platform", l2_size_bytes, platform, parse_size),
        IOCOH_U32("platform", l2_ways, platform, parse_size),
        IOCOH_U32("platform", l2_line_bytes, platform, parse_size),
        IOCOH_U32("platform", dram_latency_cycles, platform, parse_size),
        IOCOH_U32("platform", snoop_penalty_cycles, platform, parse_size),
        IOCOH_U32("platform", cache_miss_penalty_cycles, platform, parse_size),
        IOCOH_U32("platform", wc_chunk_bits, platform, parse_size),
        IOCOH_U64("platform", bypass_threshold_bytes, platform, parse_size),
        IOCOH_U64("platform", seed, platform, parse_size),

        IOCOH_REAL("sw_cost", "cacheable_read_Bps", s.sw.cacheable_read_Bps, parse_rate),
        IOCOH_REAL("sw_cost", "cacheable_write_Bps", s.sw.cacheable_write_Bps, parse_rate),
        IOCOH_REAL("sw_cost", "nc_read_penalty", s.sw.nc_read_penalty, parse_real),
        IOCOH_REAL("sw_cost", "nc_irregular_write_penalty_small", s.sw.nc_irregular_write_penalty_small, parse_real),
        IOCOH_REAL("sw_cost", "nc_irregular_write_penalty_large", s.sw.nc_irregular_write_penalty_large, parse_real),
        IOCOH_REAL("sw_cost", "maintenance_per_byte_s", s.sw.maintenance_per_byte_s, parse_duration),
        IOCOH_REAL("sw_cost", "barrier_s", s.sw.barrier_s, parse_duration),
        IOCOH_REAL("sw_cost", "barrier_contended_multiplier", s.sw.barrier_contended_multiplier, parse_real),

        IOCOH_REAL("calibration", "hp.startup_cycles", s.calibration.hp.startup_cycles, parse_real),
        IOCOH_REAL("calibration", "hpc.startup_cycles", s.calibration.hpc.startup_cycles, parse_real),
        IOCOH_REAL("calibration", "hpc.snoop_per_beat_cycles", s.calibration.hpc.snoop_per_beat_cycles, parse_real),
        IOCOH_REAL("calibration", "hpc.cached_tx_per_byte_penalty_s", s.calibration.hpc.cached_tx_per_byte_penalty_s,
                   parse_duration),
        IOCOH_REAL("calibration", "hpc.rx_derate", s.calibration.hpc.rx_derate, parse_real),
        IOCOH_REAL("calibration", "acp.hit_per_beat_cycles", s.calibration.acp.hit_per_beat_cycles, parse_real),
        IOCOH_REAL("calibration", "acp.miss_per_beat_cycles", s.calibration.acp.miss_per_beat_cycles, parse_real),
        Key{"calibration", "provenance",
            [](Settings& s, std::string_view v) { s.calibration.provenance = std::string(v); },
            [](const Settings& s) { return s.calibration.provenance; }},
    };
    return k;
}

#undef IOCOH_U64
#undef IOCOH_U32
#undef IOCOH_REAL

}  // namespace

Settings load_settings(std::istream& in, const std::string& name) {
    Settings s;
    std::string section;
    std::set<std::string> seen;
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw DataError(name, n, "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "platform" && section != "sw_cost" && section != "calibration") {
                throw DataError(name, n, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw DataError(name, n, "expected 'key = value'");
        if (section.empty()) throw DataError(name, n, "key outside of a section");
        const auto key = std::string(trim(line.substr(0, eq)));
        auto value = trim(line.substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string_view::npos) value = trim(value.substr(0, hash));
        if (value.empty()) throw DataError(name, n, "missing value for '" + key + "'");

        const Key* match = nullptr;
        for (const auto& k : keys()) {
            if (section == k.section && key == k.name) match = &k;
        }
        if (!match) throw DataError(name, n, "unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert(section + "." + key).second) throw DataError(name, n, "duplicate key '" + key + "'");
        try {
            match->set(s, value);
        } catch (const std::invalid_argument& e) {
            throw DataError(name, n, key + ": " + e.what());
        }
    }
    require_valid(s);
    return s;
}

Settings load_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path, 0, "cannot open file");
    return load_settings(in, path);
}

void write_settings(std::ostream& out, const Settings& settings) {
    std::string section;
    for (const auto& k : keys()) {
        if (section != k.section) {
            if (!section.empty()) out << '\n';
            section = k.section;
            out << '[' << section << "]\n";
        }
        out << k.name << " = " << k.get(settings) << '\n';
    }
}

void require_valid(const Settings& settings) {
    require_valid(settings.platform);
    auto report = [](const char* part, const std::vector<ConfigViolation>& v) {
        if (!v.empty()) throw ConfigError(std::string(part) + "." + v.front().field + ": " + v.front().rule);
    };
    report("sw_cost", validate_sw_params(settings.sw));
    report("calibration", validate_params(settings.calibration));
}

}  // namespace iocoh
