#include "iocoh/units.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iocoh {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
}

// Splits "12.5MHz" into (12.5, "mhz").
std::pair<double, std::string> split_number(std::string_view what, std::string_view text) {
    const auto t = trim(text);
    std::size_t i = 0;
    while (i < t.size()) {
        const char c = t[i];
        const bool exp_sign = (c == '+' || c == '-') && i > 0 && (t[i - 1] == 'e' || t[i - 1] == 'E');
        const bool exp = (c == 'e' || c == 'E') && i + 1 < t.size() &&
                         (std::isdigit(static_cast<unsigned char>(t[i + 1])) || t[i + 1] == '-' || t[i + 1] == '+');
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || exp || exp_sign) {
            ++i;
        } else {
            break;
        }
    }
    if (i == 0) bad(what, text);
    double value = 0.0;
    const auto num = t.substr(0, i);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) bad(what, text);
    if (!std::isfinite(value) || value < 0.0) bad(what, text);
    return {value, lower(trim(t.substr(i)))};
}

std::uint64_t to_integer(std::string_view what, std::string_view text, double v) {
    const double r = std::round(v);
    if (std::fabs(r - v) > 1e-6 * std::max(1.0, v) || r > 1.8e19) bad(what, text);
    return static_cast<std::uint64_t>(r);
}

}  // namespace

std::uint64_t parse_size(std::string_view text) {
    const auto [v, suffix] = split_number("size", text);
    double mult = 0.0;
    if (suffix.empty() || suffix == "b") mult = 1;
    else if (suffix == "k" || suffix == "kib") mult = 1024.0;
    else if (suffix == "m" || suffix == "mib") mult = 1024.0 * 1024.0;
    else if (suffix == "g" || suffix == "gib") mult = 1024.0 * 1024.0 * 1024.0;
    else if (suffix == "kb") mult = 1e3;
    else if (suffix == "mb") mult = 1e6;
    else if (suffix == "gb") mult = 1e9;
    else bad("size", text);
    return to_integer("size", text, v * mult);
}

std::uint64_t parse_frequency(std::string_view text) {
    const auto [v, suffix] = split_number("frequency", text);
    double mult = 0.0;
    if (suffix.empty() || suffix == "hz") mult = 1;
    else if (suffix == "khz") mult = 1e3;
    else if (suffix == "mhz") mult = 1e6;
    else if (suffix == "ghz") mult = 1e9;
    else bad("frequency", text);
    return to_integer("frequency", text, v * mult);
}

double parse_duration(std::string_view text) {
    const auto [v, suffix] = split_number("duration", text);
    if (suffix.empty() || suffix == "s") return v;
    if (suffix == "ms") return v * 1e-3;
    if (suffix == "us") return v * 1e-6;
    if (suffix == "ns") return v * 1e-9;
    bad("duration", text);
}

std::vector<std::uint64_t> parse_size_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (item.empty()) bad("size list", text);
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(parse_size(item));
        } else {
            const auto lo = parse_size(item.substr(0, dots));
            const auto hi = parse_size(item.substr(dots + 2));
            if (lo == 0 || hi < lo || (lo & (lo - 1)) != 0) bad("size range", item);
            for (std::uint64_t s = lo; s <= hi; s *= 2) out.push_back(s);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_size(std::uint64_t bytes) {
    constexpr std::uint64_t kK = 1024, kM = kK * 1024, kG = kM * 1024;
    if (bytes >= kG && bytes % kG == 0) return std::to_string(bytes / kG) + "G";
    if (bytes >= kM && bytes % kM == 0) return std::to_string(bytes / kM) + "M";
    if (bytes >= kK && bytes % kK == 0) return std::to_string(bytes / kK) + "K";
    return std::to_string(bytes);
}

}  // namespace iocoh
