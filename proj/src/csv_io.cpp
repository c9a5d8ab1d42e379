#include "iocoh/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "iocoh/units.hpp"

namespace iocoh {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

namespace {

std::string pre_state_label(const SweepCase& c) {
    return c.pre_state ? std::string(to_string(*c.pre_state)) : std::string("-");
}

SweepCase parse_case(const std::string& path, const std::string& pre) {
    SweepCase c;
    c.path = path == "HP" || path == "hp" ? InterfacePath::HP_NC : parse_path(path);
    if (pre != "-" && !pre.empty()) c.pre_state = parse_pre_state(pre);
    return c;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) throw std::invalid_argument("invalid number '" + s + "'");
    return v;
}

// Yields (line number, content) for non-blank, non-comment lines.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        fn(n, line);
    }
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << kSweepHeader << '\n';
    const auto old_prec = out.precision(17);
    for (const auto& p : points) {
        out << sweep_path_label(p.sweep_case.path) << ',' << to_string(p.direction) << ',' << pre_state_label(p.sweep_case)
            << ',' << p.size_bytes << ',' << p.bandwidth_Bps << ',' << p.elapsed_s << '\n';
    }
    out.precision(old_prec);
}

std::vector<SweepPoint> read_sweep_csv(std::istream& in, const std::string& name) {
    std::vector<SweepPoint> out;
    bool header = true;
    for_each_data_line(in, [&](std::size_t n, const std::string& line) {
        if (header) {
            if (line != kSweepHeader) throw DataError(name, n, std::string("expected header '") + kSweepHeader + "'");
            header = false;
            return;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw DataError(name, n, "expected 6 fields, got " + std::to_string(f.size()));
        try {
            SweepPoint p;
            p.sweep_case = parse_case(f[0], f[2]);
            p.direction = parse_direction(f[1]);
            p.size_bytes = parse_size(f[3]);
            p.bandwidth_Bps = parse_double(f[4]);
            p.elapsed_s = parse_double(f[5]);
            out.push_back(p);
        } catch (const std::invalid_argument& e) {
            throw DataError(name, n, e.what());
        }
    });
    if (header) throw DataError(name, 0, "empty sweep file");
    return out;
}

std::vector<Anchor> read_anchors(std::istream& in, const std::string& name) {
    std::vector<Anchor> out;
    bool header = true;
    for_each_data_line(in, [&](std::size_t n, const std::string& line) {
        if (header) {
            if (line != kAnchorHeader) throw DataError(name, n, std::string("expected header '") + kAnchorHeader + "'");
            header = false;
            return;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw DataError(name, n, "expected 6 fields, got " + std::to_string(f.size()));
        try {
            Anchor a;
            a.sweep_case = parse_case(f[0], f[2]);
            a.direction = parse_direction(f[1]);
            a.size_bytes = parse_size(f[3]);
            a.bandwidth_Bps = parse_double(f[4]);
            a.source = f[5];
            if (a.size_bytes == 0) throw std::invalid_argument("size must be positive");
            if (!(a.bandwidth_Bps > 0.0)) throw std::invalid_argument("bandwidth must be positive");
            if (!path_legal(a.sweep_case.path, a.direction)) throw std::invalid_argument("path cannot carry direction");
            out.push_back(std::move(a));
        } catch (const std::invalid_argument& e) {
            throw DataError(name, n, e.what());
        }
    });
    if (header) throw DataError(name, 0, "empty anchor file");
    return out;
}

std::vector<Anchor> read_anchors_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path, 0, "cannot open file");
    return read_anchors(in, path);
}

void write_anchors(std::ostream& out, const std::vector<Anchor>& anchors) {
    out << kAnchorHeader << '\n';
    const auto old_prec = out.precision(6);
    for (const auto& a : anchors) {
        out << sweep_path_label(a.sweep_case.path) << ',' << to_string(a.direction) << ',' << pre_state_label(a.sweep_case)
            << ',' << a.size_bytes << ',' << a.bandwidth_Bps << ',' << a.source << '\n';
    }
    out.precision(old_prec);
}

}  // namespace iocoh
