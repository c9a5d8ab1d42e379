#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "iocoh/pipeline.hpp"
#include "iocoh/units.hpp"

namespace iocoh {

namespace {

constexpr std::uint64_t kBufferAlign = 4096;

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line.substr(0, line.find('#')));
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

struct Frame {
    std::uint64_t count = 1;
    std::vector<Stage> body;
    std::size_t line = 0;
};

class Parser {
public:
    explicit Parser(std::string name) : name_(std::move(name)) {}

    void line(std::size_t n, const std::string& raw) {
        n_ = n;
        const auto t = tokens(raw);
        if (t.empty()) return;
        const auto& kw = t[0];
        if (kw == "scenario") {
            arity(t, 2);
            finish();
            current_.emplace();
            current_->name = t[1];
            frames_.assign(1, Frame{});
            buffer_index_.clear();
            next_addr_ = 0;
            return;
        }
        if (!current_) fail("'" + kw + "' before any 'scenario' line");
        if (kw == "background") {
            arity(t, 2);
            if (t[1] == "memory-intensive") current_->background_memory_intensive = true;
            else if (t[1] == "light") current_->background_memory_intensive = false;
            else fail("background must be 'memory-intensive' or 'light'");
        } else if (kw == "buffer") {
            arity(t, 3);
            if (buffer_index_.count(t[1])) fail("buffer '" + t[1] + "' already declared");
            Buffer b;
            b.name = t[1];
            b.size_bytes = size(t[2]);
            b.base_addr = next_addr_;
            next_addr_ += (b.size_bytes + kBufferAlign - 1) / kBufferAlign * kBufferAlign + kBufferAlign;
            buffer_index_[b.name] = current_->buffers.size();
            current_->buffers.push_back(std::move(b));
        } else if (kw == "cpu") {
            if (t.size() < 2) fail("cpu stage needs a name");
            CpuCompute c;
            c.name = t[1];
            for (std::size_t i = 2; i < t.size(); ++i) {
                const auto eq = t[i].find('=');
                if (eq == std::string::npos) fail("expected key=value, got '" + t[i] + "'");
                const auto key = t[i].substr(0, eq);
                const auto value = t[i].substr(eq + 1);
                if (key == "read") {
                    for (const auto& b : split_commas(value)) c.reads.push_back(buffer(b));
                } else if (key == "write") {
                    for (const auto& b : split_commas(value)) c.writes.push_back(buffer(b));
                } else if (key == "pattern") {
                    try {
                        c.pattern = parse_write_pattern(value);
                    } catch (const std::invalid_argument& e) {
                        fail(e.what());
                    }
                } else {
                    fail("unknown cpu option '" + key + "'");
                }
            }
            frames_.back().body.emplace_back(std::move(c));
        } else if (kw == "tx" || kw == "rx" || kw == "pl2pl") {
            arity(t, 2);
            Transfer x;
            x.buffer = buffer(t[1]);
            x.direction = parse_direction(kw);
            x.transfer_id = current_->transfer_labels.size();
            current_->transfer_labels.push_back(kw + " " + t[1]);
            frames_.back().body.emplace_back(x);
        } else if (kw == "accel") {
            arity(t, 3);
            AccelCompute a;
            a.name = t[1];
            if (t[2].rfind("time=", 0) != 0) fail("accel needs time=DURATION");
            try {
                a.time_s = parse_duration(t[2].substr(5));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            if (a.time_s < 0.0) fail("accelerator time must not be negative");
            frames_.back().body.emplace_back(std::move(a));
        } else if (kw == "repeat") {
            arity(t, 3);
            if (t[2] != "{") fail("expected 'repeat N {'");
            Frame f;
            f.line = n;
            try {
                f.count = parse_size(t[1]);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            if (f.count == 0) fail("repeat count must be at least 1");
            frames_.push_back(std::move(f));
        } else if (kw == "}") {
            arity(t, 1);
            if (frames_.size() < 2) fail("'}' without a matching repeat");
            auto f = std::move(frames_.back());
            frames_.pop_back();
            auto& parent = frames_.back().body;
            for (std::uint64_t i = 0; i < f.count; ++i) parent.insert(parent.end(), f.body.begin(), f.body.end());
        } else {
            fail("unknown directive '" + kw + "'");
        }
    }

    std::vector<Pipeline> done() {
        finish();
        return std::move(out_);
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw DataError(name_, n_, msg); }

    void arity(const std::vector<std::string>& t, std::size_t n) const {
        if (t.size() != n) fail("'" + t[0] + "' takes " + std::to_string(n - 1) + " argument(s)");
    }

    std::uint64_t size(const std::string& s) const {
        try {
            return parse_size(s);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    std::size_t buffer(const std::string& b) const {
        const auto it = buffer_index_.find(b);
        if (it == buffer_index_.end()) fail("unknown buffer '" + b + "'");
        return it->second;
    }

    void finish() {
        if (!current_) return;
        if (frames_.size() > 1) throw DataError(name_, frames_.back().line, "repeat block is never closed");
        current_->stages = std::move(frames_.back().body);
        if (current_->transfer_labels.empty()) fail("scenario '" + current_->name + "' has no transfer");
        out_.push_back(std::move(*current_));
        current_.reset();
    }

    std::string name_;
    std::size_t n_ = 0;
    std::optional<Pipeline> current_;
    std::vector<Frame> frames_;
    std::map<std::string, std::size_t> buffer_index_;
    std::uint64_t next_addr_ = 0;
    std::vector<Pipeline> out_;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

std::string paths_of(const Assignment& a) {
    std::string s;
    for (auto p : a) {
        if (!s.empty()) s += ';';
        s += to_string(p);
    }
    return s;
}

std::string ms(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", s * 1e3);
    return buf;
}

}  // namespace

std::vector<Pipeline> read_scenarios(std::istream& in, const std::string& name) {
    Parser parser(name);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        parser.line(++n, raw);
    }
    auto out = parser.done();
    if (out.empty()) throw DataError(name, n, "no scenario in file");
    return out;
}

std::vector<Pipeline> read_scenarios_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path, 0, "cannot open file");
    return read_scenarios(in, path);
}

void write_comparison_csv(std::ostream& out, const std::vector<Comparison>& comparisons, bool stages) {
    out << "scenario,assignment,stage,path,compute_s,hw_transfer_s,maintenance_s,barrier_s,cpu_access_penalty_s,"
           "total_s\n";
    for (const auto& c : comparisons) {
        for (const auto& r : c.reports) {
            if (!r) continue;
            if (stages) {
                for (const auto& s : r->stages) {
                    out << c.scenario << ',' << r->label << ',' << s.label << ','
                        << (s.path ? std::string(to_string(*s.path)) : std::string("-")) << ',' << fmt(s.compute_s)
                        << ',' << fmt(s.cost.hw_transfer_s) << ',' << fmt(s.cost.maintenance_s) << ','
                        << fmt(s.cost.barrier_s) << ',' << fmt(s.cost.cpu_access_penalty_s) << ',' << fmt(s.total_s)
                        << '\n';
                }
            }
            out << c.scenario << ',' << r->label << ",total," << paths_of(r->assignment) << ',' << fmt(r->compute_s)
                << ',' << fmt(r->cost.hw_transfer_s) << ',' << fmt(r->cost.maintenance_s) << ','
                << fmt(r->cost.barrier_s) << ',' << fmt(r->cost.cpu_access_penalty_s) << ',' << fmt(r->end_to_end_s)
                << '\n';
        }
    }
}

void write_comparison_table(std::ostream& out, const std::vector<Comparison>& comparisons, bool stages) {
    char line[256];
    for (std::size_t ci = 0; ci < comparisons.size(); ++ci) {
        const auto& c = comparisons[ci];
        if (ci > 0) out << '\n';
        out << "scenario " << c.scenario << "  (times in ms)\n";
        std::snprintf(line, sizeof line, "%-10s %12s %9s %10s %10s %10s %10s %10s\n", "assignment", "end_to_end",
                      "vs opt", "compute", "transfer", "maint", "barrier", "cpu_pen");
        out << line;
        const auto& opt = c.reports[kOptimizedIndex];
        for (const auto& r : c.reports) {
            if (!r) continue;
            const double rel = opt ? r->end_to_end_s / opt->end_to_end_s : 0.0;
            std::snprintf(line, sizeof line, "%-10s %12s %8.2fx %10s %10s %10s %10s %10s\n", r->label.c_str(),
                          ms(r->end_to_end_s).c_str(), rel, ms(r->compute_s).c_str(),
                          ms(r->cost.hw_transfer_s).c_str(), ms(r->cost.maintenance_s).c_str(),
                          ms(r->cost.barrier_s).c_str(), ms(r->cost.cpu_access_penalty_s).c_str());
            out << line;
        }
        for (std::size_t i = 0; i < c.reports.size(); ++i) {
            if (!c.reports[i]) out << assignment_label(i) << ": n/a (a transfer cannot use this path)\n";
        }
        if (opt) {
            out << "optimized:";
            for (std::size_t t = 0; t < opt->assignment.size(); ++t) {
                out << (t ? ", " : " ") << c.transfer_labels[t] << " -> " << display_name(opt->assignment[t]);
            }
            out << '\n';
        }
        if (!stages) continue;
        for (const auto& r : c.reports) {
            if (!r) continue;
            out << "  stages, " << r->label << ":\n";
            for (const auto& s : r->stages) {
                std::snprintf(line, sizeof line, "    %-24s %-8s %12s\n", s.label.c_str(),
                              s.path ? std::string(display_name(*s.path)).c_str() : "", ms(s.total_s).c_str());
                out << line;
            }
        }
    }
}

}  // namespace iocoh
