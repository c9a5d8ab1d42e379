// iocoh: bandwidth sweeps, coherence advice, pipeline comparison, calibration.
//
// Exit status: 0 ok, 1 usage error, 2 bad input data.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "iocoh/advisor.hpp"
#include "iocoh/calibration.hpp"
#include "iocoh/config.hpp"
#include "iocoh/csv_io.hpp"
#include "iocoh/pipeline.hpp"
#include "iocoh/units.hpp"

using namespace iocoh;

namespace {

enum class Format { Default, Csv, Table };

struct Globals {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    Format format = Format::Default;
};

// Output goes to --output if given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw DataError(path, 0, "cannot open for writing");
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

Settings load(const Globals& g) {
    Settings s = g.config_file.empty() ? Settings{} : load_settings_file(g.config_file);
    if (g.seed) s.platform.seed = *g.seed;
    return s;
}

bool csv(const Globals& g, Format fallback) { return (g.format == Format::Default ? fallback : g.format) == Format::Csv; }

std::string gbps(double bps) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", bps / 1e9);
    return buf;
}

std::string us(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", s * 1e6);
    return buf;
}

void run_sweep(const Globals& g, const std::string& direction, const std::string& sizes_text,
               const std::string& output) {
    const auto s = load(g);
    const auto dir = parse_direction(direction);
    const auto sizes = parse_size_list(sizes_text);
    const auto cases = standard_cases(dir);
    const auto points = sweep(sizes, dir, cases, s.platform, s.calibration);
    Sink sink(output);
    auto& out = sink.out();
    if (csv(g, Format::Csv)) {
        write_sweep_csv(out, points);
        return;
    }
    char line[128];
    std::snprintf(line, sizeof line, "%-5s %-8s %8s %10s %12s\n", "path", "pre", "size", "GB/s", "elapsed_us");
    out << line;
    for (const auto& p : points) {
        const auto pre = p.sweep_case.pre_state ? std::string(to_string(*p.sweep_case.pre_state)) : std::string("-");
        std::snprintf(line, sizeof line, "%-5s %-8s %8s %10s %12s\n", sweep_path_label(p.sweep_case.path).c_str(),
                      pre.c_str(), format_size(p.size_bytes).c_str(), gbps(p.bandwidth_Bps).c_str(),
                      us(p.elapsed_s).c_str());
        out << line;
    }
}

void run_advise(const Globals& g, const std::string& profile_file, const std::string& mode) {
    const auto s = load(g);
    const auto profile = read_profile_file(profile_file);
    const auto rec = recommend(profile);
    if (mode == "tree") {
        if (csv(g, Format::Table)) {
            std::cout << "path,node_id,question,answer\n";
            for (const auto& step : rec.rationale) {
                std::cout << to_string(rec.path) << ',' << step.node_id << ',' << step.question << ',' << step.answer
                          << '\n';
            }
        } else {
            std::cout << display_name(rec.path) << '\n' << format_rationale(rec.rationale);
        }
        return;
    }
    const auto ranked = rank_all(profile, s.platform, s.calibration, s.sw);
    if (csv(g, Format::Table)) {
        std::cout << "rank,path,pre_state,bandwidth_Bps,hw_transfer_s,maintenance_s,barrier_s,cpu_access_penalty_s,"
                     "total_s\n";
        std::cout.precision(17);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& r = ranked[i];
            std::cout << i + 1 << ',' << to_string(r.path) << ',' << to_string(r.pre_state) << ',' << r.bandwidth_Bps
                      << ',' << r.cost.hw_transfer_s << ',' << r.cost.maintenance_s << ',' << r.cost.barrier_s << ','
                      << r.cost.cpu_access_penalty_s << ',' << r.cost.total_s << '\n';
        }
        return;
    }
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-8s %8s %12s %10s %10s %10s %10s\n", "rank", "path", "GB/s", "total_us",
                  "xfer_us", "maint_us", "barr_us", "cpu_us");
    std::cout << line;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& r = ranked[i];
        std::snprintf(line, sizeof line, "%-4zu %-8s %8s %12s %10s %10s %10s %10s\n", i + 1,
                      std::string(display_name(r.path)).c_str(), gbps(r.bandwidth_Bps).c_str(),
                      us(r.cost.total_s).c_str(), us(r.cost.hw_transfer_s).c_str(), us(r.cost.maintenance_s).c_str(),
                      us(r.cost.barrier_s).c_str(), us(r.cost.cpu_access_penalty_s).c_str());
        std::cout << line;
    }
    std::cout << "tree picks " << display_name(rec.path) << '\n';
}

void run_pipeline_cmd(const Globals& g, const std::string& scenario_file, bool stages, const std::string& output) {
    const auto s = load(g);
    const auto pipelines = read_scenarios_file(scenario_file);
    std::vector<Comparison> cmps;
    for (const auto& p : pipelines) cmps.push_back(compare_assignments(p, s.platform, s.calibration, s.sw));
    Sink sink(output);
    if (csv(g, Format::Table)) {
        write_comparison_csv(sink.out(), cmps, stages);
    } else {
        write_comparison_table(sink.out(), cmps, stages);
    }
}

void run_calibrate(const Globals& g, const std::string& anchor_file, const std::string& output) {
    auto s = load(g);
    const auto anchors = read_anchors_file(anchor_file);
    const auto result = calibrate(anchors, s.platform, CalibrationParams::nominal(s.platform));
    s.calibration = result.params;
    s.calibration.provenance = "fitted to " + anchor_file + " (" + std::to_string(anchors.size()) + " anchors)";
    Sink sink(output);
    auto& out = sink.out();
    if (csv(g, Format::Table)) {
        out << "path,direction,pre_state,size_bytes,bandwidth_Bps,model_bandwidth_Bps,relative_error\n";
        out.precision(17);
        for (const auto& r : result.residuals) {
            const auto& a = r.anchor;
            out << sweep_path_label(a.sweep_case.path) << ',' << to_string(a.direction) << ','
                << (a.sweep_case.pre_state ? std::string(to_string(*a.sweep_case.pre_state)) : std::string("-"))
                << ',' << a.size_bytes << ',' << a.bandwidth_Bps << ',' << r.model_bandwidth_Bps << ','
                << r.relative_error << '\n';
        }
        return;
    }
    // A loadable config file: the fitted section under a summary comment.
    char line[160];
    out << "# fitted:";
    for (const auto& f : result.fitted) out << ' ' << f;
    std::snprintf(line, sizeof line, "\n# max |relative error| %.4f over %zu anchors\n", result.max_abs_relative_error,
                  anchors.size());
    out << line;
    std::ostringstream all;
    write_settings(all, s);
    const auto text = all.str();
    out << text.substr(text.find("[calibration]"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"I/O cache coherence performance model and advisor"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Globals g;
    std::string format = "default";
    app.add_option("--config", g.config_file, "platform/sw_cost/calibration settings file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "cache replacement seed (default 0)");
    app.add_option("--output-format", format, "csv or table")->check(CLI::IsMember({"csv", "table"}));

    std::string direction = "tx", sizes = "4K..32M", output;
    auto* sw = app.add_subcommand("sweep", "bandwidth versus size for the five standard buffer preparations");
    sw->add_option("--direction", direction, "tx or rx")->check(CLI::IsMember({"tx", "rx"}));
    sw->add_option("--sizes", sizes, "sizes: 4K,64K or power-of-two range 4K..32M");
    sw->add_option("--output", output, "write here instead of stdout");

    std::string profile, mode = "tree";
    auto* adv = app.add_subcommand("advise", "recommend an interface path for one data flow");
    adv->add_option("--profile", profile, "workload profile file")->required();
    adv->add_option("--mode", mode, "tree (decision tree) or rank (modeled cost of every path)")
        ->check(CLI::IsMember({"tree", "rank"}));

    std::string scenario;
    bool stages = false;
    auto* pl = app.add_subcommand("pipeline", "compare pure and advised path assignments on scenarios");
    pl->add_option("--scenario", scenario, "scenario file")->required();
    pl->add_flag("--stages", stages, "include per-stage rows");
    pl->add_option("--output", output, "write here instead of stdout");

    std::string anchors;
    auto* cal = app.add_subcommand("calibrate", "fit timing coefficients to an anchor file");
    cal->add_option("--anchors", anchors, "anchor CSV file")->required();
    cal->add_option("--output", output, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;  // help is not an error
    }
    g.format = format == "csv" ? Format::Csv : format == "table" ? Format::Table : Format::Default;

    try {
        if (sw->parsed()) {
            try {
                const auto list = parse_size_list(sizes);
                if (!std::is_sorted(list.begin(), list.end()) || list.front() == 0) {
                    throw std::invalid_argument("sizes must be positive and ascending");
                }
            } catch (const std::invalid_argument& e) {
                std::cerr << "--sizes: " << e.what() << '\n';
                return 1;
            }
            run_sweep(g, direction, sizes, output);
        } else if (adv->parsed()) {
            run_advise(g, profile, mode);
        } else if (pl->parsed()) {
            run_pipeline_cmd(g, scenario, stages, output);
        } else if (cal->parsed()) {
            run_calibrate(g, anchors, output);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
