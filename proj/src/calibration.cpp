#include "iocoh/calibration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace iocoh {

namespace {

// Columns of the linear stage.
enum Coef : int { kHpStartup, kHpcStartup, kHpcSnoop, kHpcPenalty, kAcpHit, kAcpMiss, kNumCoefs };

constexpr std::array<const char*, kNumCoefs> kCoefNames = {
    "hp.startup_cycles",        "hpc.startup_cycles",  "hpc.snoop_per_beat_cycles",
    "hpc.cached_tx_per_byte_penalty_s", "acp.hit_per_beat_cycles", "acp.miss_per_beat_cycles",
};

// What to add to pin a coefficient down.
constexpr std::array<const char*, kNumCoefs> kAnchorHint = {
    "HP (any direction)",
    "HPC tx flushed at two or more sizes",
    "HPC tx flushed at two or more sizes",
    "HPC tx written",
    "ACP written/read",
    "ACP flushed",
};

double& coef_ref(CalibrationParams& p, int c) {
    switch (c) {
        case kHpStartup: return p.hp.startup_cycles;
        case kHpcStartup: return p.hpc.startup_cycles;
        case kHpcSnoop: return p.hpc.snoop_per_beat_cycles;
        case kHpcPenalty: return p.hpc.cached_tx_per_byte_penalty_s;
        case kAcpHit: return p.acp.hit_per_beat_cycles;
        default: return p.acp.miss_per_beat_cycles;
    }
}

struct Row {
    double fixed_s = 0.0;                      // coefficient-independent elapsed part
    std::array<double, kNumCoefs> weight{};    // d(elapsed)/d(coef)
    double measured_s = 0.0;
};

// Returns false for HPC RX, which the second stage handles.
bool linear_row(const TransferTerms& t, const PlatformConfig& config, Row& row) {
    const double cyc = config.cycle_s();
    const auto beats = static_cast<double>(t.beats);
    row.fixed_s = beats * cyc;
    switch (t.path) {
        case InterfacePath::HP_NC:
        case InterfacePath::HP_C:
            row.weight[kHpStartup] = cyc;
            return true;
        case InterfacePath::HPC:
            if (t.direction == Direction::PlToCpu) return false;
            row.weight[kHpcStartup] = cyc;
            row.weight[kHpcSnoop] = beats * cyc;
            row.weight[kHpcPenalty] = static_cast<double>(t.dirty_resident_bytes);
            return true;
        case InterfacePath::ACP:
            row.weight[kAcpHit] = static_cast<double>(t.hit_beats) * cyc;
            row.weight[kAcpMiss] = static_cast<double>(t.miss_beats) * cyc;
            return true;
    }
    return false;
}

int matrix_rank(const Eigen::MatrixXd& m) {
    if (m.cols() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
}

}  // namespace

double model_bandwidth(const Anchor& a, const PlatformConfig& config, const CalibrationParams& params) {
    const auto terms = sweep_point_terms(a.size_bytes, a.direction, a.sweep_case, config);
    return static_cast<double>(a.size_bytes) / elapsed_seconds(terms, params, config);
}

CalibrationResult calibrate(std::span<const Anchor> anchors, const PlatformConfig& config,
                            const CalibrationParams& base) {
    if (anchors.empty()) throw CalibrationError("calibration needs at least one anchor");
    require_valid(config);

    std::vector<Row> rows;
    std::vector<std::pair<double, double>> rx_rows;  // (hp terms without startup, measured)
    std::vector<double> rx_beats;
    for (const auto& a : anchors) {
        if (!(a.bandwidth_Bps > 0.0) || a.size_bytes == 0) {
            throw CalibrationError("anchor " + sweep_path_label(a.sweep_case.path) + " " +
                                   std::string(to_string(a.direction)) + " size " + std::to_string(a.size_bytes) +
                                   " has a non-positive size or bandwidth");
        }
        const auto terms = sweep_point_terms(a.size_bytes, a.direction, a.sweep_case, config);
        Row row;
        row.measured_s = static_cast<double>(a.size_bytes) / a.bandwidth_Bps;
        if (linear_row(terms, config, row)) {
            rows.push_back(row);
        } else {
            rx_beats.push_back(static_cast<double>(terms.beats));
            rx_rows.emplace_back(0.0, row.measured_s);
        }
    }

    // Stage 1: linear coefficients. Residual per row is
    //   (fixed + w.theta) / measured - 1, i.e. a row of (w / measured) against (1 - fixed / measured).
    std::vector<int> active;
    for (int c = 0; c < kNumCoefs; ++c) {
        const bool used = std::any_of(rows.begin(), rows.end(), [c](const Row& r) { return r.weight[c] != 0.0; });
        if (used) active.push_back(c);
    }

    CalibrationResult result;
    result.params = base;
    if (!active.empty()) {
        const auto n = static_cast<Eigen::Index>(rows.size());
        auto build = [&](const std::vector<int>& cols, Eigen::MatrixXd& a, Eigen::VectorXd& b,
                         Eigen::VectorXd& scale) {
            a.resize(n, static_cast<Eigen::Index>(cols.size()));
            b.resize(n);
            scale.resize(static_cast<Eigen::Index>(cols.size()));
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto& r = rows[static_cast<std::size_t>(i)];
                b(i) = 1.0 - r.fixed_s / r.measured_s;
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    a(i, static_cast<Eigen::Index>(j)) = r.weight[static_cast<std::size_t>(cols[j])] / r.measured_s;
                }
            }
            // Column equilibration: coefficients span ~1e-10 s/byte to ~10 cycles.
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                const double norm = a.col(j).norm();
                scale(j) = norm > 0.0 ? norm : 1.0;
                a.col(j) /= scale(j);
            }
        };

        Eigen::MatrixXd a;
        Eigen::VectorXd b, scale;
        build(active, a, b, scale);
        if (matrix_rank(a) < static_cast<int>(active.size())) {
            const int full = matrix_rank(a);
            std::string missing;
            for (std::size_t j = 0; j < active.size(); ++j) {
                std::vector<int> without = active;
                without.erase(without.begin() + static_cast<std::ptrdiff_t>(j));
                Eigen::MatrixXd a2;
                Eigen::VectorXd b2, s2;
                build(without, a2, b2, s2);
                if (matrix_rank(a2) == full) {
                    if (!missing.empty()) missing += "; ";
                    missing += std::string(kCoefNames[static_cast<std::size_t>(active[j])]) + " needs " +
                               kAnchorHint[static_cast<std::size_t>(active[j])];
                }
            }
            throw CalibrationError("underdetermined calibration: " + missing);
        }

        // Pin negative coefficients to zero one at a time.
        std::vector<int> free = active;
        Eigen::VectorXd theta;
        for (;;) {
            build(free, a, b, scale);
            theta = a.colPivHouseholderQr().solve(b);
            theta = theta.cwiseQuotient(scale);
            Eigen::Index worst = -1;
            for (Eigen::Index j = 0; j < theta.size(); ++j) {
                if (theta(j) < 0.0 && (worst < 0 || theta(j) < theta(worst))) worst = j;
            }
            if (worst < 0) break;
            coef_ref(result.params, free[static_cast<std::size_t>(worst)]) = 0.0;
            free.erase(free.begin() + worst);
            if (free.empty()) break;
        }
        for (std::size_t j = 0; j < free.size(); ++j) {
            coef_ref(result.params, free[j]) = theta(static_cast<Eigen::Index>(j));
        }
        for (int c : active) result.fitted.emplace_back(kCoefNames[static_cast<std::size_t>(c)]);
    }

    // Stage 2: RX derate. elapsed = hp_elapsed * k with k = 1 / derate; the
    // relative residual hp_elapsed * k / measured - 1 is linear in k.
    if (!rx_rows.empty()) {
        const double cyc = config.cycle_s();
        double sx = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < rx_rows.size(); ++i) {
            const double x = (result.params.hp.startup_cycles + rx_beats[i]) * cyc / rx_rows[i].second;
            sx += x;
            sxx += x * x;
        }
        const double k = std::max(1.0, sx / sxx);
        result.params.hpc.rx_derate = 1.0 / k;
        result.fitted.emplace_back("hpc.rx_derate");
    }

    result.params.provenance = "fitted to " + std::to_string(anchors.size()) + " anchors";
    for (const auto& a : anchors) {
        const double m = model_bandwidth(a, config, result.params);
        const double rel = m / a.bandwidth_Bps - 1.0;
        result.residuals.push_back({a, m, rel});
        result.max_abs_relative_error = std::max(result.max_abs_relative_error, std::fabs(rel));
    }
    return result;
}

}  // namespace iocoh
