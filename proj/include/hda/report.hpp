#pragma once

// CSV and plain-text renderings of experiment, sweep and stream results.
// Every rendering starts with a "# manifest_sha=<hex>" line.
// Numbers go through fmt, which ignores the C++ locale.

#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "hda/config.hpp"

namespace hda {

/// Results of one experiment for one workload class.
struct WorkloadReport {
    std::string workload;  // class name, or "custom"
    ExperimentReport report;
};

struct SweepReport {
    SweepDimension dimension = SweepDimension::beta;
    std::string workload;
    std::vector<SweepRow> rows;
};

inline std::string manifest_line(std::string_view sha) { return fmt::format("# manifest_sha={}\n", sha); }

inline std::string experiment_csv(std::string_view sha, const std::vector<WorkloadReport>& reports) {
    std::string out = manifest_line(sha);
    out += "workload,policy,best,r1,r5,total,bw_mean,bw_stddev,cap_mean,cap_stddev,mean_width_r5,"
           "fail_bandwidth,fail_capacity,fail_disks,binding\n";
    for (const auto& w : reports)
        for (const auto& p : w.report.policies)
            out += fmt::format("{},{},{},{:.4f},{:.4f},{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{},{},{},{}\n",
                               w.workload, p.policy.name(), p.best_count, p.mean_r1, p.mean_r5, p.mean_total,
                               p.bw.mean, p.bw.stddev, p.cap.mean, p.cap.stddev, p.mean_width_r5, p.fail_bandwidth,
                               p.fail_capacity, p.fail_disks, p.binding_tag());
    return out;
}

/// One block per workload: Best, R1, R5, R1&R5 per policy, plus utilization.
inline std::string experiment_text(std::string_view sha, const std::vector<WorkloadReport>& reports) {
    std::string out = manifest_line(sha);
    for (const auto& w : reports) {
        out += fmt::format("\nworkload: {} ({} iterations)\n", w.workload, w.report.iterations);
        out += fmt::format("{:<11}{:>6}{:>8}{:>8}{:>9}{:>10}{:>9}{:>10}{:>9}{:>9}\n", "policy", "Best", "R1", "R5",
                           "R1&R5", "U^x mean", "U^x sd", "U^c mean", "U^c sd", "W(R5)");
        for (const auto& p : w.report.policies)
            out += fmt::format("{:<11}{:>6}{:>8.1f}{:>8.1f}{:>9.1f}{:>10.3f}{:>9.3f}{:>10.3f}{:>9.3f}{:>9.2f}\n",
                               p.policy.name(), p.best_count, p.mean_r1, p.mean_r5, p.mean_total, p.bw.mean,
                               p.bw.stddev, p.cap.mean, p.cap.stddev, p.mean_width_r5);
    }
    return out;
}

inline std::string sweep_csv(std::string_view sha, const std::vector<SweepReport>& sweeps) {
    std::string out = manifest_line(sha);
    out += "dimension,value,workload,policy,best,r1,r5,total,fail_bandwidth,fail_capacity,binding\n";
    for (const auto& s : sweeps)
        for (const auto& row : s.rows)
            for (const auto& p : row.report.policies)
                out += fmt::format("{},{},{},{},{},{:.4f},{:.4f},{:.4f},{},{},{}\n", to_string(s.dimension),
                                   row.value, s.workload, p.policy.name(), p.best_count, p.mean_r1, p.mean_r5,
                                   p.mean_total, p.fail_bandwidth, p.fail_capacity, p.binding_tag());
    return out;
}

namespace detail {

inline const PolicyReport* find_policy(const ExperimentReport& r, PolicyKind k) {
    for (const auto& p : r.policies)
        if (p.policy.kind == k) return &p;
    return nullptr;
}

/// Cell text for one (value, workload). A beta sweep with both MinF1 and MinF2
/// prints "F1/F2"; an alpha sweep tags each total with the binding resource.
inline std::string sweep_cell(SweepDimension dim, const PolicyReport& p, const ExperimentReport& r) {
    if (dim == SweepDimension::beta && p.policy.kind == PolicyKind::min_f1)
        if (const auto* f2 = find_policy(r, PolicyKind::min_f2))
            return fmt::format("{:.1f}/{:.1f}", p.mean_total, f2->mean_total);
    if (dim == SweepDimension::alpha) return fmt::format("{:.1f} ({})", p.mean_total, p.binding_tag());
    return fmt::format("{:.1f}", p.mean_total);
}

}  // namespace detail

/// Rows are sweep values; columns are workload x policy totals.
inline std::string sweep_text(std::string_view sha, const std::vector<SweepReport>& sweeps) {
    std::string out = manifest_line(sha);
    if (sweeps.empty()) return out;
    const SweepDimension dim = sweeps.front().dimension;
    out += fmt::format("\nsweep: {}\n", to_string(dim));

    auto shown = [&](const PolicyReport& p, const ExperimentReport& r) {
        return !(dim == SweepDimension::beta && p.policy.kind == PolicyKind::min_f2 &&
                 detail::find_policy(r, PolicyKind::min_f1));
    };

    std::string header = fmt::format("{:<10}", to_string(dim));
    const auto& first = sweeps.front().rows.front().report;
    for (const auto& s : sweeps)
        for (const auto& p : first.policies) {
            if (!shown(p, first)) continue;
            std::string name = p.policy.name();
            if (dim == SweepDimension::beta && p.policy.kind == PolicyKind::min_f1 &&
                detail::find_policy(first, PolicyKind::min_f2))
                name = "MinF1/MinF2";
            header += fmt::format("{:>24}", s.workload + ":" + name);
        }
    out += header + "\n";

    const std::size_t n_rows = sweeps.front().rows.size();
    for (std::size_t i = 0; i < n_rows; ++i) {
        std::string line = fmt::format("{:<10}", sweeps.front().rows[i].value);
        for (const auto& s : sweeps) {
            const auto& rep = s.rows[i].report;
            for (const auto& p : rep.policies)
                if (shown(p, rep)) line += fmt::format("{:>24}", detail::sweep_cell(dim, p, rep));
        }
        out += line + "\n";
    }
    return out;
}

inline std::string placement_log_csv(std::string_view sha, const std::vector<PlacementLogRow>& rows) {
    std::string out = manifest_line(sha);
    out += "va_index,raid_level,disk,bw_demand,cap_demand_gb\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{:.9f},{:.9f}\n", r.va_index, r.raid_level, r.disk, r.bw_demand,
                           r.cap_demand_gb);
    return out;
}

inline std::string stream_csv(std::string_view sha, const std::vector<VaRequest>& reqs) {
    std::string out = manifest_line(sha);
    out += "index,level,size_gb,lambda\n";
    for (const auto& r : reqs)
        out += fmt::format("{},{},{:.9f},{:.9f}\n", r.index, r.raid_level, r.size_gb, r.arrival_rate);
    return out;
}

}  // namespace hda
