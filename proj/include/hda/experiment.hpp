#pragma once

// FCFS allocation experiments: draw requests, size and load them, place them
// until the first VA that does not fit. Every policy in an iteration consumes
// the same request sequence (common random numbers).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hda/allocator.hpp"
#include "hda/disk_model.hpp"
#include "hda/error.hpp"
#include "hda/load_model.hpp"
#include "hda/random.hpp"
#include "hda/workload.hpp"

namespace hda {

struct ExperimentConfig {
    WorkloadConfig workload{};
    DiskSpec disk = ibm_18es();
    // Optional per-disk specs (size must equal disk.count); `disk` stays the load reference.
    std::vector<DiskSpec> disk_overrides;
    std::vector<Policy> policies;
    LoadMode mode = LoadMode::degraded;
    int iterations = 100;
    double rho_max = 0.05;
    double v_max_gb = 9.17 / 50.0;
    UpdateMethod update_method = UpdateMethod::B;
    ClusteringOptions clustering{};
    WidthRule width_rule = WidthRule::computed;
    double reserved_bw = 0.0;
    // Exploration only: keep going past failed VAs until this many fail in a row.
    bool skip_failures = false;
    int max_consecutive_failures = 100;
    std::uint64_t max_requests = 1'000'000;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        workload.validate();
        disk.validate();
        require(iterations >= 1, "iterations must be >= 1");
        require(!policies.empty(), "at least one policy is required");
        for (const auto& p : policies) p.validate();
        require(rho_max > 0.0 && rho_max <= 1.0, "rho_max must be in (0,1]");
        require(v_max_gb > 0.0, "v_max must be > 0");
        require(mode == LoadMode::normal || disk.count >= 2, "degraded mode requires at least 2 disks");
        require(disk_overrides.empty() || static_cast<int>(disk_overrides.size()) == disk.count,
                "disk_overrides must list one spec per disk");
        for (const auto& d : disk_overrides) d.validate();
        require(reserved_bw >= 0.0 && reserved_bw < 1.0, "reserved_bw must be in [0,1)");
        if (clustering.kind == ClusteringKind::fixed_alpha)
            require(clustering.alpha > 0.0 && clustering.alpha <= 1.0, "alpha must be in (0,1]");
        if (clustering.kind == ClusteringKind::auto_cbr)
            require(!clustering.candidates.empty(), "auto-cbr needs alpha candidates");
    }

    LoadOptions load_options() const {
        LoadOptions o;
        o.rho_max = rho_max;
        o.v_max_gb = v_max_gb;
        o.n_disks = disk.count;
        o.method = update_method;
        o.clustering = clustering;
        o.width_rule = width_rule;
        o.disk_gamma = capacity_bandwidth_ratio(disk);
        return o;
    }

    ArrayState empty_array() const {
        std::vector<double> cap, scale;
        const double ref = service_times(disk).x_sr_ms;
        for (int n = 0; n < disk.count; ++n) {
            const DiskSpec& d = disk_overrides.empty() ? disk : disk_overrides[n];
            cap.push_back(d.capacity_gb);
            // Loads are computed with the reference disk; slower disks see them scaled by x_SR.
            scale.push_back(service_times(d).x_sr_ms / ref);
        }
        return ArrayState(std::move(cap), std::move(scale), static_cast<int>(workload.periods.size()), reserved_bw);
    }
};

/// Per-VD demand of a request under the configured mode.
inline VaDemand make_demand(const VaRequest& req, const LoadProfile& prof, LoadMode mode) {
    VaDemand d;
    d.va_index = req.index;
    d.raid_level = req.raid_level;
    d.width = prof.geometry.width;
    d.bw_per_vd = prof.rho_per_vd(mode);
    d.cap_per_vd_gb = prof.capacity_per_vd_gb;
    d.period_scaling = prof.period_scaling;
    return d;
}

struct RunResult {
    int r1 = 0;
    int r5 = 0;
    std::optional<FailureReason> failure{};  // reason the run stopped
    std::uint64_t requests_consumed = 0;
    std::uint64_t stream_hash = 0;         // digest of every request drawn, including the failed one
    double width_sum_r5 = 0.0;             // over allocated RAID5 VAs
    ArrayState state;

    int total() const { return r1 + r5; }
    double mean_width_r5() const { return r5 > 0 ? width_sum_r5 / r5 : 0.0; }
};

/// One FCFS allocation run. `seed` is the iteration seed; the request stream
/// and the Random policy draw from separate sub-streams of it.
inline RunResult run_once(const ExperimentConfig& cfg, const Policy& policy, std::uint64_t seed) {
    WorkloadConfig wc = cfg.workload;
    wc.seed = seed;
    RequestStream stream(wc);
    Rng placement_rng(substream_seed(seed, kPlacementStreamTag));
    const ServiceTimes st = service_times(cfg.disk);
    const LoadOptions lo = cfg.load_options();

    RunResult res{.state = cfg.empty_array()};
    Fnv1a h;
    int consecutive_failures = 0;
    while (res.requests_consumed < cfg.max_requests) {
        const VaRequest req = stream.next();
        ++res.requests_consumed;
        hash_request(h, req);
        const LoadProfile prof = build_profile(req, st, lo);
        const VaDemand dem = make_demand(req, prof, cfg.mode);
        const PlaceResult pr = try_place(res.state, dem, policy, &placement_rng);
        if (const auto* fail = std::get_if<AllocationFailure>(&pr)) {
            res.failure = fail->reason;
            if (!cfg.skip_failures || ++consecutive_failures >= cfg.max_consecutive_failures) break;
            continue;
        }
        consecutive_failures = 0;
        if (req.raid_level == 1) {
            ++res.r1;
        } else {
            ++res.r5;
            res.width_sum_r5 += prof.geometry.width;
        }
    }
    res.stream_hash = h.value();
    return res;
}

struct UtilStats {
    double mean = 0.0;
    double stddev = 0.0;  // population, across disks
};

inline UtilStats util_stats(std::span<const double> v) {
    UtilStats s;
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.stddev = std::sqrt(population_variance(v));
    return s;
}

/// Compact per-run record kept in reports.
struct RunSummary {
    int r1 = 0;
    int r5 = 0;
    std::optional<FailureReason> failure;
    std::uint64_t requests_consumed = 0;
    std::uint64_t stream_hash = 0;
    double mean_width_r5 = 0.0;
    UtilStats bw{};
    UtilStats cap{};

    int total() const { return r1 + r5; }
};

inline RunSummary summarize(const RunResult& r) {
    RunSummary s;
    s.r1 = r.r1;
    s.r5 = r.r5;
    s.failure = r.failure;
    s.requests_consumed = r.requests_consumed;
    s.stream_hash = r.stream_hash;
    s.mean_width_r5 = r.mean_width_r5();
    const auto bw = r.state.u_bw_peaks();
    s.bw = util_stats(bw);
    s.cap = util_stats(r.state.u_cap_all());
    return s;
}

struct PolicyReport {
    Policy policy;
    double mean_r1 = 0.0;
    double mean_r5 = 0.0;
    double mean_total = 0.0;
    int best_count = 0;
    UtilStats bw{};        // iteration means of the per-run disk mean / stddev
    UtilStats cap{};
    double mean_width_r5 = 0.0;
    int fail_bandwidth = 0;
    int fail_capacity = 0;
    int fail_disks = 0;
    std::vector<RunSummary> runs;  // one per iteration

    /// Resource that most often stopped the runs: 'c' capacity, 'b' bandwidth.
    char binding_tag() const { return fail_capacity > fail_bandwidth ? 'c' : 'b'; }
};

struct ExperimentReport {
    int iterations = 0;
    std::vector<PolicyReport> policies;
};

namespace detail {

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
}

}  // namespace detail

/// Runs every policy on `iterations` independent request streams.
/// best_count credits every policy that reaches the iteration's maximum total.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t np = cfg.policies.size();
    const std::size_t ni = static_cast<std::size_t>(cfg.iterations);
    std::vector<RunSummary> grid(np * ni);
    detail::parallel_for(np * ni, cfg.threads, [&](std::size_t k) {
        const std::size_t it = k / np;
        const std::size_t p = k % np;
        grid[k] = summarize(run_once(cfg, cfg.policies[p], iteration_seed(cfg.workload.seed, it)));
    });

    ExperimentReport rep;
    rep.iterations = cfg.iterations;
    rep.policies.resize(np);
    for (std::size_t p = 0; p < np; ++p) rep.policies[p].policy = cfg.policies[p];
    for (std::size_t it = 0; it < ni; ++it) {
        int best = -1;
        for (std::size_t p = 0; p < np; ++p) best = std::max(best, grid[it * np + p].total());
        for (std::size_t p = 0; p < np; ++p) {
            const RunSummary& r = grid[it * np + p];
            PolicyReport& pr = rep.policies[p];
            pr.runs.push_back(r);
            if (r.total() == best) ++pr.best_count;
            if (r.failure) {
                switch (*r.failure) {
                    case FailureReason::bandwidth: ++pr.fail_bandwidth; break;
                    case FailureReason::capacity: ++pr.fail_capacity; break;
                    case FailureReason::insufficient_distinct_disks: ++pr.fail_disks; break;
                }
            }
        }
    }
    for (auto& pr : rep.policies) {
        for (const auto& r : pr.runs) {
            pr.mean_r1 += r.r1;
            pr.mean_r5 += r.r5;
            pr.bw.mean += r.bw.mean;
            pr.bw.stddev += r.bw.stddev;
            pr.cap.mean += r.cap.mean;
            pr.cap.stddev += r.cap.stddev;
            pr.mean_width_r5 += r.mean_width_r5;
        }
        const double n = static_cast<double>(ni);
        pr.mean_r1 /= n;
        pr.mean_r5 /= n;
        pr.mean_total = pr.mean_r1 + pr.mean_r5;
        pr.bw.mean /= n;
        pr.bw.stddev /= n;
        pr.cap.mean /= n;
        pr.cap.stddev /= n;
        pr.mean_width_r5 /= n;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepDimension { beta, rho_max, v_max, alpha };

inline SweepDimension parse_sweep_dimension(std::string_view s) {
    if (s == "beta") return SweepDimension::beta;
    if (s == "rho_max" || s == "rho-max") return SweepDimension::rho_max;
    if (s == "v_max" || s == "v-max") return SweepDimension::v_max;
    if (s == "alpha") return SweepDimension::alpha;
    throw invalid_input("unknown sweep dimension '" + std::string(s) + "' (valid: beta, rho_max, v_max, alpha)");
}

inline std::string_view to_string(SweepDimension d) {
    switch (d) {
        case SweepDimension::beta: return "beta";
        case SweepDimension::rho_max: return "rho_max";
        case SweepDimension::v_max: return "v_max";
        case SweepDimension::alpha: return "alpha";
    }
    return "?";
}

/// Copy of `cfg` with one dimension set to `value`. v_max is in GB; alpha
/// switches clustering to a fixed declustering ratio.
inline ExperimentConfig with_dimension(ExperimentConfig cfg, SweepDimension dim, double value) {
    switch (dim) {
        case SweepDimension::beta:
            for (auto& p : cfg.policies) p.beta = value;
            break;
        case SweepDimension::rho_max: cfg.rho_max = value; break;
        case SweepDimension::v_max: cfg.v_max_gb = value; break;
        case SweepDimension::alpha:
            cfg.clustering.kind = ClusteringKind::fixed_alpha;
            cfg.clustering.alpha = value;
            break;
    }
    return cfg;
}

struct SweepRow {
    double value = 0.0;
    ExperimentReport report;
};

inline std::vector<SweepRow> sweep(const ExperimentConfig& cfg, SweepDimension dim, std::span<const double> values) {
    require(!values.empty(), "sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (double v : values) rows.push_back(SweepRow{v, run_experiment(with_dimension(cfg, dim, v))});
    return rows;
}

}  // namespace hda
