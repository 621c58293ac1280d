#pragma once

// Synthetic FCFS stream of virtual-array allocation requests.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hda/error.hpp"
#include "hda/random.hpp"

namespace hda {

enum class WorkloadClass { bandwidth, balanced, capacity };

inline std::string_view to_string(WorkloadClass w) {
    switch (w) {
        case WorkloadClass::bandwidth: return "bandwidth";
        case WorkloadClass::balanced: return "balanced";
        case WorkloadClass::capacity: return "capacity";
    }
    return "?";
}

inline WorkloadClass parse_workload_class(std::string_view s) {
    if (s == "bandwidth" || s == "bandwidth-bound") return WorkloadClass::bandwidth;
    if (s == "balanced") return WorkloadClass::balanced;
    if (s == "capacity" || s == "capacity-bound") return WorkloadClass::capacity;
    throw invalid_input("unknown workload '" + std::string(s) +
                        "' (valid: bandwidth, balanced, capacity)");
}

/// RAID5 I/O intensity (acc/s per GB) of each workload class.
inline double kappa5_for(WorkloadClass w) {
    switch (w) {
        case WorkloadClass::bandwidth: return 8.5;
        case WorkloadClass::balanced: return 3.3;
        case WorkloadClass::capacity: return 2.1;
    }
    return 0.0;
}

struct WorkloadConfig {
    double f1 = 0.25;              // fraction of RAID1 requests
    double mean_size_r1_gb = 0.25;
    double mean_size_r5_gb = 0.75;
    double kappa5 = 8.5;           // RAID5 acc/s per GB
    double kappa_ratio = 10.0;     // kappa1 / kappa5
    double f_r = 1.0;              // read fraction
    std::vector<double> periods{1.0};
    double strip_kb = 256.0;
    std::uint64_t seed = 1;

    double kappa1() const { return kappa5 * kappa_ratio; }
    double granule_gb() const { return strip_kb / (1024.0 * 1024.0); }

    void validate() const {
        require(f1 >= 0.0 && f1 <= 1.0, "workload.f1 must be in [0,1]");
        require(f_r >= 0.0 && f_r <= 1.0, "workload.f_r must be in [0,1]");
        require(mean_size_r1_gb > 0.0 && mean_size_r5_gb > 0.0, "workload mean sizes must be > 0");
        require(kappa5 > 0.0, "workload.kappa5 must be > 0");
        require(kappa_ratio > 0.0, "workload.kappa_ratio must be > 0");
        require(strip_kb > 0.0, "workload.strip_kb must be > 0");
        require(!periods.empty(), "workload.periods must be non-empty");
        require(periods.front() == 1.0, "workload.periods[0] must be 1 (the peak period)");
        for (double m : periods) require(m > 0.0 && m <= 1.0, "period multipliers must be in (0,1]");
    }
};

struct VaRequest {
    std::uint64_t index = 0;
    int raid_level = 5;          // 1 or 5
    double size_gb = 0.0;        // nonredundant size V
    double arrival_rate = 0.0;   // peak-period Lambda, acc/s
    double read_fraction = 1.0;
    // Lambda scaled for each global period. VA i peaks in period (i mod P);
    // its multipliers are the configured list rotated accordingly.
    std::vector<double> period_rates;

    double write_fraction() const { return 1.0 - read_fraction; }
};

/// Round a size up to a positive multiple of the granule.
inline double round_up_to_granule(double size_gb, double granule_gb) {
    double units = std::ceil(size_gb / granule_gb);
    if (units < 1.0) units = 1.0;
    return units * granule_gb;
}

/// Period multipliers seen by VA `index`.
inline std::vector<double> period_multipliers(const std::vector<double>& periods, std::uint64_t index) {
    const std::size_t p = periods.size();
    const std::size_t phase = static_cast<std::size_t>(index % p);
    std::vector<double> out(p);
    for (std::size_t t = 0; t < p; ++t) out[t] = periods[(t + p - phase) % p];
    return out;
}

/// Unbounded, replayable request sequence; a pure function of (config, seed).
/// Each request draws exactly two uniforms: RAID level, then size.
class RequestStream {
public:
    explicit RequestStream(WorkloadConfig cfg)
        : cfg_(std::move(cfg)), rng_(substream_seed(cfg_.seed, kRequestStreamTag)) {
        cfg_.validate();
    }

    VaRequest next() {
        VaRequest r;
        r.index = next_index_++;
        const double u = rng_.uniform_open();
        r.raid_level = (u <= cfg_.f1) ? 1 : 5;
        const double mean = r.raid_level == 1 ? cfg_.mean_size_r1_gb : cfg_.mean_size_r5_gb;
        r.size_gb = round_up_to_granule(rng_.exponential(mean), cfg_.granule_gb());
        const double kappa = r.raid_level == 1 ? cfg_.kappa1() : cfg_.kappa5;
        r.arrival_rate = kappa * r.size_gb;
        r.read_fraction = cfg_.f_r;
        const auto mult = period_multipliers(cfg_.periods, r.index);
        r.period_rates.reserve(mult.size());
        for (double m : mult) r.period_rates.push_back(m * r.arrival_rate);
        return r;
    }

    const WorkloadConfig& config() const { return cfg_; }

private:
    WorkloadConfig cfg_;
    Rng rng_;
    std::uint64_t next_index_ = 1;
};

inline RequestStream make_stream(const WorkloadConfig& cfg) { return RequestStream(cfg); }

/// Order-sensitive digest of a request sequence.
inline void hash_request(Fnv1a& h, const VaRequest& r) {
    h.add(r.index);
    h.add(r.raid_level);
    h.add(r.size_gb);
    h.add(r.arrival_rate);
}

}  // namespace hda
