#pragma once

// Per-VD bandwidth-utilization and capacity demands of a virtual array in
// normal and degraded (one failed disk) mode, plus width selection and
// clustered-RAID5 geometry.
//
// Utilizations are dimensionless: Lambda [acc/s] * x [ms] / 1000.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hda/disk_model.hpp"
#include "hda/error.hpp"
#include "hda/workload.hpp"

namespace hda {

enum class RaidLevel { raid0, raid1, raid5, raid6, raid7 };

/// Tolerated disk failures of a parity-coded level (RAID1 is handled separately).
inline int failure_tolerance(RaidLevel level) {
    switch (level) {
        case RaidLevel::raid0: return 0;
        case RaidLevel::raid1: return 1;
        case RaidLevel::raid5: return 1;
        case RaidLevel::raid6: return 2;
        case RaidLevel::raid7: return 3;
    }
    return 0;
}

inline RaidLevel raid_level_from_int(int level) {
    switch (level) {
        case 0: return RaidLevel::raid0;
        case 1: return RaidLevel::raid1;
        case 5: return RaidLevel::raid5;
        case 6: return RaidLevel::raid6;
        case 7: return RaidLevel::raid7;
        default: throw invalid_input("unsupported RAID level " + std::to_string(level));
    }
}

// Small-write update methods for RAID5/6/7.
//  A: controller reads old data and check blocks, writes them back (SR + SW each).
//  B: XOR at the disks, check blocks rewritten after one rotation (RMW).
//  C: XOR at the disks, differences computed by the controller; same disk cost as B.
//  D: read-then-write heads, a RMW costs a single write.
enum class UpdateMethod { A, B, C, D };

inline UpdateMethod parse_update_method(std::string_view s) {
    if (s == "A" || s == "a") return UpdateMethod::A;
    if (s == "B" || s == "b") return UpdateMethod::B;
    if (s == "C" || s == "c") return UpdateMethod::C;
    if (s == "D" || s == "d") return UpdateMethod::D;
    throw invalid_input("unknown update method '" + std::string(s) + "' (valid: A, B, C, D)");
}

inline char to_char(UpdateMethod m) { return "ABCD"[static_cast<int>(m)]; }

struct ArrayGeometry {
    int width = 2;              // W, number of VDs
    double parity_group = 2.0;  // G <= W; fractional values are allowed for clustered layouts
    int k_dft = 1;

    double alpha() const {
        return width > 1 ? (parity_group - 1.0) / (width - 1.0) : 1.0;
    }
    bool clustered() const { return parity_group < static_cast<double>(width); }
};

struct NormalLoad {
    double rho_total = 0.0;   // array-wide utilization rho'
    double rho_per_vd = 0.0;  // rho' / W
};

/// Normal-mode load. For RAID1 `width` must be 2; for RAID0 it is the stripe width.
inline NormalLoad normal_load(RaidLevel level, double arrival_rate, double f_r,
                              const ServiceTimes& st, int width,
                              UpdateMethod method = UpdateMethod::B) {
    require(arrival_rate >= 0.0, "arrival rate must be >= 0");
    require(f_r >= 0.0 && f_r <= 1.0, "read fraction must be in [0,1]");
    require(width >= 1, "width must be >= 1");
    const double f_w = 1.0 - f_r;
    double per_access_ms = 0.0;
    switch (level) {
        case RaidLevel::raid0:
            per_access_ms = f_r * st.x_sr_ms + f_w * st.x_sw_ms;
            break;
        case RaidLevel::raid1:
            require(width == 2, "RAID1 width must be 2");
            per_access_ms = f_r * st.x_sr_ms + 2.0 * f_w * st.x_sw_ms;
            break;
        case RaidLevel::raid5:
        case RaidLevel::raid6:
        case RaidLevel::raid7: {
            const double copies = failure_tolerance(level) + 1.0;
            double update_ms = 0.0;
            switch (method) {
                case UpdateMethod::A: update_ms = st.x_sr_ms + st.x_sw_ms; break;
                case UpdateMethod::B:
                case UpdateMethod::C: update_ms = st.x_rmw_ms; break;
                case UpdateMethod::D: update_ms = st.x_sw_ms; break;
            }
            per_access_ms = f_r * st.x_sr_ms + copies * f_w * update_ms;
            break;
        }
    }
    NormalLoad out;
    out.rho_total = arrival_rate * per_access_ms / 1000.0;
    out.rho_per_vd = out.rho_total / width;
    return out;
}

/// Per-VD utilization with one failed disk. Every VD of the array is charged
/// this load because the failing disk is not known in advance.
///   RAID1:  Lambda (f_r x_SR + f_w x_SW) on the surviving disk.
///   RAID5 (clustered, G <= W), lambda = Lambda / W:
///     read  = lambda f_r (1 + alpha) x_SR
///     write = lambda f_w / (W-1) [2(W-2) x_RMW + 2 x_SW + (G-2) x_SR]
inline double degraded_load(RaidLevel level, double arrival_rate, double f_r,
                            const ServiceTimes& st, const ArrayGeometry& geom) {
    require(arrival_rate >= 0.0, "arrival rate must be >= 0");
    require(f_r >= 0.0 && f_r <= 1.0, "read fraction must be in [0,1]");
    require(geom.width >= 2, "degraded mode needs width >= 2");
    const double f_w = 1.0 - f_r;
    if (level == RaidLevel::raid1) {
        return arrival_rate * (f_r * st.x_sr_ms + f_w * st.x_sw_ms) / 1000.0;
    }
    require(level == RaidLevel::raid5, "degraded-mode load is modeled for RAID1 and RAID5 only");
    const double w = geom.width;
    const double g = geom.parity_group;
    require(g >= 2.0, "parity group must be >= 2");
    require(g <= w, "parity group must not exceed width");
    const double lambda = arrival_rate / w;
    const double alpha = (g - 1.0) / (w - 1.0);
    const double read = lambda * f_r * (1.0 + alpha) * st.x_sr_ms;
    const double write = lambda * f_w / (w - 1.0) *
                         (2.0 * (w - 2.0) * st.x_rmw_ms + 2.0 * st.x_sw_ms + (g - 2.0) * st.x_sr_ms);
    return (read + write) / 1000.0;
}

/// Space consumed including redundancy, GB.
inline double effective_size(RaidLevel level, double size_gb, const ArrayGeometry& geom) {
    require(size_gb >= 0.0, "size must be >= 0");
    if (level == RaidLevel::raid1) return 2.0 * size_gb;
    const int k = failure_tolerance(level);
    require(geom.width > k, "width must exceed the number of check disks");
    if (geom.clustered()) {
        require(geom.parity_group > 1.0, "parity group must be > 1");
        return size_gb * (1.0 + 1.0 / geom.parity_group);
    }
    return size_gb * geom.width / (geom.width - k);
}

struct WidthBreakdown {
    int bandwidth = 1;
    int capacity = 1;
    int width = 1;
};

/// W = min(max(ceil(rho'/rho_max), ceil(V/v_max) + k), N).
inline WidthBreakdown select_width_detail(double rho_total, double size_gb, double rho_max,
                                          double v_max_gb, int n_disks, int k) {
    require(rho_max > 0.0 && rho_max <= 1.0, "rho_max must be in (0,1]");
    require(v_max_gb > 0.0, "v_max must be > 0");
    require(n_disks >= 1, "N must be >= 1");
    WidthBreakdown w;
    w.bandwidth = static_cast<int>(std::ceil(rho_total / rho_max));
    w.capacity = static_cast<int>(std::ceil(size_gb / v_max_gb)) + k;
    w.width = std::min(std::max(w.bandwidth, w.capacity), n_disks);
    return w;
}

inline int select_width(double rho_total, double size_gb, double rho_max, double v_max_gb,
                        int n_disks, int k) {
    return select_width_detail(rho_total, size_gb, rho_max, v_max_gb, n_disks, k).width;
}

/// Parity group for declustering ratio alpha over W disks, clamped to [2, W].
inline double parity_group_for(double alpha, int width) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0,1]");
    const double g = 1.0 + alpha * (width - 1.0);
    return std::clamp(g, 2.0, static_cast<double>(width));
}

// ---------------------------------------------------------------------------
// Capacity/bandwidth tradeoff of clustered RAID5.

struct DeclusteringBase {
    double data_gb = 0.8;            // nonredundant data of the reference array
    double normal_bandwidth = 7.61;  // acc/s in normal mode
    int width = 12;
};

/// Reference array used for the declustering table of a bandwidth-bound read-only workload.
inline DeclusteringBase reference_declustering_base() { return DeclusteringBase{}; }

struct DeclusteringRow {
    double alpha = 1.0;
    double parity_group = 12.0;  // fractional G
    int parity_group_rounded = 12;
    double capacity_gb = 0.0;
    double bandwidth = 0.0;      // degraded-mode acc/s
    double gamma_c = 0.0;        // capacity / bandwidth
};

/// Read-only degraded bandwidth grows by (1 + alpha); capacity is V (1 + 1/G).
inline DeclusteringRow declustering_row(const DeclusteringBase& base, double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0,1]");
    require(base.width >= 2 && base.data_gb > 0.0 && base.normal_bandwidth > 0.0,
            "invalid declustering base");
    DeclusteringRow row;
    row.alpha = alpha;
    row.parity_group = 1.0 + alpha * (base.width - 1.0);
    row.parity_group_rounded = static_cast<int>(std::lround(row.parity_group));
    row.bandwidth = base.normal_bandwidth * (1.0 + alpha);
    row.capacity_gb = base.data_gb * (1.0 + 1.0 / row.parity_group);
    row.gamma_c = row.capacity_gb / row.bandwidth;
    return row;
}

/// Candidate whose gamma is closest to gamma_d; ties keep the earlier candidate.
template <class GammaOf>
double nearest_cbr_alpha(double gamma_d, std::span<const double> candidates, GammaOf&& gamma_of) {
    require(!candidates.empty(), "alpha candidate set must be non-empty");
    double best = candidates.front();
    double best_gap = std::numeric_limits<double>::infinity();
    for (double a : candidates) {
        const double gap = std::abs(gamma_of(a) - gamma_d);
        if (gap < best_gap) {
            best_gap = gap;
            best = a;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Full load profile of one request.

enum class LoadMode { normal, degraded };

inline LoadMode parse_load_mode(std::string_view s) {
    if (s == "normal") return LoadMode::normal;
    if (s == "degraded") return LoadMode::degraded;
    throw invalid_input("unknown mode '" + std::string(s) + "' (valid: normal, degraded)");
}

inline std::string_view to_string(LoadMode m) { return m == LoadMode::normal ? "normal" : "degraded"; }

enum class ClusteringKind { off, fixed_alpha, auto_cbr };

struct ClusteringOptions {
    ClusteringKind kind = ClusteringKind::off;
    double alpha = 1.0;                      // fixed_alpha
    std::vector<double> candidates{0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};  // auto_cbr
};

enum class WidthRule { computed, full };  // full: every RAID5 array spans all N disks

struct LoadOptions {
    double rho_max = 0.05;
    double v_max_gb = 9.17 / 50.0;
    int n_disks = 12;
    UpdateMethod method = UpdateMethod::B;
    ClusteringOptions clustering{};
    WidthRule width_rule = WidthRule::computed;
    double disk_gamma = 0.0;  // disk capacity/bandwidth ratio, used by auto_cbr
};

struct LoadProfile {
    ArrayGeometry geometry{};
    double rho_total_normal = 0.0;
    double rho_per_vd_normal = 0.0;
    double rho_per_vd_degraded = 0.0;
    double effective_size_gb = 0.0;
    double capacity_per_vd_gb = 0.0;
    std::vector<double> period_scaling{1.0};

    double rho_per_vd(LoadMode m) const {
        return m == LoadMode::normal ? rho_per_vd_normal : rho_per_vd_degraded;
    }
};

/// Workload capacity/bandwidth ratio of a RAID5 array at declustering ratio alpha:
/// effective size over the degraded load expressed in single-read accesses per second.
inline double clustered_gamma(const VaRequest& req, const ServiceTimes& st, int width, double alpha) {
    ArrayGeometry g{width, parity_group_for(alpha, width), 1};
    const double cap = effective_size(RaidLevel::raid5, req.size_gb, g);
    const double rho = degraded_load(RaidLevel::raid5, req.arrival_rate, req.read_fraction, st, g) * width;
    const double bw = rho * max_bandwidth(st);
    return bw > 0.0 ? cap / bw : std::numeric_limits<double>::infinity();
}

inline LoadProfile build_profile(const VaRequest& req, const ServiceTimes& st, const LoadOptions& opt) {
    const RaidLevel level = raid_level_from_int(req.raid_level);
    LoadProfile p;
    p.period_scaling.clear();
    for (double r : req.period_rates) p.period_scaling.push_back(req.arrival_rate > 0.0 ? r / req.arrival_rate : 1.0);
    if (p.period_scaling.empty()) p.period_scaling.push_back(1.0);

    if (level == RaidLevel::raid1) {
        require(opt.n_disks >= 2, "RAID1 needs at least 2 disks");
        p.geometry = ArrayGeometry{2, 2.0, 1};
        const auto nl = normal_load(level, req.arrival_rate, req.read_fraction, st, 2, opt.method);
        p.rho_total_normal = nl.rho_total;
        p.rho_per_vd_normal = nl.rho_per_vd;
        p.rho_per_vd_degraded = degraded_load(level, req.arrival_rate, req.read_fraction, st, p.geometry);
    } else {
        const int k = failure_tolerance(level);
        // Width is chosen from the unclustered normal-mode load at the VA's peak.
        const auto probe = normal_load(level, req.arrival_rate, req.read_fraction, st, 1, opt.method);
        int w = opt.width_rule == WidthRule::full
                    ? opt.n_disks
                    : select_width(probe.rho_total, req.size_gb, opt.rho_max, opt.v_max_gb, opt.n_disks, k);
        require(w > k, "array width must exceed check-disk count (too few disks)");
        double g = w;
        switch (opt.clustering.kind) {
            case ClusteringKind::off: break;
            case ClusteringKind::fixed_alpha: g = parity_group_for(opt.clustering.alpha, w); break;
            case ClusteringKind::auto_cbr: {
                const double a = nearest_cbr_alpha(opt.disk_gamma, opt.clustering.candidates,
                                                   [&](double x) { return clustered_gamma(req, st, w, x); });
                g = parity_group_for(a, w);
                break;
            }
        }
        p.geometry = ArrayGeometry{w, g, k};
        const auto nl = normal_load(level, req.arrival_rate, req.read_fraction, st, w, opt.method);
        p.rho_total_normal = nl.rho_total;
        p.rho_per_vd_normal = nl.rho_per_vd;
        p.rho_per_vd_degraded = w >= 2 ? degraded_load(level, req.arrival_rate, req.read_fraction, st, p.geometry)
                                       : nl.rho_per_vd;
    }
    p.effective_size_gb = effective_size(level, req.size_gb, p.geometry);
    p.capacity_per_vd_gb = p.effective_size_gb / p.geometry.width;
    return p;
}

}  // namespace hda
