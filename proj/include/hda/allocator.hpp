#pragma once

// Placement of a virtual array's VDs on distinct disks of the array.
//
// Each disk n tracks a bandwidth utilization U^x_n(p) for every load period p
// and a capacity utilization U^c_n. A VD fits on a disk when, after adding it,
// U^x_n(p) < 1 - reserved for every period and U^c_n < 1.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hda/error.hpp"
#include "hda/random.hpp"

namespace hda {

enum class PolicyKind { round_robin, random, first_fit, best_fit, worst_fit, min_f1, min_f2 };

inline constexpr PolicyKind kAllPolicies[] = {
    PolicyKind::min_f1,   PolicyKind::min_f2,      PolicyKind::worst_fit, PolicyKind::best_fit,
    PolicyKind::round_robin, PolicyKind::first_fit, PolicyKind::random,
};

inline std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::round_robin: return "RoundRobin";
        case PolicyKind::random: return "Random";
        case PolicyKind::first_fit: return "FirstFit";
        case PolicyKind::best_fit: return "BestFit";
        case PolicyKind::worst_fit: return "WorstFit";
        case PolicyKind::min_f1: return "MinF1";
        case PolicyKind::min_f2: return "MinF2";
    }
    return "?";
}

inline std::string valid_policy_names() {
    std::string s;
    for (auto k : kAllPolicies) {
        if (!s.empty()) s += ", ";
        s += to_string(k);
    }
    return s;
}

inline PolicyKind parse_policy_kind(std::string_view name) {
    std::string n;
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (n == "roundrobin" || n == "rr") return PolicyKind::round_robin;
    if (n == "random") return PolicyKind::random;
    if (n == "firstfit") return PolicyKind::first_fit;
    if (n == "bestfit") return PolicyKind::best_fit;
    if (n == "worstfit") return PolicyKind::worst_fit;
    if (n == "minf1") return PolicyKind::min_f1;
    if (n == "minf2") return PolicyKind::min_f2;
    throw invalid_input("unknown policy '" + std::string(name) + "' (valid: " + valid_policy_names() + ")");
}

// How Best-Fit ranks feasible disks. The default takes the most loaded disk by
// bandwidth; the alternative ranks by max(U^x, U^c).
enum class BestFitRule { bandwidth, combined };

struct Policy {
    PolicyKind kind = PolicyKind::min_f1;
    double beta = 1.0;  // capacity emphasis, MinF1/MinF2
    BestFitRule best_fit_rule = BestFitRule::bandwidth;

    void validate() const { require(beta >= 0.0, "beta must be >= 0"); }
    std::string name() const { return std::string(to_string(kind)); }
};

/// Demand of one VA: `width` identical VDs.
struct VaDemand {
    std::uint64_t va_index = 0;
    int raid_level = 5;
    int width = 1;
    double bw_per_vd = 0.0;      // utilization on a reference disk at the VA's peak
    double cap_per_vd_gb = 0.0;
    std::vector<double> period_scaling{1.0};
};

enum class FailureReason { bandwidth, capacity, insufficient_distinct_disks };

inline std::string_view to_string(FailureReason r) {
    switch (r) {
        case FailureReason::bandwidth: return "bandwidth";
        case FailureReason::capacity: return "capacity";
        case FailureReason::insufficient_distinct_disks: return "insufficient_distinct_disks";
    }
    return "?";
}

struct AllocationFailure {
    FailureReason reason = FailureReason::bandwidth;
};

struct Placement {
    std::vector<int> disks;  // in placement order
};

using PlaceResult = std::variant<Placement, AllocationFailure>;

/// One placed VA, sufficient to replay the bookkeeping.
struct PlacedVa {
    VaDemand demand;
    std::vector<int> disks;
};

/// Row of the exported placement log.
struct PlacementLogRow {
    std::uint64_t va_index;
    int raid_level;
    int disk;
    double bw_demand;
    double cap_demand_gb;
};

class ArrayState {
public:
    /// `capacity_gb[n]` is disk n's capacity; `bw_scale[n]` converts a
    /// reference-disk utilization into disk n's utilization (1 for identical disks).
    ArrayState(std::vector<double> capacity_gb, std::vector<double> bw_scale, int n_periods = 1,
               double reserved_bw = 0.0)
        : capacity_gb_(std::move(capacity_gb)), bw_scale_(std::move(bw_scale)), n_periods_(n_periods),
          reserved_bw_(reserved_bw) {
        require(!capacity_gb_.empty(), "array needs at least one disk");
        require(bw_scale_.size() == capacity_gb_.size(), "bw_scale size must equal disk count");
        require(n_periods_ >= 1, "at least one period");
        require(reserved_bw_ >= 0.0 && reserved_bw_ < 1.0, "reserved bandwidth must be in [0,1)");
        for (double c : capacity_gb_) require(c >= 0.0, "disk capacity must be >= 0");
        for (double s : bw_scale_) require(s > 0.0, "bw_scale must be > 0");
        u_bw_.assign(capacity_gb_.size() * static_cast<std::size_t>(n_periods_), 0.0);
        u_cap_.assign(capacity_gb_.size(), 0.0);
        rr_cursor_ = n_disks() - 1;
    }

    static ArrayState uniform(int n_disks, double capacity_gb, int n_periods = 1, double reserved_bw = 0.0) {
        return ArrayState(std::vector<double>(n_disks, capacity_gb), std::vector<double>(n_disks, 1.0), n_periods,
                          reserved_bw);
    }

    int n_disks() const { return static_cast<int>(capacity_gb_.size()); }
    int n_periods() const { return n_periods_; }
    double bandwidth_budget() const { return 1.0 - reserved_bw_; }

    double u_bw(int disk, int period = 0) const { return u_bw_[idx(disk, period)]; }
    double u_cap(int disk) const { return u_cap_[disk]; }
    /// Highest bandwidth utilization of a disk over all periods.
    double u_bw_peak(int disk) const {
        double m = 0.0;
        for (int p = 0; p < n_periods_; ++p) m = std::max(m, u_bw(disk, p));
        return m;
    }
    std::vector<double> u_bw_peaks() const {
        std::vector<double> v(n_disks());
        for (int n = 0; n < n_disks(); ++n) v[n] = u_bw_peak(n);
        return v;
    }
    std::span<const double> u_cap_all() const { return u_cap_; }

    int rr_cursor() const { return rr_cursor_; }
    void set_rr_cursor(int c) {
        require(c >= 0 && c < n_disks(), "rr cursor out of range");
        rr_cursor_ = c;
    }

    const std::vector<PlacedVa>& placements() const { return placements_; }

    /// Direct utilization setter for tests and what-if analysis; does not log a placement.
    void set_utilization(int disk, double u_bw_all_periods, double u_cap) {
        for (int p = 0; p < n_periods_; ++p) u_bw_[idx(disk, p)] = u_bw_all_periods;
        u_cap_[disk] = u_cap;
    }

    double bw_on(int disk, const VaDemand& d, int period) const {
        return d.bw_per_vd * bw_scale_[disk] * scale_for(d, period);
    }
    double cap_on(int disk, const VaDemand& d) const {
        if (capacity_gb_[disk] <= 0.0) return std::numeric_limits<double>::infinity();
        return d.cap_per_vd_gb / capacity_gb_[disk];
    }

    bool bandwidth_fits(int disk, const VaDemand& d) const {
        for (int p = 0; p < n_periods_; ++p)
            if (!(u_bw(disk, p) + bw_on(disk, d, p) < bandwidth_budget())) return false;
        return true;
    }
    bool capacity_fits(int disk, const VaDemand& d) const { return u_cap(disk) + cap_on(disk, d) < 1.0; }
    bool fits(int disk, const VaDemand& d) const { return bandwidth_fits(disk, d) && capacity_fits(disk, d); }

    void commit(const VaDemand& d, const std::vector<int>& disks) {
        for (int n : disks) {
            for (int p = 0; p < n_periods_; ++p) u_bw_[idx(n, p)] += bw_on(n, d, p);
            u_cap_[n] += cap_on(n, d);
        }
        placements_.push_back(PlacedVa{d, disks});
    }

    std::vector<PlacementLogRow> placement_log() const {
        std::vector<PlacementLogRow> rows;
        for (const auto& pv : placements_)
            for (int n : pv.disks)
                rows.push_back({pv.demand.va_index, pv.demand.raid_level, n, pv.demand.bw_per_vd,
                                pv.demand.cap_per_vd_gb});
        return rows;
    }

    /// Empty array with this array's geometry.
    ArrayState empty_like() const { return ArrayState(capacity_gb_, bw_scale_, n_periods_, reserved_bw_); }

    /// Rebuild the utilizations from the placement log of `source`.
    static ArrayState replay(const ArrayState& source) {
        ArrayState s = source.empty_like();
        for (const auto& pv : source.placements()) s.commit(pv.demand, pv.disks);
        return s;
    }

    std::uint64_t digest() const {
        Fnv1a h;
        for (double v : u_bw_) h.add(v);
        for (double v : u_cap_) h.add(v);
        h.add(rr_cursor_);
        h.add(placements_.size());
        return h.value();
    }

    bool same_utilization(const ArrayState& o) const { return u_bw_ == o.u_bw_ && u_cap_ == o.u_cap_; }

private:
    std::size_t idx(int disk, int period) const {
        return static_cast<std::size_t>(disk) * static_cast<std::size_t>(n_periods_) + static_cast<std::size_t>(period);
    }
    static double scale_for(const VaDemand& d, int period) {
        return period < static_cast<int>(d.period_scaling.size()) ? d.period_scaling[period] : 1.0;
    }

    std::vector<double> capacity_gb_;
    std::vector<double> bw_scale_;
    int n_periods_;
    double reserved_bw_;
    std::vector<double> u_bw_;
    std::vector<double> u_cap_;
    int rr_cursor_ = 0;
    std::vector<PlacedVa> placements_;
};

// ---------------------------------------------------------------------------
// Objectives. Bandwidth terms use each disk's peak utilization over periods.

inline double population_variance(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size());
}

/// F1 = max_n max(U^x_n, beta * U^c_n).
inline double objective_f1(std::span<const double> u_bw, std::span<const double> u_cap, double beta) {
    double f = 0.0;
    for (std::size_t n = 0; n < u_bw.size(); ++n) f = std::max({f, u_bw[n], beta * u_cap[n]});
    return f;
}

/// F2 = Var(U^x) + beta * Var(U^c).
inline double objective_f2(std::span<const double> u_bw, std::span<const double> u_cap, double beta) {
    return population_variance(u_bw) + beta * population_variance(u_cap);
}

inline double objective_f1(const ArrayState& s, double beta) {
    const auto bw = s.u_bw_peaks();
    return objective_f1(bw, s.u_cap_all(), beta);
}

inline double objective_f2(const ArrayState& s, double beta) {
    const auto bw = s.u_bw_peaks();
    return objective_f2(bw, s.u_cap_all(), beta);
}

// ---------------------------------------------------------------------------

namespace detail {

inline FailureReason classify_shortfall(const ArrayState& s, const VaDemand& d, std::span<const int> candidates) {
    int bw_blocked = 0;
    int cap_blocked = 0;
    for (int n : candidates) {
        if (!s.bandwidth_fits(n, d)) ++bw_blocked;
        else if (!s.capacity_fits(n, d)) ++cap_blocked;
    }
    return cap_blocked > bw_blocked ? FailureReason::capacity : FailureReason::bandwidth;
}

inline FailureReason first_violation(const ArrayState& s, const VaDemand& d, int disk) {
    return s.bandwidth_fits(disk, d) ? FailureReason::capacity : FailureReason::bandwidth;
}

inline std::vector<int> all_disks(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Greedy VD-at-a-time minimization of F1 or F2 on a scratch copy of the utilizations.
inline PlaceResult place_min_objective(const ArrayState& s, const VaDemand& d, const Policy& pol) {
    const int n = s.n_disks();
    const int periods = s.n_periods();
    std::vector<double> bw(static_cast<std::size_t>(n) * periods);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < periods; ++p) bw[static_cast<std::size_t>(i) * periods + p] = s.u_bw(i, p);
    std::vector<double> cap(s.u_cap_all().begin(), s.u_cap_all().end());
    std::vector<double> peak(n);
    auto peak_of = [&](int i) {
        double m = 0.0;
        for (int p = 0; p < periods; ++p) m = std::max(m, bw[static_cast<std::size_t>(i) * periods + p]);
        return m;
    };
    for (int i = 0; i < n; ++i) peak[i] = peak_of(i);

    const double budget = s.bandwidth_budget();
    std::vector<char> used(n, 0);
    Placement out;
    for (int vd = 0; vd < d.width; ++vd) {
        int best = -1;
        double best_val = std::numeric_limits<double>::infinity();
        std::vector<int> blocked;
        for (int m = 0; m < n; ++m) {
            if (used[m]) continue;
            bool ok = true;
            double new_peak = 0.0;
            for (int p = 0; p < periods; ++p) {
                const double v = bw[static_cast<std::size_t>(m) * periods + p] + s.bw_on(m, d, p);
                if (!(v < budget)) ok = false;
                new_peak = std::max(new_peak, v);
            }
            const double new_cap = cap[m] + s.cap_on(m, d);
            if (!(new_cap < 1.0)) ok = false;
            if (!ok) {
                blocked.push_back(m);
                continue;
            }
            const double old_peak = peak[m];
            const double old_cap = cap[m];
            peak[m] = new_peak;
            cap[m] = new_cap;
            double val;
            bool better;
            if (pol.kind == PolicyKind::min_f1) {
                val = objective_f1(peak, cap, pol.beta);
                better = val < best_val;
            } else {
                val = objective_f2(peak, cap, pol.beta);
                // Variances of permuted vectors may differ in the last bits.
                better = val < best_val - 1e-12 * std::max(1.0, std::abs(best_val));
            }
            peak[m] = old_peak;
            cap[m] = old_cap;
            if (best < 0 || better) {
                best = m;
                best_val = val;
            }
        }
        if (best < 0) return AllocationFailure{classify_shortfall(s, d, blocked)};
        used[best] = 1;
        for (int p = 0; p < periods; ++p) bw[static_cast<std::size_t>(best) * periods + p] += s.bw_on(best, d, p);
        peak[best] = peak_of(best);
        cap[best] += s.cap_on(best, d);
        out.disks.push_back(best);
    }
    return out;
}

}  // namespace detail

/// Choose disks for every VD of `d` without modifying `s`.
/// `rng` is consulted only by the Random policy.
inline PlaceResult select_disks(const ArrayState& s, const VaDemand& d, const Policy& pol, Rng* rng = nullptr) {
    pol.validate();
    require(d.width >= 1, "VA width must be >= 1");
    const int n = s.n_disks();
    if (d.width > n) return AllocationFailure{FailureReason::insufficient_distinct_disks};

    switch (pol.kind) {
        case PolicyKind::round_robin: {
            Placement out;
            for (int j = 0; j < d.width; ++j) {
                const int disk = (s.rr_cursor() + 1 + j) % n;
                if (!s.fits(disk, d)) return AllocationFailure{detail::first_violation(s, d, disk)};
                out.disks.push_back(disk);
            }
            return out;
        }
        case PolicyKind::random: {
            if (rng == nullptr) throw invalid_input("Random policy needs a random source");
            auto pool = detail::all_disks(n);
            Placement out;
            for (int j = 0; j < d.width; ++j) {
                const auto pick = j + static_cast<int>(rng->below(static_cast<std::uint64_t>(n - j)));
                std::swap(pool[j], pool[pick]);
                out.disks.push_back(pool[j]);
            }
            for (int disk : out.disks)
                if (!s.fits(disk, d)) return AllocationFailure{detail::first_violation(s, d, disk)};
            return out;
        }
        case PolicyKind::first_fit:
        case PolicyKind::best_fit:
        case PolicyKind::worst_fit: {
            std::vector<int> feasible;
            std::vector<int> blocked;
            for (int i = 0; i < n; ++i) (s.fits(i, d) ? feasible : blocked).push_back(i);
            if (static_cast<int>(feasible.size()) < d.width)
                return AllocationFailure{detail::classify_shortfall(s, d, blocked)};
            if (pol.kind != PolicyKind::first_fit) {
                std::vector<double> key(n);
                for (int i : feasible) {
                    key[i] = s.u_bw_peak(i);
                    if (pol.kind == PolicyKind::best_fit && pol.best_fit_rule == BestFitRule::combined)
                        key[i] = std::max(key[i], s.u_cap(i));
                }
                const bool descending = pol.kind == PolicyKind::best_fit;
                std::stable_sort(feasible.begin(), feasible.end(), [&](int a, int b) {
                    return descending ? key[a] > key[b] : key[a] < key[b];
                });
            }
            feasible.resize(d.width);
            return Placement{std::move(feasible)};
        }
        case PolicyKind::min_f1:
        case PolicyKind::min_f2:
            return detail::place_min_objective(s, d, pol);
    }
    return AllocationFailure{FailureReason::bandwidth};
}

/// All-or-nothing placement: on success every VD is committed and the
/// Round-Robin cursor moves to the last disk used; on failure `s` is untouched.
inline PlaceResult try_place(ArrayState& s, const VaDemand& d, const Policy& pol, Rng* rng = nullptr) {
    auto r = select_disks(s, d, pol, rng);
    if (auto* p = std::get_if<Placement>(&r)) {
        s.commit(d, p->disks);
        if (pol.kind == PolicyKind::round_robin) s.set_rr_cursor(p->disks.back());
    }
    return r;
}

}  // namespace hda
