#pragma once

// Closed-form models: M/M/1 response times for dedicated versus shared disk
// partitions, a degraded-mode mirrored-layout example, and the reliability
// of the two partitionings.

#include <cmath>
#include <span>
#include <string>

#include "hda/disk_model.hpp"
#include "hda/error.hpp"
#include "hda/load_model.hpp"

namespace hda {

struct Mm1Input {
    double arrival_rate = 0.0;  // acc/s
    double service_time = 0.0;  // ms

    double utilization() const { return arrival_rate * service_time / 1000.0; }
};

/// R = x / (1 - rho), in the units of `service_time`.
inline double mm1_response_at(double rho, double service_time) {
    require(rho >= 0.0, "utilization must be >= 0");
    require(service_time >= 0.0, "service time must be >= 0");
    if (rho >= 1.0) throw saturation_error("M/M/1 saturated: rho = " + std::to_string(rho));
    return service_time / (1.0 - rho);
}

inline double mm1_response(const Mm1Input& in) {
    require(in.arrival_rate >= 0.0, "arrival rate must be >= 0");
    return mm1_response_at(in.utilization(), in.service_time);
}

/// Response times of two ways to host a RAID1 and a RAID5 array on N disks:
/// C1 dedicates n disks to RAID1 and N-n to RAID5; C2 spreads both over all N.
struct PartitionComparison {
    double rho_c1_r1 = 0.0;
    double rho_c1_r5 = 0.0;
    double rho_c2 = 0.0;
    double rho_c2_priority = 0.0;
    double r_c1_r1 = 0.0;
    double r_c1_r5 = 0.0;
    double r_c2 = 0.0;           // shared by both arrays
    double r_c2_priority = 0.0;  // RAID1 served at higher priority
};

inline PartitionComparison compare_configs(double lambda_r1, double lambda_r5, int n_total, int n_r1,
                                           double service_ms) {
    require(lambda_r1 >= 0.0 && lambda_r5 >= 0.0, "arrival rates must be >= 0");
    require(n_total >= 2 && n_r1 >= 1 && n_r1 < n_total, "need 1 <= n < N");
    require(service_ms > 0.0, "service time must be > 0");
    PartitionComparison c;
    c.rho_c1_r1 = lambda_r1 / n_r1 * service_ms / 1000.0;
    c.rho_c1_r5 = lambda_r5 / (n_total - n_r1) * service_ms / 1000.0;
    c.rho_c2 = (lambda_r1 + lambda_r5) / n_total * service_ms / 1000.0;
    c.rho_c2_priority = lambda_r1 / n_total * service_ms / 1000.0;
    c.r_c1_r1 = mm1_response_at(c.rho_c1_r1, service_ms);
    c.r_c1_r5 = mm1_response_at(c.rho_c1_r5, service_ms);
    c.r_c2 = mm1_response_at(c.rho_c2, service_ms);
    c.r_c2_priority = mm1_response_at(c.rho_c2_priority, service_ms);
    return c;
}

// Eight disks holding twelve mirrored VAs, three VDs per disk:
//
//   disk:  1   2   3   4   5   6   7   8
//          A1  A2  B1  B2  C1  C2  D1  D2
//          H2  E1  E2  F1  F2  G1  G2  H1
//          L1  L2  I1  I2  J1  J2  K1  K2
//
// All accesses are reads at rate 2*lambda per VA, so each VD carries
// rho_vd = lambda * x. Disk 3 fails: E1 doubles (disk 2 at 4 rho_vd),
// B2 and I2 double (disk 4 at 5 rho_vd).
struct DegradedResponseExample {
    double normal = 0.0;          // R on every disk before the failure
    double disk2 = 0.0;
    double disk4 = 0.0;
    double degraded_mean = 0.0;   // per-request mean: disk responses weighted by throughput
    double degraded_mean_per_disk = 0.0;  // same weighted sum divided by the 7 surviving disks
    // Per-VA means after the failure.
    double va_a = 0.0;  // (R + R2) / 2, also L
    double va_e = 0.0;  // R2
    double va_b = 0.0;  // R4, also I
    double va_f = 0.0;  // (R4 + R) / 2
};

/// Results are in multiples of the disk service time.
inline DegradedResponseExample degraded_response_example(double rho_vd) {
    require(rho_vd >= 0.0, "rho_vd must be >= 0");
    if (5.0 * rho_vd >= 1.0) throw saturation_error("degraded example saturates: 5 rho_vd >= 1");
    DegradedResponseExample e;
    e.normal = mm1_response_at(3.0 * rho_vd, 1.0);
    e.disk2 = mm1_response_at(4.0 * rho_vd, 1.0);
    e.disk4 = mm1_response_at(5.0 * rho_vd, 1.0);
    // Disk 2 carries 4/3 and disk 4 5/3 of the pre-failure throughput; total weight 8.
    const double weighted = e.normal + 4.0 / 3.0 * e.disk2 + 5.0 / 3.0 * e.disk4 + 4.0 * e.normal;
    e.degraded_mean = weighted / 8.0;
    e.degraded_mean_per_disk = weighted / 7.0;
    e.va_a = (e.normal + e.disk2) / 2.0;
    e.va_e = e.disk2;
    e.va_b = e.disk4;
    e.va_f = (e.disk4 + e.normal) / 2.0;
    return e;
}

// ---------------------------------------------------------------------------
// Reliability with independent disk reliability r.

/// p mirrored pairs: [1 - (1-r)^2]^p.
inline double reliability_raid1_pairs(double r, int pairs) {
    require(r >= 0.0 && r <= 1.0, "r must be in [0,1]");
    require(pairs >= 0, "pairs must be >= 0");
    const double q = 1.0 - r;
    return std::pow(1.0 - q * q, pairs);
}

/// RAID5 over w disks survives at most one failure: r^w + w (1-r) r^(w-1).
inline double reliability_raid5(double r, int w) {
    require(r >= 0.0 && r <= 1.0, "r must be in [0,1]");
    require(w >= 1, "width must be >= 1");
    return std::pow(r, w) + w * (1.0 - r) * std::pow(r, w - 1);
}

/// Dedicated partitions: one RAID1 pair plus a six-disk RAID5.
inline double reliability_c1(double r) { return reliability_raid1_pairs(r, 1) * reliability_raid5(r, 6); }

/// Shared disks: RAID1 over four pairs plus an eight-disk RAID5.
inline double reliability_c2(double r) { return reliability_raid1_pairs(r, 4) * reliability_raid5(r, 8); }

/// (1 - R) / eps^2 at r = 1 - eps; tends to the second-order coefficient.
template <class ReliabilityFn>
double unreliability_coefficient(ReliabilityFn&& fn, double eps) {
    require(eps > 0.0 && eps < 1.0, "eps must be in (0,1)");
    return (1.0 - fn(1.0 - eps)) / (eps * eps);
}

// ---------------------------------------------------------------------------

/// Declustering ratio whose clustered-RAID5 capacity/bandwidth ratio is
/// closest to the disk's.
inline double choose_alpha(const DiskSpec& spec, const DeclusteringBase& base, std::span<const double> candidates) {
    return nearest_cbr_alpha(capacity_bandwidth_ratio(spec), candidates,
                             [&](double a) { return declustering_row(base, a).gamma_c; });
}

}  // namespace hda
