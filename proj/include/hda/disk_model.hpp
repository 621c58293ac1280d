#pragma once

// Physical disk constants and the service times derived from them.
// Units: times in milliseconds, rates in accesses/second, sizes in GB.

#include <string>
#include <string_view>

#include "hda/error.hpp"

namespace hda {

struct DiskSpec {
    double capacity_gb = 9.17;
    double seek_ms = 7.16;
    double rotation_ms = 8.33;
    double settle_ms = 0.14;
    double transfer_ms = 0.16;
    int count = 12;

    void validate() const {
        require(capacity_gb > 0.0, "disk capacity_gb must be > 0");
        require(seek_ms >= 0.0 && rotation_ms >= 0.0 && settle_ms >= 0.0,
                "disk seek/rotation/settle times must be >= 0");
        require(transfer_ms > 0.0, "disk transfer_ms must be > 0");
        require(count >= 1, "disk count must be >= 1");
    }

    bool operator==(const DiskSpec&) const = default;
};

struct ServiceTimes {
    double x_sr_ms = 0.0;   // single read
    double x_sw_ms = 0.0;   // single write
    double x_rmw_ms = 0.0;  // read-modify-write
};

/// IBM 18ES (DNES-309170W), twelve drives.
inline DiskSpec ibm_18es() { return DiskSpec{}; }

inline DiskSpec disk_preset(std::string_view name) {
    if (name == "ibm-18es") return ibm_18es();
    throw invalid_input("unknown disk preset '" + std::string(name) + "' (valid: ibm-18es)");
}

/// Mean latency is half a rotation; a write adds head settling, a RMW adds a full rotation.
inline ServiceTimes service_times(const DiskSpec& spec) {
    spec.validate();
    ServiceTimes st;
    st.x_sr_ms = spec.seek_ms + spec.rotation_ms / 2.0 + spec.transfer_ms;
    st.x_sw_ms = st.x_sr_ms + spec.settle_ms;
    st.x_rmw_ms = st.x_sr_ms + spec.rotation_ms;
    return st;
}

/// Small random reads per second one disk can sustain.
inline double max_bandwidth(const ServiceTimes& st) {
    require(st.x_sr_ms > 0.0, "x_sr_ms must be > 0");
    return 1000.0 / st.x_sr_ms;
}

inline double max_bandwidth(const DiskSpec& spec) { return max_bandwidth(service_times(spec)); }

/// Disk capacity/bandwidth ratio, GB per (access/s).
inline double capacity_bandwidth_ratio(const DiskSpec& spec) {
    return spec.capacity_gb / max_bandwidth(spec);
}

}  // namespace hda
