#pragma once

// JSON configuration: built-in presets, file loading, and the run manifest.
//
//   {
//     "preset": "paper",
//     "disk":       { "preset": "ibm-18es", "count": 12, "capacity_gb": 9.17, ... },
//     "workload":   { "classes": ["bandwidth"], "f1": 0.25, "f_r": 1.0, "periods": [1.0], ... },
//     "experiment": { "policies": ["MinF1", ...], "beta": 1.0, "mode": "degraded",
//                     "iterations": 100, "rho_max": 0.05,
//                     "v_max_fraction": 0.02, "v_max_basis": "disk", "update_method": "B",
//                     "clustering": { "kind": "off", "alpha": 1.0, "candidates": [...] },
//                     "width_rule": "computed", "reserved_bw": 0.0, "threads": 0 }
//   }
//
// Unknown keys are rejected so that typos do not silently fall back to defaults.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hda/experiment.hpp"
#include "json.hpp"

namespace hda {

inline constexpr std::string_view kToolVersion = "1.0.0";

using json = nlohmann::json;

enum class VmaxBasis { disk, array };

/// An experiment plus the workload classes to run it over.
struct RunPlan {
    ExperimentConfig experiment;
    std::vector<WorkloadClass> classes{WorkloadClass::bandwidth};  // empty: use workload.kappa5 as given
    double v_max_fraction = 0.02;
    VmaxBasis v_max_basis = VmaxBasis::disk;
    bool v_max_explicit = false;  // experiment.v_max_gb set directly

    void resolve() {
        if (!v_max_explicit) {
            const double per_disk = experiment.disk.capacity_gb * v_max_fraction;
            experiment.v_max_gb = v_max_basis == VmaxBasis::disk ? per_disk : per_disk * experiment.disk.count;
        }
    }

    ExperimentConfig for_class(WorkloadClass c) const {
        ExperimentConfig e = experiment;
        e.workload.kappa5 = kappa5_for(c);
        return e;
    }
};

inline std::vector<Policy> all_policies(double beta = 1.0) {
    std::vector<Policy> v;
    for (auto k : kAllPolicies) v.push_back(Policy{k, beta});
    return v;
}

/// "paper": twelve IBM 18ES disks, RAID5:RAID1 = 3:1, reads only, degraded mode,
/// 100 iterations, all seven policies, bandwidth-bound workload.
/// "table4": the same over all three workload classes.
inline RunPlan preset(std::string_view name) {
    RunPlan p;
    p.experiment.policies = all_policies();
    if (name == "paper") return p;
    if (name == "table4") {
        p.classes = {WorkloadClass::bandwidth, WorkloadClass::balanced, WorkloadClass::capacity};
        return p;
    }
    throw invalid_input("unknown preset '" + std::string(name) + "' (valid: paper, table4)");
}

namespace detail {

inline void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw invalid_input(std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw invalid_input("unknown config key '" + std::string(where) + "." + it.key() + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw invalid_input(std::string("config key '") + key + "': " + e.what());
    }
}

inline DiskSpec disk_from_json(const json& j, DiskSpec d) {
    check_keys(j, "disk", {"preset", "count", "capacity_gb", "seek_ms", "rotation_ms", "settle_ms", "transfer_ms",
                           "overrides"});
    if (j.contains("preset")) {
        const int count = d.count;
        d = disk_preset(j.at("preset").get<std::string>());
        d.count = count;
    }
    read(j, "count", d.count);
    read(j, "capacity_gb", d.capacity_gb);
    read(j, "seek_ms", d.seek_ms);
    read(j, "rotation_ms", d.rotation_ms);
    read(j, "settle_ms", d.settle_ms);
    read(j, "transfer_ms", d.transfer_ms);
    return d;
}

inline json disk_to_json(const DiskSpec& d) {
    return json{{"count", d.count},         {"capacity_gb", d.capacity_gb}, {"seek_ms", d.seek_ms},
                {"rotation_ms", d.rotation_ms}, {"settle_ms", d.settle_ms}, {"transfer_ms", d.transfer_ms}};
}

}  // namespace detail

inline void apply_json(RunPlan& plan, const json& root) {
    using detail::read;
    detail::check_keys(root, "config", {"preset", "disk", "workload", "experiment"});
    ExperimentConfig& e = plan.experiment;

    if (root.contains("disk")) {
        const json& jd = root.at("disk");
        e.disk = detail::disk_from_json(jd, e.disk);
        if (jd.contains("overrides")) {
            e.disk_overrides.clear();
            for (const auto& o : jd.at("overrides")) {
                DiskSpec d = detail::disk_from_json(o, e.disk);
                d.count = e.disk.count;
                e.disk_overrides.push_back(d);
            }
        }
    }
    if (root.contains("workload")) {
        const json& jw = root.at("workload");
        detail::check_keys(jw, "workload", {"classes", "f1", "mean_size_r1_gb", "mean_size_r5_gb", "kappa5",
                                            "kappa_ratio", "f_r", "periods", "strip_kb", "seed"});
        WorkloadConfig& w = e.workload;
        if (jw.contains("classes")) {
            plan.classes.clear();
            for (const auto& c : jw.at("classes")) plan.classes.push_back(parse_workload_class(c.get<std::string>()));
        }
        if (jw.contains("kappa5") && !jw.contains("classes")) plan.classes.clear();
        read(jw, "f1", w.f1);
        read(jw, "mean_size_r1_gb", w.mean_size_r1_gb);
        read(jw, "mean_size_r5_gb", w.mean_size_r5_gb);
        read(jw, "kappa5", w.kappa5);
        read(jw, "kappa_ratio", w.kappa_ratio);
        read(jw, "f_r", w.f_r);
        read(jw, "periods", w.periods);
        read(jw, "strip_kb", w.strip_kb);
        read(jw, "seed", w.seed);
    }
    if (root.contains("experiment")) {
        const json& jx = root.at("experiment");
        detail::check_keys(jx, "experiment",
                           {"policies", "beta", "best_fit_rule", "mode", "iterations", "rho_max", "v_max_fraction",
                            "v_max_basis", "v_max_gb", "update_method", "clustering", "width_rule", "reserved_bw",
                            "skip_failures", "max_consecutive_failures", "max_requests", "threads"});
        double beta = e.policies.empty() ? 1.0 : e.policies.front().beta;
        read(jx, "beta", beta);
        BestFitRule bf = e.policies.empty() ? BestFitRule::bandwidth : e.policies.front().best_fit_rule;
        if (jx.contains("best_fit_rule")) {
            const auto s = jx.at("best_fit_rule").get<std::string>();
            if (s == "bandwidth") bf = BestFitRule::bandwidth;
            else if (s == "combined") bf = BestFitRule::combined;
            else throw invalid_input("unknown best_fit_rule '" + s + "' (valid: bandwidth, combined)");
        }
        if (jx.contains("policies")) {
            e.policies.clear();
            for (const auto& p : jx.at("policies")) e.policies.push_back(Policy{parse_policy_kind(p.get<std::string>())});
        }
        for (auto& p : e.policies) {
            p.beta = beta;
            p.best_fit_rule = bf;
        }
        if (jx.contains("mode")) e.mode = parse_load_mode(jx.at("mode").get<std::string>());
        read(jx, "iterations", e.iterations);
        read(jx, "rho_max", e.rho_max);
        read(jx, "v_max_fraction", plan.v_max_fraction);
        if (jx.contains("v_max_basis")) {
            const auto s = jx.at("v_max_basis").get<std::string>();
            if (s == "disk") plan.v_max_basis = VmaxBasis::disk;
            else if (s == "array") plan.v_max_basis = VmaxBasis::array;
            else throw invalid_input("unknown v_max_basis '" + s + "' (valid: disk, array)");
        }
        if (jx.contains("v_max_gb")) {
            read(jx, "v_max_gb", e.v_max_gb);
            plan.v_max_explicit = true;
        }
        if (jx.contains("update_method"))
            e.update_method = parse_update_method(jx.at("update_method").get<std::string>());
        if (jx.contains("clustering")) {
            const json& jc = jx.at("clustering");
            detail::check_keys(jc, "experiment.clustering", {"kind", "alpha", "candidates"});
            if (jc.contains("kind")) {
                const auto s = jc.at("kind").get<std::string>();
                if (s == "off") e.clustering.kind = ClusteringKind::off;
                else if (s == "fixed" || s == "fixed-alpha") e.clustering.kind = ClusteringKind::fixed_alpha;
                else if (s == "auto-cbr" || s == "auto_cbr") e.clustering.kind = ClusteringKind::auto_cbr;
                else throw invalid_input("unknown clustering kind '" + s + "' (valid: off, fixed-alpha, auto-cbr)");
            }
            read(jc, "alpha", e.clustering.alpha);
            read(jc, "candidates", e.clustering.candidates);
        }
        if (jx.contains("width_rule")) {
            const auto s = jx.at("width_rule").get<std::string>();
            if (s == "computed") e.width_rule = WidthRule::computed;
            else if (s == "full") e.width_rule = WidthRule::full;
            else throw invalid_input("unknown width_rule '" + s + "' (valid: computed, full)");
        }
        read(jx, "reserved_bw", e.reserved_bw);
        read(jx, "skip_failures", e.skip_failures);
        read(jx, "max_consecutive_failures", e.max_consecutive_failures);
        read(jx, "max_requests", e.max_requests);
        read(jx, "threads", e.threads);
    }
}

/// Preset named in the document (default "paper") with the document applied on top.
inline RunPlan plan_from_json(const json& root) {
    RunPlan plan = preset(root.value("preset", std::string("paper")));
    apply_json(plan, root);
    plan.resolve();
    return plan;
}

/// Loads a config file, or the config snapshot embedded in a manifest.
inline RunPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw invalid_input("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.contains("manifest")) return plan_from_json(j.at("manifest").at("config"));
    return plan_from_json(j);
}

inline std::string_view to_string(ClusteringKind k) {
    switch (k) {
        case ClusteringKind::off: return "off";
        case ClusteringKind::fixed_alpha: return "fixed-alpha";
        case ClusteringKind::auto_cbr: return "auto-cbr";
    }
    return "?";
}

/// Fully resolved snapshot; loading it reproduces the same plan.
inline json plan_to_json(const RunPlan& plan) {
    const ExperimentConfig& e = plan.experiment;
    json disk = detail::disk_to_json(e.disk);
    if (!e.disk_overrides.empty()) {
        json ov = json::array();
        for (const auto& d : e.disk_overrides) {
            json jd = detail::disk_to_json(d);
            jd.erase("count");
            ov.push_back(jd);
        }
        disk["overrides"] = ov;
    }
    json classes = json::array();
    for (auto c : plan.classes) classes.push_back(std::string(to_string(c)));
    const WorkloadConfig& w = e.workload;
    json workload{{"f1", w.f1},
                  {"mean_size_r1_gb", w.mean_size_r1_gb},
                  {"mean_size_r5_gb", w.mean_size_r5_gb},
                  {"kappa5", w.kappa5},
                  {"kappa_ratio", w.kappa_ratio},
                  {"f_r", w.f_r},
                  {"periods", w.periods},
                  {"strip_kb", w.strip_kb},
                  {"seed", w.seed}};
    if (!plan.classes.empty()) {
        workload.erase("kappa5");
        workload["classes"] = classes;
    }
    json policies = json::array();
    for (const auto& p : e.policies) policies.push_back(p.name());
    const Policy first = e.policies.empty() ? Policy{} : e.policies.front();
    json exp{{"policies", policies},
             {"beta", first.beta},
             {"best_fit_rule", first.best_fit_rule == BestFitRule::bandwidth ? "bandwidth" : "combined"},
             {"mode", std::string(to_string(e.mode))},
             {"iterations", e.iterations},
             {"rho_max", e.rho_max},
             {"v_max_gb", e.v_max_gb},
             {"update_method", std::string(1, to_char(e.update_method))},
             {"clustering",
              {{"kind", std::string(to_string(e.clustering.kind))},
               {"alpha", e.clustering.alpha},
               {"candidates", e.clustering.candidates}}},
             {"width_rule", e.width_rule == WidthRule::computed ? "computed" : "full"},
             {"reserved_bw", e.reserved_bw},
             {"skip_failures", e.skip_failures},
             {"max_consecutive_failures", e.max_consecutive_failures},
             {"max_requests", e.max_requests}};
    return json{{"disk", disk}, {"workload", workload}, {"experiment", exp}};
}

/// Reproducibility record written next to every report.
struct RunManifest {
    json config;
    std::string command;  // e.g. "experiment" or "sweep beta 0,0.5,1"
    std::uint64_t master_seed = 0;
    std::string tool_version{kToolVersion};
    std::vector<std::string> outputs;  // file names, relative to the output directory

    /// Hash of everything that determines the outputs (not the output paths).
    std::uint64_t hash() const {
        const std::string s = json{{"config", config}, {"command", command}, {"master_seed", master_seed},
                                   {"tool_version", tool_version}}
                                  .dump();
        Fnv1a h;
        h.add_bytes(s.data(), s.size());
        return h.value();
    }

    std::string hash_hex() const {
        std::ostringstream os;
        os << std::hex;
        os.width(16);
        os.fill('0');
        os << hash();
        return os.str();
    }

    json to_json() const {
        return json{{"manifest",
                     {{"config", config},
                      {"command", command},
                      {"master_seed", master_seed},
                      {"tool_version", tool_version},
                      {"hash", hash_hex()},
                      {"outputs", outputs}}}};
    }
};

}  // namespace hda
