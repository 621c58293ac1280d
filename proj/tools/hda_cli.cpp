// hda: allocation experiments, parameter sweeps and analytic models for
// heterogeneous disk arrays.
//
//   hda experiment --preset table4
//   hda sweep beta 0,0.5,1,2 --workload capacity
//   hda analyze mm1 --rho 0.8
//   hda dump-stream --count 1000 --seed 7
//
// Files go to --out, else $HDA_OUT_DIR, else ./hda_out.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hda/analysis.hpp"
#include "hda/config.hpp"
#include "hda/report.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config;
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations;
    std::optional<std::string> mode;
    std::vector<std::string> workloads;
    std::string policies;
    std::optional<double> beta;
    std::optional<double> f1;
    std::optional<double> read_fraction;
    std::optional<unsigned> threads;
    std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config, "JSON config file, or a manifest.json from an earlier run");
    cmd->add_option("--preset", a.preset, "built-in base configuration (paper, table4)");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--iterations", a.iterations, "independent request streams per policy");
    cmd->add_option("--mode", a.mode, "normal or degraded")->check(CLI::IsMember({"normal", "degraded"}));
    cmd->add_option("--workload", a.workloads, "bandwidth, balanced or capacity (repeatable)")
        ->check(CLI::IsMember({"bandwidth", "balanced", "capacity"}));
    cmd->add_option("--policies", a.policies, "comma-separated policy names");
    cmd->add_option("--beta", a.beta, "capacity weight for MinF1/MinF2");
    cmd->add_option("--f1", a.f1, "fraction of RAID1 requests");
    cmd->add_option("--read-fraction", a.read_fraction, "fraction of reads in the access mix");
    cmd->add_option("--threads", a.threads, "worker threads (0: all cores)");
    cmd->add_option("--out", a.out, "output directory");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw hda::invalid_input("bad sweep value '" + item + "'");
        out.push_back(v);
    }
    return out;
}

hda::RunPlan build_plan(const CommonArgs& a) {
    hda::RunPlan plan;
    if (!a.config.empty()) {
        plan = hda::load_plan(a.config);
        if (a.preset) throw hda::invalid_input("--preset and --config are mutually exclusive");
    } else {
        plan = hda::plan_from_json(hda::json{{"preset", a.preset.value_or("paper")}});
    }
    hda::ExperimentConfig& e = plan.experiment;
    if (a.seed) e.workload.seed = *a.seed;
    if (a.iterations) e.iterations = *a.iterations;
    if (a.mode) e.mode = hda::parse_load_mode(*a.mode);
    if (!a.workloads.empty()) {
        plan.classes.clear();
        for (const auto& w : a.workloads) plan.classes.push_back(hda::parse_workload_class(w));
    }
    if (!a.policies.empty()) {
        const hda::Policy proto = e.policies.empty() ? hda::Policy{} : e.policies.front();
        e.policies.clear();
        for (const auto& name : split_list(a.policies)) {
            hda::Policy p = proto;
            p.kind = hda::parse_policy_kind(name);
            e.policies.push_back(p);
        }
    }
    if (a.beta)
        for (auto& p : e.policies) p.beta = *a.beta;
    if (a.f1) e.workload.f1 = *a.f1;
    if (a.read_fraction) e.workload.f_r = *a.read_fraction;
    if (a.threads) e.threads = *a.threads;
    e.validate();
    return plan;
}

fs::path output_dir(const CommonArgs& a) {
    if (!a.out.empty()) return a.out;
    if (const char* env = std::getenv("HDA_OUT_DIR"); env && *env) return env;
    return "hda_out";
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
}

struct Group {
    std::string name;
    hda::ExperimentConfig config;
};

std::vector<Group> groups(const hda::RunPlan& plan) {
    if (plan.classes.empty()) return {Group{"custom", plan.experiment}};
    std::vector<Group> out;
    for (auto c : plan.classes) out.push_back(Group{std::string(hda::to_string(c)), plan.for_class(c)});
    return out;
}

hda::RunManifest make_manifest(const hda::RunPlan& plan, std::string command) {
    hda::RunManifest m;
    m.config = hda::plan_to_json(plan);
    m.command = std::move(command);
    m.master_seed = plan.experiment.workload.seed;
    return m;
}

void finish(const fs::path& dir, hda::RunManifest& m) {
    m.outputs.push_back("manifest.json");
    write_file(dir / "manifest.json", m.to_json().dump(2) + "\n");
}

int cmd_experiment(const CommonArgs& a, bool placement_log) {
    const hda::RunPlan plan = build_plan(a);
    const fs::path dir = output_dir(a);
    fs::create_directories(dir);
    hda::RunManifest m = make_manifest(plan, placement_log ? "experiment --placement-log" : "experiment");
    const std::string sha = m.hash_hex();

    std::vector<hda::WorkloadReport> reports;
    for (const auto& g : groups(plan)) {
        reports.push_back(hda::WorkloadReport{g.name, hda::run_experiment(g.config)});
        if (placement_log) {
            // first iteration of each policy
            for (const auto& p : g.config.policies) {
                const auto run = hda::run_once(g.config, p, hda::iteration_seed(g.config.workload.seed, 0));
                const fs::path f = dir / fmt::format("placements_{}_{}.csv", g.name, p.name());
                write_file(f, hda::placement_log_csv(sha, run.state.placement_log()));
                m.outputs.push_back(f.filename().string());
            }
        }
    }
    const std::string text = hda::experiment_text(sha, reports);
    write_file(dir / "experiment.csv", hda::experiment_csv(sha, reports));
    write_file(dir / "experiment.txt", text);
    m.outputs.push_back("experiment.csv");
    m.outputs.push_back("experiment.txt");
    finish(dir, m);
    std::cout << text;
    return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& dimension, const std::string& values_arg) {
    const auto dim = hda::parse_sweep_dimension(dimension);
    const std::vector<double> values = parse_values(values_arg);
    if (values.empty()) throw hda::invalid_input("sweep needs at least one value");
    const hda::RunPlan plan = build_plan(a);
    const fs::path dir = output_dir(a);
    fs::create_directories(dir);
    hda::RunManifest m = make_manifest(plan, "sweep " + dimension + " " + values_arg);
    const std::string sha = m.hash_hex();

    std::vector<hda::SweepReport> sweeps;
    for (const auto& g : groups(plan)) sweeps.push_back(hda::SweepReport{dim, g.name, hda::sweep(g.config, dim, values)});
    const std::string text = hda::sweep_text(sha, sweeps);
    write_file(dir / "sweep.csv", hda::sweep_csv(sha, sweeps));
    write_file(dir / "sweep.txt", text);
    m.outputs.push_back("sweep.csv");
    m.outputs.push_back("sweep.txt");
    finish(dir, m);
    std::cout << text;
    return 0;
}

int cmd_dump_stream(const CommonArgs& a, std::uint64_t count) {
    const hda::RunPlan plan = build_plan(a);
    const fs::path dir = output_dir(a);
    fs::create_directories(dir);
    hda::RunManifest m = make_manifest(plan, fmt::format("dump-stream --count {}", count));
    const std::string sha = m.hash_hex();

    hda::WorkloadConfig wc = plan.classes.empty() ? plan.experiment.workload
                                                  : plan.for_class(plan.classes.front()).workload;
    auto stream = hda::make_stream(wc);
    std::vector<hda::VaRequest> reqs;
    for (std::uint64_t i = 0; i < count; ++i) reqs.push_back(stream.next());
    write_file(dir / "stream.csv", hda::stream_csv(sha, reqs));
    m.outputs.push_back("stream.csv");
    finish(dir, m);
    std::cout << fmt::format("wrote {} requests to {}\n", count, (dir / "stream.csv").string());
    return 0;
}

void row(std::string_view label, double v) { std::cout << fmt::format("  {:<34}{:>14.6f}\n", label, v); }

struct AnalyzeArgs {
    double rho = 0.8;
    double service_ms = 0.0;  // 0: x_SR of the ibm-18es preset
    double epsilon = 1e-3;
    double rho_vd = 0.1;
    double lambda_r1 = 100.0;
    double lambda_r5 = 200.0;
    int disks = 12;
    int r1_disks = 4;
    std::vector<double> candidates{0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
};

double default_service(const AnalyzeArgs& a) {
    return a.service_ms > 0.0 ? a.service_ms : hda::service_times(hda::ibm_18es()).x_sr_ms;
}

int cmd_analyze(const std::string& model, const AnalyzeArgs& a) {
    if (model == "mm1") {
        const double x = default_service(a);
        std::cout << "M/M/1 response time\n";
        row("utilization rho", a.rho);
        row("service time x (ms)", x);
        const double r = hda::mm1_response_at(a.rho, x);
        row("response time R (ms)", r);
        row("R / x", r / x);
    } else if (model == "compare") {
        const double x = default_service(a);
        const auto c = hda::compare_configs(a.lambda_r1, a.lambda_r5, a.disks, a.r1_disks, x);
        std::cout << fmt::format("separate vs shared disks (N={}, n={}, x={:.3f} ms)\n", a.disks, a.r1_disks, x);
        row("separate: rho RAID1 disks", c.rho_c1_r1);
        row("separate: rho RAID5 disks", c.rho_c1_r5);
        row("separate: R RAID1 (ms)", c.r_c1_r1);
        row("separate: R RAID5 (ms)", c.r_c1_r5);
        row("shared: rho", c.rho_c2);
        row("shared: R (ms)", c.r_c2);
        row("shared, RAID1 priority: R1 (ms)", c.r_c2_priority);
    } else if (model == "degraded") {
        const auto e = hda::degraded_response_example(a.rho_vd);
        std::cout << fmt::format("mirrored twelve-VA layout, disk 3 failed (rho_VD={})\n", a.rho_vd);
        row("R before failure / x", e.normal);
        row("R disk 2 / x", e.disk2);
        row("R disk 4 / x", e.disk4);
        row("mean R after failure / x", e.degraded_mean);
        row("weighted sum / 7 disks", e.degraded_mean_per_disk);
        row("VA A, L / x", e.va_a);
        row("VA E / x", e.va_e);
        row("VA B, I / x", e.va_b);
        row("VA F / x", e.va_f);
    } else if (model == "reliability") {
        const double r = 1.0 - a.epsilon;
        std::cout << fmt::format("reliability at r = 1 - {}\n", a.epsilon);
        row("C1 (1 RAID1 pair + 6-wide RAID5)", hda::reliability_c1(r));
        row("C2 (4 RAID1 pairs + 8-wide RAID5)", hda::reliability_c2(r));
        row("C1 (1-R)/eps^2", hda::unreliability_coefficient(hda::reliability_c1, a.epsilon));
        row("C2 (1-R)/eps^2", hda::unreliability_coefficient(hda::reliability_c2, a.epsilon));
    } else if (model == "declustering") {
        const auto base = hda::reference_declustering_base();
        std::cout << fmt::format("declustering (V={} GB, B={} acc/s, W={})\n", base.data_gb, base.normal_bandwidth,
                                 base.width);
        std::cout << fmt::format("  {:>7}{:>6}{:>12}{:>12}{:>10}\n", "alpha", "G", "capacity", "bandwidth", "gamma_c");
        for (double alpha : a.candidates) {
            const auto d = hda::declustering_row(base, alpha);
            std::cout << fmt::format("  {:>7.3f}{:>6}{:>12.3f}{:>12.3f}{:>10.3f}\n", d.alpha, d.parity_group_rounded,
                                     d.capacity_gb, d.bandwidth, d.gamma_c);
        }
    } else if (model == "choose-alpha") {
        const auto spec = hda::ibm_18es();
        row("disk gamma_d", hda::capacity_bandwidth_ratio(spec));
        row("chosen alpha", hda::choose_alpha(spec, hda::reference_declustering_base(), a.candidates));
    } else {
        throw hda::invalid_input("unknown model '" + model +
                                 "' (valid: mm1, compare, degraded, reliability, declustering, choose-alpha)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual array allocation in heterogeneous disk arrays"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hda::kToolVersion));

    CommonArgs common;
    bool placement_log = false;
    auto* exp = app.add_subcommand("experiment", "compare allocation policies");
    add_common(exp, common);
    exp->add_flag("--placement-log", placement_log, "also write the first iteration's placements per policy");

    std::string dimension, values;
    auto* sw = app.add_subcommand("sweep", "repeat an experiment over one parameter");
    sw->add_option("dimension", dimension, "beta, rho_max, v_max (GB) or alpha")->required();
    sw->add_option("values", values, "comma-separated values")->required();
    add_common(sw, common);

    std::uint64_t count = 1000;
    auto* ds = app.add_subcommand("dump-stream", "write the request stream as CSV");
    add_common(ds, common);
    ds->add_option("--count", count, "number of requests");

    std::string model;
    AnalyzeArgs an;
    auto* az = app.add_subcommand("analyze", "evaluate an analytic model");
    az->add_option("model", model, "mm1, compare, degraded, reliability, declustering, choose-alpha")->required();
    az->add_option("--rho", an.rho, "utilization (mm1)");
    az->add_option("--service-ms", an.service_ms, "service time in ms (mm1, compare)");
    az->add_option("--epsilon", an.epsilon, "disk unreliability (reliability)");
    az->add_option("--rho-vd", an.rho_vd, "per-VD utilization (degraded)");
    az->add_option("--lambda-r1", an.lambda_r1, "RAID1 arrival rate (compare)");
    az->add_option("--lambda-r5", an.lambda_r5, "RAID5 arrival rate (compare)");
    az->add_option("--disks", an.disks, "total disks (compare)");
    az->add_option("--r1-disks", an.r1_disks, "disks reserved for RAID1 (compare)");
    az->add_option("--candidates", an.candidates, "alpha values (declustering, choose-alpha)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*exp) return cmd_experiment(common, placement_log);
        if (*sw) return cmd_sweep(common, dimension, values);
        if (*ds) return cmd_dump_stream(common, count);
        if (*az) return cmd_analyze(model, an);
    } catch (const hda::invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
