// Command-line front end: reproducible simulations, Pareto searches,
// policy comparisons, predictions, and the canned experiments.

#include "pcs/baselines.hpp"
#include "pcs/errors.hpp"
#include "pcs/metrics.hpp"
#include "pcs/parallel.hpp"
#include "pcs/predictor.hpp"
#include "pcs/result_io.hpp"
#include "pcs/snapshot_io.hpp"
#include "pcs/solver.hpp"
#include "pcs/synthetic.hpp"
#include "pcs/trace_io.hpp"
#include "pcs/wfq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace pcs;

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- helpers

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad " + what + " '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& what) {
    const double v = to_double(s, what);
    if (v != std::floor(v))
        throw ValidationError(what + " must be an integer, got '" + s + "'");
    return static_cast<int>(v);
}

// Invocation string recorded in output metadata. --workers and --out do
// not change results, so they are scrubbed to keep reruns byte-comparable.
std::string canonical_invocation(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--workers" || arg == "--out" || arg.rfind("--workers=", 0) == 0 ||
            arg.rfind("--out=", 0) == 0) {
            if (arg.find('=') == std::string::npos)
                ++i; // skip the value too
            continue;
        }
        if (!out.empty())
            out += ' ';
        out += arg;
    }
    return out;
}

// "n=1000,load=0.8,dist=pareto:1.5:3600,maxalloc=pow2:8,capacity=64,alpha=0.7:1.0"
WorkloadModel parse_synthetic(const std::string& spec) {
    WorkloadModel model;
    model.max_alloc_dist = MaxAllocDist::constant(1);
    for (const std::string& kv : split(spec, ',')) {
        if (kv.empty())
            continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ValidationError("synthetic spec entry '" + kv + "' is not key=value");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "n") {
            model.n_jobs = to_int(value, "n");
        } else if (key == "load") {
            model.load = to_double(value, "load");
        } else if (key == "capacity") {
            model.capacity = to_int(value, "capacity");
        } else if (key == "dist") {
            const auto parts = split(value, ':');
            if (parts[0] == "pareto" && parts.size() == 3)
                model.size_dist = SizeDist::heavy_tailed(to_double(parts[1], "shape"),
                                                         to_double(parts[2], "scale"));
            else if (parts[0] == "exp" && parts.size() == 2)
                model.size_dist = SizeDist::light_tailed(to_double(parts[1], "mean"));
            else if (parts[0] == "bimodal" && parts.size() == 4)
                model.size_dist =
                    SizeDist::bimodal(to_double(parts[1], "p"), to_double(parts[2], "mean"),
                                      to_double(parts[3], "mean"));
            else
                throw ValidationError("unknown size distribution '" + value + "'");
        } else if (key == "maxalloc") {
            const auto parts = split(value, ':');
            if (parts[0] == "const" && parts.size() == 2)
                model.max_alloc_dist = MaxAllocDist::constant(to_int(parts[1], "maxalloc"));
            else if (parts[0] == "uniform" && parts.size() == 3)
                model.max_alloc_dist = MaxAllocDist::uniform_int(to_int(parts[1], "lo"),
                                                                 to_int(parts[2], "hi"));
            else if (parts[0] == "pow2" && parts.size() == 2)
                model.max_alloc_dist = MaxAllocDist::power_of_two(to_int(parts[1], "hi"));
            else
                throw ValidationError("unknown maxalloc distribution '" + value + "'");
        } else if (key == "alpha") {
            const auto parts = split(value, ':');
            model.alpha_min = to_double(parts[0], "alpha");
            model.alpha_max = parts.size() > 1 ? to_double(parts[1], "alpha") : model.alpha_min;
        } else {
            throw ValidationError("unknown synthetic key '" + key + "'");
        }
    }
    model.validate();
    return model;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const std::string& item : split(s, ','))
        if (!item.empty())
            out.push_back(static_cast<std::uint64_t>(std::stoull(item)));
    if (out.empty())
        throw ValidationError("empty seed list");
    return out;
}

// ------------------------------------------------------------ shared flags

struct WorkloadFlags {
    std::string trace_path;
    std::string trace_format = "csv";
    std::string synthetic;
    std::uint64_t seed = 1;
    double size_error = 0.0;
    std::uint64_t error_seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--trace", trace_path, "trace file to simulate");
        cmd->add_option("--format", trace_format, "trace format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--synthetic", synthetic,
                        "synthetic workload spec, e.g. "
                        "n=1000,load=0.8,dist=pareto:1.5:3600,maxalloc=pow2:8,capacity=64");
        cmd->add_option("--seed", seed, "workload seed");
        cmd->add_option("--size-error", size_error,
                        "relative size estimation error injected into visible sizes");
        cmd->add_option("--error-seed", error_seed, "seed for the error injection");
    }

    bool is_synthetic() const { return !synthetic.empty(); }

    WorkloadModel model() const {
        if (!is_synthetic())
            throw ValidationError("this command needs --synthetic");
        return parse_synthetic(synthetic);
    }

    Trace load(std::optional<int>* capacity_hint = nullptr) const {
        Trace trace;
        if (is_synthetic()) {
            if (!trace_path.empty())
                throw ValidationError("--trace and --synthetic are mutually exclusive");
            const WorkloadModel m = model();
            trace = m.generate(seed);
            if (capacity_hint)
                *capacity_hint = m.capacity;
        } else if (!trace_path.empty()) {
            trace = load_trace(trace_path, trace_format_from_string(trace_format));
            if (capacity_hint)
                *capacity_hint = trace.capacity_hint;
        } else {
            throw ValidationError("need --trace or --synthetic");
        }
        if (size_error > 0.0)
            trace = inject_size_error(trace, size_error, error_seed);
        return trace;
    }
};

struct PcsFlags {
    double T = 1.0;
    double W = 1.0;
    double zeta_min = 0.0;
    std::string thresholds;
    std::string weights;
    std::string front_file;
    int front_index = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pcs-T", T, "per-class size-variation budget");
        cmd->add_option("--pcs-W", W, "class weight decay");
        cmd->add_option("--pcs-zeta", zeta_min, "efficiency floor for allocation caps");
        cmd->add_option("--pcs-thresholds", thresholds,
                        "explicit thresholds, e.g. 10,100,inf (overrides --pcs-T/W)");
        cmd->add_option("--pcs-weights", weights, "explicit weights, e.g. 1,0.5,0.25");
        cmd->add_option("--pcs-config", front_file, "front JSON to pick a configuration from");
        cmd->add_option("--pcs-index", front_index, "row of --pcs-config to use");
    }

    std::unique_ptr<PcsPolicy> make(const Trace& trace) const {
        if (!front_file.empty()) {
            const auto front = load_front_json(front_file);
            if (front_index < 0 || static_cast<std::size_t>(front_index) >= front.size())
                throw ValidationError("--pcs-index out of range for '" + front_file + "'");
            const auto& p = front[static_cast<std::size_t>(front_index)];
            if (!p.resolved.thresholds.empty())
                return std::make_unique<PcsPolicy>(p.resolved);
            return std::make_unique<PcsPolicy>(p.params, visible_sizes(trace));
        }
        if (!thresholds.empty()) {
            WfqConfig cfg;
            for (const std::string& t : split(thresholds, ','))
                cfg.thresholds.push_back(
                    t == "inf" ? std::numeric_limits<double>::infinity()
                               : to_double(t, "threshold"));
            if (weights.empty())
                cfg.weights = derive_weights(cfg.thresholds.size(), W);
            else
                for (const std::string& w : split(weights, ','))
                    cfg.weights.push_back(to_double(w, "weight"));
            cfg.zeta_min = zeta_min;
            return std::make_unique<PcsPolicy>(cfg);
        }
        PcsParams params;
        params.T = T;
        params.W = W;
        params.zeta_min = zeta_min;
        return std::make_unique<PcsPolicy>(params, visible_sizes(trace));
    }

    static std::vector<double> visible_sizes(const Trace& trace) {
        std::vector<double> sizes;
        sizes.reserve(trace.jobs.size());
        for (const auto& job : trace.jobs)
            sizes.push_back(job.size);
        return sizes;
    }
};

std::unique_ptr<Policy> make_any_policy(const std::string& name, const PcsFlags& pcs,
                                        const Trace& trace) {
    if (name == "pcs")
        return pcs.make(trace);
    return make_baseline_policy(name);
}

double resolve_capacity(double flag_value, const std::optional<int>& hint) {
    if (flag_value > 0.0)
        return flag_value;
    if (hint)
        return static_cast<double>(*hint);
    throw ValidationError("no capacity: pass --capacity or use a workload that carries one");
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
    WorkloadFlags workload;
    PcsFlags pcs;
    std::string policy = "fifo";
    double capacity = 0.0;
    double restart_overhead = 0.0;
    double lease = 600.0;
    bool records_json = false;
    std::string out;
};

int cmd_simulate(const SimulateArgs& args, const std::string& invocation) {
    std::optional<int> hint;
    const Trace trace = args.workload.load(&hint);
    SimConfig cfg;
    cfg.capacity = resolve_capacity(args.capacity, hint);
    cfg.restart_overhead = args.restart_overhead;
    cfg.lease_duration = args.lease;

    auto policy = make_any_policy(args.policy, args.pcs, trace);
    const auto t0 = std::chrono::steady_clock::now();
    SimResult result = run_simulation(trace, *policy, cfg);
    const double sim_wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    annotate_fairness(result, trace, cfg.capacity);
    std::fprintf(stderr, "simulated %zu jobs (%llu events) in %.3f s\n",
                 result.records.size(), static_cast<unsigned long long>(result.event_count),
                 sim_wall);

    RunMetadata meta;
    meta.invocation = invocation;
    meta.policy = policy->name();
    meta.seed = args.workload.seed;
    meta.config_hash = fnv1a_hex(invocation);

    if (args.out.empty()) {
        const auto summary = summarize(result);
        for (const auto& [metric, stats] : summary)
            for (const auto& [measure, value] : stats)
                std::printf("%s.%s %.6f\n", metric.c_str(), measure.c_str(), value);
    } else {
        write_records_csv(result, meta, args.out + ".jobs.csv");
        write_summary_json(result, meta, args.out + ".summary.json");
        if (args.records_json)
            write_result_json(result, meta, args.out + ".jobs.json");
        std::fprintf(stderr, "wrote %s.jobs.csv and %s.summary.json\n", args.out.c_str(),
                     args.out.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------ search

struct SearchArgs {
    WorkloadFlags workload;
    std::string spec_file;
    int population = 40;
    int archive = 40;
    int generations = 25;
    int budget = 0; // overrides generations when set
    std::string eval_seeds = "101,202";
    std::uint64_t seed = 1;
    int workers = 0;
    double restart_overhead = 0.0;
    std::string out = "front";
};

SearchSpace space_from(const SearchArgs& args) {
    SearchSpace space;
    space.population = args.population;
    space.archive = args.archive;
    space.generations =
        args.budget > 0 ? std::max(1, (args.budget + args.population - 1) / args.population)
                        : args.generations;
    space.eval_seeds = parse_seed_list(args.eval_seeds);
    return space;
}

int resolve_workers(int workers) {
    if (workers > 0)
        return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_search(const SearchArgs& args, const std::string& invocation) {
    const ObjectiveSpec spec = load_objective_spec(args.spec_file);
    const WorkloadModel model = args.workload.model();
    const SearchSpace space = space_from(args);
    SimConfig cfg;
    cfg.capacity = static_cast<double>(model.capacity);
    cfg.restart_overhead = args.restart_overhead;

    const auto t0 = std::chrono::steady_clock::now();
    SearchStats stats;
    const auto front =
        search(spec, space, model, cfg, args.seed, resolve_workers(args.workers), &stats);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RunMetadata meta;
    meta.invocation = invocation;
    meta.policy = "pcs";
    meta.seed = args.seed;
    meta.config_hash = fnv1a_hex(invocation);
    write_front_json(front, spec, meta, stats, args.out + ".front.json");
    write_front_csv(front, meta, args.out + ".front.csv");
    std::fprintf(stderr,
                 "search: %llu evaluations (%llu cache hits), %zu points, %.1f s wall\n",
                 static_cast<unsigned long long>(stats.evaluations),
                 static_cast<unsigned long long>(stats.cache_hits), front.size(), wall);
    return 0;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
    WorkloadFlags workload;
    PcsFlags pcs;
    std::string policies = "fifo,srsf,maxmin,themis,afs";
    double capacity = 0.0;
    double restart_overhead = 0.0;
    double lease = 600.0;
    std::string out = "compare";
};

std::unique_ptr<Policy> policy_from_token(const std::string& token, const PcsFlags& flags,
                                          const Trace& trace) {
    if (token.rfind("pcs@", 0) == 0) {
        const std::string rest = token.substr(4);
        const auto hash = rest.find('#');
        PcsFlags file_flags = flags;
        file_flags.front_file = hash == std::string::npos ? rest : rest.substr(0, hash);
        file_flags.front_index =
            hash == std::string::npos ? 0 : to_int(rest.substr(hash + 1), "front index");
        return file_flags.make(trace);
    }
    return make_any_policy(token, flags, trace);
}

int cmd_compare(const CompareArgs& args, const std::string& invocation) {
    std::optional<int> hint;
    const Trace trace = args.workload.load(&hint);
    SimConfig cfg;
    cfg.capacity = resolve_capacity(args.capacity, hint);
    cfg.restart_overhead = args.restart_overhead;
    cfg.lease_duration = args.lease;

    const auto fft = compute_fft(trace, cfg.capacity);
    const auto tokens = split(args.policies, ',');
    if (tokens.empty())
        throw ValidationError("empty --policies list");

    const std::vector<std::string> measures = {"avg", "p50", "p90", "p99", "p100"};
    std::ofstream out(args.out + ".csv");
    if (!out)
        throw ParseError("cannot write '" + args.out + ".csv'");
    out << "# invocation: " << invocation << "\n";
    out << "# seed: " << args.workload.seed << "\n";
    out << "policy";
    for (const char* metric : {"jct", "pred_err", "unfairness"})
        for (const auto& m : measures)
            out << ',' << metric << '_' << m;
    out << "\n";

    for (const std::string& token : tokens) {
        auto policy = policy_from_token(token, args.pcs, trace);
        SimResult result = run_simulation(trace, *policy, cfg);
        for (auto& rec : result.records) {
            rec.fft = fft.at(rec.id);
            const double fair_dur = rec.fft - rec.arrival;
            const double late = rec.finish - rec.fft;
            rec.unfairness = late > 0.0 ? 100.0 * late / fair_dur : 0.0;
        }
        const auto summary = summarize(result);
        out << token;
        char buf[40];
        for (const char* metric : {"jct", "pred_err_abs", "unfairness"}) {
            for (const auto& m : measures) {
                std::snprintf(buf, sizeof(buf), "%.17g", summary.at(metric).at(m));
                out << ',' << buf;
            }
        }
        out << "\n";
    }
    std::fprintf(stderr, "wrote %s.csv\n", args.out.c_str());
    return 0;
}

// ----------------------------------------------------------------- predict

struct PredictArgs {
    std::string snapshot_file;
    std::string policy = "fifo";
    PcsFlags pcs;
    double job_size = 0.0;
    int job_max_alloc = 1;
    double job_alpha = 1.0;
    std::string job_demand; // "1:100,2:60"
    std::string job_id = "new";
    double capacity = 0.0;
    double restart_overhead = 0.0;
    double lease = 600.0;
};

int cmd_predict(const PredictArgs& args) {
    ClusterState state;
    if (!args.snapshot_file.empty()) {
        state = load_cluster_state(args.snapshot_file);
    } else {
        if (args.capacity <= 0.0)
            throw ValidationError("need --snapshot or --capacity");
        state.capacity = args.capacity;
    }
    if (args.capacity > 0.0)
        state.capacity = args.capacity;

    SimConfig cfg;
    cfg.capacity = state.capacity;
    cfg.restart_overhead = args.restart_overhead;
    cfg.lease_duration = args.lease;

    if (args.job_size <= 0.0)
        throw ValidationError("need a positive --job-size");
    Job job;
    job.id = args.job_id;
    job.arrival = state.clock;
    job.size = args.job_size;
    job.true_size = args.job_size;
    if (!args.job_demand.empty()) {
        std::vector<DemandPoint> points;
        for (const std::string& kv : split(args.job_demand, ',')) {
            const auto colon = kv.find(':');
            if (colon == std::string::npos)
                throw ValidationError("bad --job-demand entry '" + kv + "'");
            points.push_back({to_int(kv.substr(0, colon), "allocation"),
                              to_double(kv.substr(colon + 1), "exec time")});
        }
        job.demand = std::make_shared<DemandFunction>(
            DemandFunction::from_table(std::move(points)));
    } else {
        job.demand = std::make_shared<DemandFunction>(
            DemandFunction::power_law(args.job_max_alloc, args.job_size, args.job_alpha));
    }

    // Rebuild the policy's view of the snapshot. For the PCS policy the
    // trace sample is the snapshot's own jobs (plus the new one).
    Trace pseudo;
    for (const auto& jr : state.active)
        pseudo.jobs.push_back(jr.job);
    pseudo.jobs.push_back(job);
    auto policy = make_any_policy(args.policy, args.pcs, pseudo);
    const double clock = state.clock;
    for (auto& jr : state.active) {
        ClusterState at_arrival;
        at_arrival.capacity = state.capacity;
        at_arrival.clock = jr.job.arrival;
        policy->on_admit(jr, at_arrival, cfg);
    }
    state.clock = clock;

    const Snapshot snap = take_snapshot(state, *policy);
    const double pred = predict_jct(snap, job, cfg);
    std::printf("%.6f\n", pred);
    return 0;
}

// -------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string name;
    WorkloadFlags workload;
    PcsFlags pcs;
    std::string spec_file;
    std::string grid = "0,0.1,0.2,0.3,0.4,0.5";
    double load_a = 0.6;
    double load_b = 0.8;
    int population = 16;
    int archive = 16;
    int generations = 8;
    std::string eval_seeds = "101";
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out = "experiment";
};

ObjectiveSpec default_jct_pred_spec() {
    ObjectiveSpec spec;
    spec.entries = {{Metric::Jct, Measure::avg()}, {Metric::PredErr, Measure::avg()}};
    return spec;
}

int cmd_experiment_size_error(const ExperimentArgs& args, const std::string& invocation) {
    const WorkloadModel model = args.workload.model();
    const Trace clean = model.generate(args.workload.seed);
    SimConfig cfg;
    cfg.capacity = static_cast<double>(model.capacity);

    // zero-error baselines
    AfsPolicy afs;
    const SimResult afs_clean = run_simulation(clean, afs, cfg);
    const auto afs_summary = summarize(afs_clean);

    std::ofstream out(args.out + ".csv");
    if (!out)
        throw ParseError("cannot write '" + args.out + ".csv'");
    out << "# invocation: " << invocation << "\n";
    out << "rel_error,pcs_pred_err_avg,fifo_pred_err_avg,pcs_jct_avg,afs_clean_jct_avg\n";
    for (const std::string& item : split(args.grid, ',')) {
        const double rel = to_double(item, "rel_error");
        const Trace noisy =
            rel > 0.0 ? inject_size_error(clean, rel, args.workload.error_seed) : clean;
        auto pcs_policy = args.pcs.make(noisy);
        const SimResult pcs_run = run_simulation(noisy, *pcs_policy, cfg);
        FifoPolicy fifo;
        const SimResult fifo_run = run_simulation(noisy, fifo, cfg);
        const auto pcs_summary = summarize(pcs_run);
        const auto fifo_summary = summarize(fifo_run);
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%g,%.17g,%.17g,%.17g,%.17g\n", rel,
                      pcs_summary.at("pred_err_abs").at("avg"),
                      fifo_summary.at("pred_err_abs").at("avg"),
                      pcs_summary.at("jct").at("avg"), afs_summary.at("jct").at("avg"));
        out << buf;
    }
    std::fprintf(stderr, "wrote %s.csv\n", args.out.c_str());
    return 0;
}

int cmd_experiment_sensitivity(const ExperimentArgs& args, const std::string& invocation) {
    WorkloadModel model_a = args.workload.model();
    model_a.load = args.load_a;
    WorkloadModel model_b = model_a;
    model_b.load = args.load_b;

    const ObjectiveSpec spec =
        args.spec_file.empty() ? default_jct_pred_spec() : load_objective_spec(args.spec_file);
    SearchSpace space;
    space.population = args.population;
    space.archive = args.archive;
    space.generations = args.generations;
    space.eval_seeds = parse_seed_list(args.eval_seeds);
    SimConfig cfg;
    cfg.capacity = static_cast<double>(model_a.capacity);
    const int workers = resolve_workers(args.workers);

    const auto front_a = search(spec, space, model_a, cfg, args.seed, workers);
    // the alternate workload's own front anchors the distance metric; with
    // identical loads the re-evaluated points are their own reference
    std::vector<std::vector<double>> reference;
    if (args.load_a != args.load_b) {
        const auto front_b = search(spec, space, model_b, cfg, args.seed + 1, workers);
        for (const auto& p : front_b)
            reference.push_back(p.objectives);
    }
    const auto entries =
        sensitivity(front_a, model_b, spec, space.eval_seeds, cfg, workers, reference);

    std::vector<double> distances;
    std::ofstream out(args.out + ".csv");
    if (!out)
        throw ParseError("cannot write '" + args.out + ".csv'");
    out << "# invocation: " << invocation << "\n";
    out << "T,W,zeta_min,distance\n";
    char buf[160];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", e.point.params.T,
                      e.point.params.W, e.point.params.zeta_min, e.distance);
        out << buf;
        distances.push_back(e.distance);
    }
    std::sort(distances.begin(), distances.end());
    double within = 0.0;
    for (double d : distances)
        if (d <= 0.10)
            within += 1.0;
    json report;
    report["invocation"] = invocation;
    report["load_a"] = args.load_a;
    report["load_b"] = args.load_b;
    report["n_points"] = distances.size();
    report["distances"] = distances;
    report["fraction_within_10pct"] =
        distances.empty() ? 0.0 : within / static_cast<double>(distances.size());
    std::ofstream jout(args.out + ".json");
    jout << report.dump(2) << "\n";
    std::fprintf(stderr, "wrote %s.csv and %s.json\n", args.out.c_str(), args.out.c_str());
    return 0;
}

// Unconstrained gene layout for the heuristics study: 5 raw thresholds
// (log10 seconds), 6 raw class weights (log10), and the efficiency floor.
WfqConfig decode_raw_config(const std::vector<double>& genes) {
    constexpr std::size_t kThresholds = 5;
    std::vector<double> thresholds;
    for (std::size_t i = 0; i < kThresholds; ++i)
        thresholds.push_back(std::pow(10.0, genes[i]));
    std::sort(thresholds.begin(), thresholds.end());
    WfqConfig cfg;
    std::vector<double> weights;
    for (std::size_t i = 0; i < kThresholds; ++i) {
        if (!thresholds.empty() && !cfg.thresholds.empty() &&
            thresholds[i] <= cfg.thresholds.back() * (1.0 + 1e-9))
            continue; // merged with the previous class
        cfg.thresholds.push_back(thresholds[i]);
        weights.push_back(std::pow(10.0, genes[kThresholds + i]));
    }
    cfg.thresholds.push_back(std::numeric_limits<double>::infinity());
    weights.push_back(std::pow(10.0, genes[2 * kThresholds]));
    cfg.weights = std::move(weights);
    cfg.zeta_min = genes[2 * kThresholds + 1];
    return cfg;
}

int cmd_experiment_heuristics(const ExperimentArgs& args, const std::string& invocation) {
    const WorkloadModel model = args.workload.model();
    const ObjectiveSpec spec =
        args.spec_file.empty() ? default_jct_pred_spec() : load_objective_spec(args.spec_file);
    if (spec.entries.size() != 2)
        throw ValidationError("the heuristics experiment needs a 2-objective spec");
    SimConfig cfg;
    cfg.capacity = static_cast<double>(model.capacity);
    const int workers = resolve_workers(args.workers);

    SearchSpace space;
    space.population = args.population;
    space.archive = args.archive;
    space.generations = args.generations;
    space.eval_seeds = parse_seed_list(args.eval_seeds);
    SearchStats stats;
    const auto constrained =
        search(spec, space, model, cfg, args.seed, workers, &stats);

    // unconstrained: raw thresholds/weights at the same evaluation budget
    const EvalContext ctx(model, spec, cfg, space.eval_seeds);
    double size_lo = std::numeric_limits<double>::infinity(), size_hi = 0.0;
    for (double s : ctx.union_size_sample()) {
        size_lo = std::min(size_lo, s);
        size_hi = std::max(size_hi, s);
    }
    std::vector<std::pair<double, double>> bounds;
    for (int i = 0; i < 5; ++i)
        bounds.push_back({std::log10(size_lo), std::log10(size_hi)});
    for (int i = 0; i < 6; ++i)
        bounds.push_back({-4.0, 0.0});
    bounds.push_back({0.0, 1.0});
    Spea2Options options;
    options.population = args.population;
    options.archive = args.archive;
    options.generations = args.generations;
    options.seed = args.seed;
    options.workers = workers;
    Spea2Stats raw_stats;
    const auto raw_archive = spea2_minimize(
        bounds,
        [&](const std::vector<double>& genes) { return ctx.evaluate(decode_raw_config(genes)); },
        options, &raw_stats);

    std::vector<std::vector<double>> objs_constrained, objs_raw;
    for (const auto& p : constrained)
        objs_constrained.push_back(p.objectives);
    for (const auto& ind : raw_archive)
        objs_raw.push_back(ind.objectives);

    std::vector<double> ref(2, 0.0);
    for (const auto& group : {objs_constrained, objs_raw})
        for (const auto& o : group)
            for (std::size_t k = 0; k < 2; ++k)
                ref[k] = std::max(ref[k], o[k]);
    for (double& r : ref)
        r = r * 1.1 + 1e-9;

    json report;
    report["invocation"] = invocation;
    report["budget_constrained"] = stats.evaluations + stats.cache_hits;
    report["budget_unconstrained"] = raw_stats.evaluations + raw_stats.cache_hits;
    report["reference_point"] = ref;
    report["hypervolume_constrained"] = hypervolume_2d(objs_constrained, ref);
    report["hypervolume_unconstrained"] = hypervolume_2d(objs_raw, ref);
    std::ofstream out(args.out + ".json");
    if (!out)
        throw ParseError("cannot write '" + args.out + ".json'");
    out << report.dump(2) << "\n";
    std::fprintf(stderr, "wrote %s.json\n", args.out.c_str());
    return 0;
}

int cmd_experiment(const ExperimentArgs& args, const std::string& invocation) {
    if (args.name == "size-error")
        return cmd_experiment_size_error(args, invocation);
    if (args.name == "sensitivity")
        return cmd_experiment_sensitivity(args, invocation);
    if (args.name == "heuristics")
        return cmd_experiment_heuristics(args, invocation);
    throw ValidationError("unknown experiment '" + args.name +
                          "' (size-error|sensitivity|heuristics)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"predictability-centric cluster scheduling toolkit"};
    app.require_subcommand(1);
    const std::string invocation = canonical_invocation(argc, argv);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run one simulation");
    sim.workload.attach(simulate);
    sim.pcs.attach(simulate);
    simulate->add_option("--policy", sim.policy, "fifo|srsf|maxmin|themis|afs|pcs");
    simulate->add_option("--capacity", sim.capacity, "cluster resource units");
    simulate->add_option("--restart-overhead", sim.restart_overhead, "seconds");
    simulate->add_option("--lease", sim.lease, "lease duration (themis)");
    simulate->add_flag("--json", sim.records_json, "also write per-job records as JSON");
    simulate->add_option("--out", sim.out, "output file prefix");

    SearchArgs sea;
    auto* search_cmd = app.add_subcommand("search", "discover the Pareto front");
    sea.workload.attach(search_cmd);
    search_cmd->add_option("--spec", sea.spec_file, "objective spec JSON")->required();
    search_cmd->add_option("--population", sea.population);
    search_cmd->add_option("--archive", sea.archive);
    search_cmd->add_option("--generations", sea.generations);
    search_cmd->add_option("--budget", sea.budget, "total evaluations (overrides generations)");
    search_cmd->add_option("--eval-seeds", sea.eval_seeds, "comma list of workload seeds");
    search_cmd->add_option("--search-seed", sea.seed, "search RNG seed");
    search_cmd->add_option("--restart-overhead", sea.restart_overhead);
    search_cmd->add_option("--workers", sea.workers, "parallel evaluation workers");
    search_cmd->add_option("--out", sea.out, "output file prefix");

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "run several policies on one workload");
    cmp.workload.attach(compare);
    cmp.pcs.attach(compare);
    compare->add_option("--policies", cmp.policies,
                        "comma list; pcs@front.json#2 picks a searched config");
    compare->add_option("--capacity", cmp.capacity);
    compare->add_option("--restart-overhead", cmp.restart_overhead);
    compare->add_option("--lease", cmp.lease);
    compare->add_option("--out", cmp.out, "output file prefix");

    PredictArgs pre;
    auto* predict = app.add_subcommand("predict", "predict a completion time");
    predict->add_option("--snapshot", pre.snapshot_file, "cluster snapshot JSON");
    predict->add_option("--policy", pre.policy);
    pre.pcs.attach(predict);
    predict->add_option("--job-size", pre.job_size)->required();
    predict->add_option("--job-max-alloc", pre.job_max_alloc);
    predict->add_option("--job-alpha", pre.job_alpha);
    predict->add_option("--job-demand", pre.job_demand, "explicit table, e.g. 1:100,2:60");
    predict->add_option("--job-id", pre.job_id);
    predict->add_option("--capacity", pre.capacity);
    predict->add_option("--restart-overhead", pre.restart_overhead);
    predict->add_option("--lease", pre.lease);

    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "canned studies");
    experiment->add_option("name", exp.name, "size-error|sensitivity|heuristics")->required();
    exp.workload.attach(experiment);
    exp.pcs.attach(experiment);
    experiment->add_option("--spec", exp.spec_file, "objective spec JSON");
    experiment->add_option("--grid", exp.grid, "size-error grid");
    experiment->add_option("--load-a", exp.load_a);
    experiment->add_option("--load-b", exp.load_b);
    experiment->add_option("--population", exp.population);
    experiment->add_option("--archive", exp.archive);
    experiment->add_option("--generations", exp.generations);
    experiment->add_option("--eval-seeds", exp.eval_seeds);
    experiment->add_option("--search-seed", exp.seed);
    experiment->add_option("--workers", exp.workers);
    experiment->add_option("--out", exp.out, "output file prefix");

    try {
        app.parse(argc, argv);
        if (simulate->parsed())
            return cmd_simulate(sim, invocation);
        if (search_cmd->parsed())
            return cmd_search(sea, invocation);
        if (compare->parsed())
            return cmd_compare(cmp, invocation);
        if (predict->parsed())
            return cmd_predict(pre);
        if (experiment->parsed())
            return cmd_experiment(exp, invocation);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const InvariantError& e) {
        std::fprintf(stderr, "internal invariant breach: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
