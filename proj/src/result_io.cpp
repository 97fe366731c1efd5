#include "pcs/result_io.hpp"

#include "pcs/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

namespace pcs {

namespace {

using nlohmann::json;

const char* kSummaryMeasures[] = {"avg", "p50", "p90", "p99", "p100"};

std::string fmt_double(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json meta_to_json(const RunMetadata& meta) {
    json j;
    j["invocation"] = meta.invocation;
    j["policy"] = meta.policy;
    j["seed"] = meta.seed;
    j["config_hash"] = meta.config_hash;
    return j;
}

json record_to_json(const JobRecord& rec) {
    json j;
    j["job_id"] = rec.id;
    j["arrival"] = rec.arrival;
    j["start"] = rec.start;
    j["finish"] = rec.finish;
    j["jct"] = rec.jct;
    j["jct_pred"] = rec.jct_pred;
    j["pred_err"] = rec.pred_err;
    j["fft"] = rec.fft;
    j["unfairness"] = rec.unfairness;
    j["alloc_changes"] = rec.alloc_changes;
    j["preemptions"] = rec.preemptions;
    return j;
}

Measure measure_for(const char* name) {
    return measure_from_string(name);
}

} // namespace

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_records_csv(const SimResult& result, const RunMetadata& meta,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << "# invocation: " << meta.invocation << "\n";
    out << "# policy: " << meta.policy << "\n";
    out << "# seed: " << meta.seed << "\n";
    out << "# config_hash: " << meta.config_hash << "\n";
    out << "job_id,arrival,start,finish,jct,jct_pred,pred_err,fft,unfairness\n";
    for (const auto& rec : result.records) {
        out << rec.id << ',' << fmt_double(rec.arrival) << ',' << fmt_double(rec.start) << ','
            << fmt_double(rec.finish) << ',' << fmt_double(rec.jct) << ','
            << fmt_double(rec.jct_pred) << ',' << fmt_double(rec.pred_err) << ','
            << fmt_double(rec.fft) << ',' << fmt_double(rec.unfairness) << "\n";
    }
}

void write_result_json(const SimResult& result, const RunMetadata& meta,
                       const std::string& path) {
    json doc;
    doc["metadata"] = meta_to_json(meta);
    doc["capacity"] = result.capacity;
    doc["event_count"] = result.event_count;
    json records = json::array();
    for (const auto& rec : result.records)
        records.push_back(record_to_json(rec));
    doc["jobs"] = std::move(records);
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

std::map<std::string, std::map<std::string, double>> summarize(const SimResult& result) {
    std::map<std::string, std::map<std::string, double>> summary;
    std::vector<double> jct, abs_err, unfair;
    for (const auto& rec : result.records) {
        jct.push_back(rec.jct);
        if (!std::isnan(rec.pred_err))
            abs_err.push_back(std::fabs(rec.pred_err));
        if (!std::isnan(rec.unfairness))
            unfair.push_back(rec.unfairness);
    }
    auto fill = [&](const char* key, const std::vector<double>& values) {
        if (values.empty())
            return;
        for (const char* m : kSummaryMeasures)
            summary[key][m] = aggregate(values, measure_for(m));
    };
    fill("jct", jct);
    fill("pred_err_abs", abs_err);
    fill("unfairness", unfair);
    return summary;
}

void write_summary_json(const SimResult& result, const RunMetadata& meta,
                        const std::string& path) {
    json doc;
    doc["metadata"] = meta_to_json(meta);
    doc["capacity"] = result.capacity;
    doc["n_jobs"] = result.records.size();
    for (const auto& [metric, stats] : summarize(result))
        for (const auto& [measure, value] : stats)
            doc["stats"][metric][measure] = value;
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

void write_front_csv(const std::vector<ParetoPoint>& front, const RunMetadata& meta,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << "# invocation: " << meta.invocation << "\n";
    out << "# seed: " << meta.seed << "\n";
    out << "# config_hash: " << meta.config_hash << "\n";
    const std::size_t n_obj = front.empty() ? 0 : front.front().objectives.size();
    out << "T,W,zeta_min";
    for (std::size_t k = 1; k <= n_obj; ++k)
        out << ",obj_" << k;
    out << "\n";
    for (const auto& p : front) {
        out << fmt_double(p.params.T) << ',' << fmt_double(p.params.W) << ','
            << fmt_double(p.params.zeta_min);
        for (double v : p.objectives)
            out << ',' << fmt_double(v);
        out << "\n";
    }
}

void write_front_json(const std::vector<ParetoPoint>& front, const ObjectiveSpec& spec,
                      const RunMetadata& meta, const SearchStats& stats,
                      const std::string& path) {
    json doc;
    doc["metadata"] = meta_to_json(meta);
    doc["metadata"]["evaluations"] = stats.evaluations;
    doc["metadata"]["cache_hits"] = stats.cache_hits;
    json objectives = json::array();
    for (const auto& e : spec.entries) {
        json o;
        o["metric"] = metric_name(e.metric);
        o["measure"] = e.measure.to_string();
        objectives.push_back(std::move(o));
    }
    doc["objectives"] = std::move(objectives);
    json points = json::array();
    for (const auto& p : front) {
        json o;
        o["T"] = p.params.T;
        o["W"] = p.params.W;
        o["zeta_min"] = p.params.zeta_min;
        json thresholds = json::array();
        for (double t : p.resolved.thresholds)
            thresholds.push_back(std::isinf(t) ? json("inf") : json(t));
        o["thresholds"] = std::move(thresholds);
        o["weights"] = p.resolved.weights;
        o["objectives"] = p.objectives;
        points.push_back(std::move(o));
    }
    doc["points"] = std::move(points);
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

std::vector<ParetoPoint> load_front_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open front file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("front file '" + path + "': " + e.what());
    }
    if (!doc.contains("points") || !doc["points"].is_array())
        throw ParseError("front file '" + path + "': missing points array");
    std::vector<ParetoPoint> out;
    for (const auto& o : doc["points"]) {
        ParetoPoint p;
        p.params.T = o.at("T").get<double>();
        p.params.W = o.at("W").get<double>();
        p.params.zeta_min = o.at("zeta_min").get<double>();
        if (o.contains("thresholds")) {
            for (const auto& t : o["thresholds"])
                p.resolved.thresholds.push_back(
                    t.is_string() ? std::numeric_limits<double>::infinity() : t.get<double>());
            p.resolved.weights = o.at("weights").get<std::vector<double>>();
            p.resolved.zeta_min = p.params.zeta_min;
        }
        if (o.contains("objectives"))
            p.objectives = o["objectives"].get<std::vector<double>>();
        out.push_back(std::move(p));
    }
    return out;
}

ObjectiveSpec load_objective_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open objective spec '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("objective spec '" + path + "': " + e.what());
    }
    if (!doc.contains("objectives") || !doc["objectives"].is_array() ||
        doc["objectives"].empty())
        throw ParseError("objective spec '" + path + "': needs a non-empty objectives array");
    ObjectiveSpec spec;
    for (const auto& o : doc["objectives"]) {
        Objective entry;
        entry.metric = metric_from_string(o.at("metric").get<std::string>());
        entry.measure = measure_from_string(o.at("measure").get<std::string>());
        spec.entries.push_back(entry);
    }
    spec.validate();
    return spec;
}

void write_objective_spec(const ObjectiveSpec& spec, const std::string& path) {
    json doc;
    json objectives = json::array();
    for (const auto& e : spec.entries) {
        json o;
        o["metric"] = metric_name(e.metric);
        o["measure"] = e.measure.to_string();
        objectives.push_back(std::move(o));
    }
    doc["objectives"] = std::move(objectives);
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

} // namespace pcs
