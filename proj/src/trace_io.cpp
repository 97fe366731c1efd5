#include "pcs/trace_io.hpp"

#include "pcs/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace pcs {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, const std::string& what, std::size_t row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ": bad " + what + " '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what, std::size_t row) {
    const double v = parse_double(s, what, row);
    if (v < 1.0 || v != std::floor(v))
        throw ParseError("row " + std::to_string(row) + ": " + what +
                         " must be a positive integer, got '" + s + "'");
    return static_cast<int>(v);
}

// Exec-time table keyed by allocation, rescaled so exec(1) == size: the
// table contributes the scaling shape, the size column stays authoritative.
DemandPtr demand_from_exec_map(const std::map<int, double>& exec, int max_gpus, double size,
                               const std::string& job_id) {
    auto it1 = exec.find(1);
    if (it1 == exec.end())
        throw ValidationError("job '" + job_id + "': demand table must include allocation 1");
    if (it1->second <= 0.0)
        throw ValidationError("job '" + job_id + "': demand exec time at 1 must be positive");
    const double rescale = size / it1->second;
    std::vector<DemandPoint> points;
    points.reserve(exec.size());
    for (const auto& [alloc, t] : exec) {
        if (alloc > max_gpus)
            throw ValidationError("job '" + job_id + "': demand allocation " +
                                  std::to_string(alloc) + " exceeds max_gpus");
        points.push_back({alloc, t * rescale});
    }
    if (points.back().alloc != max_gpus)
        throw ValidationError("job '" + job_id + "': demand table must reach max_gpus");
    try {
        return std::make_shared<DemandFunction>(DemandFunction::from_table(std::move(points)));
    } catch (const ValidationError& e) {
        throw ValidationError("job '" + job_id + "': " + e.what());
    }
}

std::map<int, double> exec_map_from_json(const json& obj, const std::string& job_id) {
    std::map<int, double> exec;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        int alloc = 0;
        try {
            std::size_t pos = 0;
            alloc = std::stoi(it.key(), &pos);
            if (pos != it.key().size())
                throw std::invalid_argument(it.key());
        } catch (const std::exception&) {
            throw ParseError("job '" + job_id + "': demand key '" + it.key() +
                             "' is not an integer allocation");
        }
        if (!it.value().is_number())
            throw ParseError("job '" + job_id + "': demand value for allocation " +
                             std::to_string(alloc) + " is not a number");
        exec[alloc] = it.value().get<double>();
    }
    return exec;
}

Trace load_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open trace file '" + path + "'");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty trace file '" + path + "'");
    // header: job_id,arrival,size,max_gpus[,speedup_file]
    std::map<std::string, json> sidecars;
    Trace trace;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#')
            continue;
        const auto fields = split_csv_row(line);
        if (fields.size() < 4)
            throw ParseError("row " + std::to_string(row) + ": expected at least 4 columns");
        Job job;
        job.id = fields[0];
        job.arrival = parse_double(fields[1], "arrival", row);
        job.size = parse_double(fields[2], "size", row);
        const int max_gpus = parse_int(fields[3], "max_gpus", row);
        if (job.size <= 0.0)
            throw ValidationError("row " + std::to_string(row) + ": non-positive size");
        if (job.arrival < 0.0)
            throw ValidationError("row " + std::to_string(row) + ": negative arrival");
        job.true_size = job.size;

        std::string speedup_file;
        if (fields.size() >= 5)
            speedup_file = fields[4];
        if (!speedup_file.empty()) {
            if (!sidecars.count(speedup_file)) {
                const auto full = base / speedup_file;
                std::ifstream sf(full);
                if (!sf)
                    throw ParseError("row " + std::to_string(row) + ": cannot open speedup file '" +
                                     full.string() + "'");
                try {
                    sidecars[speedup_file] = json::parse(sf);
                } catch (const json::parse_error& e) {
                    throw ParseError("speedup file '" + full.string() + "': " + e.what());
                }
            }
            const json& sidecar = sidecars[speedup_file];
            if (!sidecar.contains(job.id))
                throw ValidationError("row " + std::to_string(row) + ": speedup file has no entry for job '" +
                                      job.id + "'");
            try {
                job.demand = demand_from_exec_map(exec_map_from_json(sidecar[job.id], job.id),
                                                  max_gpus, job.size, job.id);
            } catch (const ValidationError& e) {
                throw ValidationError("row " + std::to_string(row) + ": " + e.what());
            }
        } else {
            job.demand = make_linear_demand(max_gpus, job.size);
        }
        trace.jobs.push_back(std::move(job));
    }
    finalize_trace(trace);
    return trace;
}

Trace load_trace_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open trace file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("trace file '" + path + "': " + e.what());
    }
    const json* jobs = nullptr;
    Trace trace;
    if (doc.is_array()) {
        jobs = &doc;
    } else if (doc.is_object() && doc.contains("jobs")) {
        jobs = &doc["jobs"];
        if (doc.contains("capacity_hint"))
            trace.capacity_hint = doc["capacity_hint"].get<int>();
        if (doc.contains("seed"))
            trace.seed = doc["seed"].get<std::uint64_t>();
    } else {
        throw ParseError("trace file '" + path + "': expected an array of jobs");
    }
    std::size_t row = 0;
    for (const auto& obj : *jobs) {
        ++row;
        if (!obj.is_object())
            throw ParseError("job " + std::to_string(row) + ": not an object");
        for (const char* key : {"job_id", "arrival", "size", "max_gpus"})
            if (!obj.contains(key))
                throw ParseError("job " + std::to_string(row) + ": missing field '" + key + "'");
        Job job;
        job.id = obj["job_id"].get<std::string>();
        job.arrival = obj["arrival"].get<double>();
        job.size = obj["size"].get<double>();
        const int max_gpus = obj["max_gpus"].get<int>();
        if (job.size <= 0.0)
            throw ValidationError("job " + std::to_string(row) + ": non-positive size");
        job.true_size = obj.contains("true_size") ? obj["true_size"].get<double>() : job.size;
        if (obj.contains("demand") && !obj["demand"].is_null())
            job.demand = demand_from_exec_map(exec_map_from_json(obj["demand"], job.id),
                                              max_gpus, job.size, job.id);
        else
            job.demand = make_linear_demand(max_gpus, job.size);
        trace.jobs.push_back(std::move(job));
    }
    finalize_trace(trace);
    return trace;
}

json demand_to_json(const DemandFunction& df) {
    json out = json::object();
    for (const auto& p : df.points()) {
        char key[16];
        std::snprintf(key, sizeof(key), "%d", p.alloc);
        out[key] = p.exec_time;
    }
    return out;
}

} // namespace

TraceFormat trace_format_from_string(const std::string& s) {
    if (s == "csv")
        return TraceFormat::Csv;
    if (s == "json")
        return TraceFormat::Json;
    throw ValidationError("unknown trace format '" + s + "' (expected csv|json)");
}

Trace load_trace(const std::string& path, TraceFormat format) {
    return format == TraceFormat::Csv ? load_trace_csv(path) : load_trace_json(path);
}

namespace {

bool is_linear_demand(const DemandFunction& df) {
    for (const auto& p : df.points())
        if (df.speedup(static_cast<double>(p.alloc)) != static_cast<double>(p.alloc))
            return false;
    return true;
}

} // namespace

void save_trace_csv(const Trace& trace, const std::string& path) {
    // jobs with non-linear scaling keep their tables in a sidecar next to
    // the csv, so the trace round-trips
    json sidecar = json::object();
    for (const auto& job : trace.jobs)
        if (!is_linear_demand(*job.demand))
            sidecar[job.id] = demand_to_json(*job.demand);
    std::string sidecar_name;
    if (!sidecar.empty()) {
        const std::filesystem::path p(path);
        sidecar_name = p.filename().string() + ".speedups.json";
        std::ofstream sout(p.parent_path() / sidecar_name);
        if (!sout)
            throw ParseError("cannot write speedup sidecar for '" + path + "'");
        sout << sidecar.dump(2) << "\n";
    }

    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write trace file '" + path + "'");
    out << "job_id,arrival,size,max_gpus,speedup_file\n";
    char buf[200];
    for (const auto& job : trace.jobs) {
        const bool tabulated = !sidecar.empty() && sidecar.contains(job.id);
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%d,%s\n", job.id.c_str(), job.arrival,
                      job.size, job.max_alloc(), tabulated ? sidecar_name.c_str() : "");
        out << buf;
    }
}

void save_trace_json(const Trace& trace, const std::string& path) {
    json jobs = json::array();
    for (const auto& job : trace.jobs) {
        json obj;
        obj["job_id"] = job.id;
        obj["arrival"] = job.arrival;
        obj["size"] = job.size;
        obj["true_size"] = job.true_size;
        obj["max_gpus"] = job.max_alloc();
        obj["demand"] = demand_to_json(*job.demand);
        jobs.push_back(std::move(obj));
    }
    json doc;
    doc["jobs"] = std::move(jobs);
    if (trace.capacity_hint)
        doc["capacity_hint"] = *trace.capacity_hint;
    if (trace.seed)
        doc["seed"] = *trace.seed;
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write trace file '" + path + "'");
    out << doc.dump(2) << "\n";
}

} // namespace pcs
