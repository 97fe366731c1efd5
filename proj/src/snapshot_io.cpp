#include "pcs/snapshot_io.hpp"

#include "pcs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace pcs {

namespace {
using nlohmann::json;
}

ClusterState load_cluster_state(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open snapshot '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("snapshot '" + path + "': " + e.what());
    }
    ClusterState state;
    state.clock = doc.value("clock", 0.0);
    if (!doc.contains("capacity"))
        throw ParseError("snapshot '" + path + "': missing capacity");
    state.capacity = doc["capacity"].get<double>();
    if (doc.contains("jobs")) {
        for (const auto& o : doc["jobs"]) {
            JobRuntime jr;
            jr.job.id = o.at("id").get<std::string>();
            jr.job.arrival = o.value("arrival", 0.0);
            jr.job.size = o.at("size").get<double>();
            jr.job.true_size = o.value("true_size", jr.job.size);
            const int max_gpus = o.value("max_gpus", 1);
            if (o.contains("demand") && !o["demand"].is_null()) {
                std::vector<DemandPoint> points;
                for (auto it = o["demand"].begin(); it != o["demand"].end(); ++it)
                    points.push_back({std::stoi(it.key()), it.value().get<double>()});
                std::sort(points.begin(), points.end(),
                          [](const DemandPoint& a, const DemandPoint& b) {
                              return a.alloc < b.alloc;
                          });
                jr.job.demand = std::make_shared<DemandFunction>(
                    DemandFunction::from_table(std::move(points)));
            } else {
                jr.job.demand = make_linear_demand(max_gpus, jr.job.size);
            }
            jr.accrued = o.value("accrued", 0.0);
            jr.anchor = state.clock;
            jr.allocation = o.value("allocation", 0.0);
            jr.cap = static_cast<double>(jr.job.max_alloc());
            if (jr.allocation > 0.0)
                jr.start_time = jr.job.arrival;
            state.active.push_back(std::move(jr));
        }
    }
    std::sort(state.active.begin(), state.active.end(),
              [](const JobRuntime& a, const JobRuntime& b) {
                  if (a.job.arrival != b.job.arrival)
                      return a.job.arrival < b.job.arrival;
                  return a.job.id < b.job.id;
              });
    return state;
}

void save_cluster_state(const ClusterState& state, const std::string& path) {
    json doc;
    doc["clock"] = state.clock;
    doc["capacity"] = state.capacity;
    json jobs = json::array();
    for (const auto& jr : state.active) {
        json o;
        o["id"] = jr.job.id;
        o["arrival"] = jr.job.arrival;
        o["size"] = jr.job.size;
        o["true_size"] = jr.job.true_size;
        o["max_gpus"] = jr.job.max_alloc();
        o["accrued"] = jr.accrued_at(state.clock);
        o["allocation"] = jr.allocation;
        json demand = json::object();
        for (const auto& p : jr.job.demand->points()) {
            char key[16];
            std::snprintf(key, sizeof(key), "%d", p.alloc);
            demand[key] = p.exec_time;
        }
        o["demand"] = std::move(demand);
        jobs.push_back(std::move(o));
    }
    doc["jobs"] = std::move(jobs);
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write snapshot '" + path + "'");
    out << doc.dump(2) << "\n";
}

} // namespace pcs
