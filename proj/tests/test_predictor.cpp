#include <doctest.h>

#include "pcs/baselines.hpp"
#include "pcs/predictor.hpp"
#include "pcs/wfq.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pcs;
using namespace pcs::test;

TEST_CASE("empty snapshot: prediction is the standalone execution time") {
    ClusterState state;
    state.capacity = 4.0;
    FifoPolicy policy;
    const Snapshot snap = take_snapshot(state, policy);
    SimConfig cfg;
    cfg.capacity = 4.0;
    const Job job = make_job("new", 0.0, 10.0, 4); // linear, speedup 4
    CHECK(predict_jct(snap, job, cfg) == doctest::Approx(2.5));
}

TEST_CASE("fifo snapshot: queue behind the running remainder") {
    ClusterState state;
    state.clock = 2.0;
    state.capacity = 1.0;
    JobRuntime running;
    running.job = make_job("old", 0.0, 5.0);
    running.accrued = 2.0; // 3 s remaining
    running.anchor = 2.0;
    running.allocation = 1.0;
    running.start_time = 0.0;
    state.active.push_back(running);
    FifoPolicy policy;
    const Snapshot snap = take_snapshot(state, policy);
    SimConfig cfg;
    cfg.capacity = 1.0;
    const Job job = make_job("new", 2.0, 2.0);
    CHECK(predict_jct(snap, job, cfg) == doctest::Approx(5.0));
}

TEST_CASE("prediction is a pure function of the snapshot") {
    const WorkloadModel model = random_model(0, 20, 4);
    const Trace trace = model.generate(8);
    SimConfig cfg;
    cfg.capacity = 4.0;
    cfg.enable_predictions = false;
    Snapshot snap;
    bool captured = false;
    cfg.on_event = [&](const ClusterState& state, const Policy& policy) {
        if (!captured && state.active.size() >= 3) {
            snap = take_snapshot(state, policy);
            captured = true;
        }
    };
    SrsfPolicy policy;
    run_simulation(trace, policy, cfg);
    REQUIRE(captured);
    const Job job = make_job("probe", snap.state.clock, 17.0, 2);
    const double a = predict_jct(snap, job, cfg);
    const double b = predict_jct(snap, job, cfg);
    CHECK(a == b);
    CHECK(snap.state.clock >= 0.0); // snapshot untouched by the playouts
}

TEST_CASE("fifo predictions are exact on every job") {
    for (std::uint64_t variant = 0; variant < 6; ++variant) {
        const WorkloadModel model = random_model(variant, 60, 8, variant >= 3);
        const Trace trace = model.generate(variant + 100);
        SimConfig cfg;
        cfg.capacity = 8.0;
        FifoPolicy policy;
        const SimResult res = run_simulation(trace, policy, cfg);
        for (const auto& rec : res.records)
            CHECK(rec.pred_err == 0.0); // exactly zero
    }
}

TEST_CASE("no arrivals after a job make its prediction exact, any policy") {
    for (std::uint64_t variant = 0; variant < 3; ++variant) {
        const WorkloadModel model = random_model(variant, 25, 4, variant == 2);
        const Trace trace = model.generate(variant + 60);
        for (const char* name : {"fifo", "srsf", "maxmin", "afs", "themis"}) {
            SimConfig cfg;
            cfg.capacity = 4.0;
            auto policy = make_baseline_policy(name);
            const SimResult res = run_simulation(trace, *policy, cfg);
            // the last arrival sees no future arrivals
            const std::string last_id = trace.jobs.back().id;
            for (const auto& rec : res.records)
                if (rec.id == last_id)
                    CHECK(rec.pred_err == 0.0);
        }
    }
}

TEST_CASE("pcs predictions are exact without future arrivals") {
    const WorkloadModel model = random_model(1, 25, 4, true);
    const Trace trace = model.generate(61);
    std::vector<double> sizes;
    for (const auto& job : trace.jobs)
        sizes.push_back(job.size);
    PcsParams params;
    params.T = 1.0;
    params.W = 1.0;
    params.zeta_min = 0.7;
    PcsPolicy policy(params, sizes);
    SimConfig cfg;
    cfg.capacity = 4.0;
    const SimResult res = run_simulation(trace, policy, cfg);
    const std::string last_id = trace.jobs.back().id;
    for (const auto& rec : res.records)
        if (rec.id == last_id)
            CHECK(rec.pred_err == 0.0);
}

TEST_CASE("prediction never under-runs the full-capacity execution time") {
    for (std::uint64_t variant = 0; variant < 4; ++variant) {
        const WorkloadModel model = random_model(variant, 40, 8, true);
        const Trace trace = model.generate(variant + 200);
        SimConfig cfg;
        cfg.capacity = 8.0;
        for (const char* name : {"fifo", "srsf", "maxmin", "afs"}) {
            auto policy = make_baseline_policy(name);
            const SimResult res = run_simulation(trace, *policy, cfg);
            for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
                const Job& job = trace.jobs[i];
                const double floor =
                    job.size /
                    job.demand->speedup(std::min(cfg.capacity,
                                                 static_cast<double>(job.max_alloc())));
                CHECK(res.records[i].jct_pred >= floor - 1e-9);
            }
        }
    }
}
