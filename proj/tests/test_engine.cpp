#include <doctest.h>

#include "pcs/baselines.hpp"
#include "pcs/errors.hpp"
#include "pcs/metrics.hpp"
#include "pcs/wfq.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pcs;
using namespace pcs::test;

namespace {

SimResult run_with(const Trace& trace, const std::string& policy_name, double capacity,
                   double restart_overhead = 0.0, bool record_plans = false) {
    SimConfig cfg;
    cfg.capacity = capacity;
    cfg.restart_overhead = restart_overhead;
    cfg.record_plans = record_plans;
    auto policy = make_baseline_policy(policy_name);
    return run_simulation(trace, *policy, cfg);
}

const JobRecord& record_of(const SimResult& res, const std::string& id) {
    for (const auto& rec : res.records)
        if (rec.id == id)
            return rec;
    REQUIRE(false);
    return res.records.front();
}

} // namespace

TEST_CASE("single job on an empty cluster: exact jct, exact prediction") {
    const Trace trace = make_trace({make_job("j1", 0.0, 10.0)});
    const SimResult res = run_with(trace, "fifo", 1.0);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].jct == 10.0);
    CHECK(res.records[0].pred_err == 0.0);
}

TEST_CASE("fifo ties break by id; srsf runs the short job first") {
    const Trace trace = make_trace({make_job("a", 0.0, 4.0), make_job("b", 0.0, 2.0)});
    const SimResult fifo = run_with(trace, "fifo", 1.0);
    CHECK(record_of(fifo, "a").jct == 4.0);
    CHECK(record_of(fifo, "b").jct == 6.0);

    const SimResult srsf = run_with(trace, "srsf", 1.0);
    CHECK(record_of(srsf, "a").jct == 6.0);
    CHECK(record_of(srsf, "b").jct == 2.0);
}

TEST_CASE("departure time is the closed-form service ratio") {
    // same shape as {1 -> 100s, 2 -> 60s}: speedup(2) = 5/3
    Job job = make_job("j", 0.0, 5.0, 2);
    job.demand = std::make_shared<DemandFunction>(
        DemandFunction::from_table({{1, 5.0}, {2, 3.0}}));
    const Trace trace = make_trace({job});
    const SimResult res = run_with(trace, "maxmin", 2.0);
    CHECK(res.records[0].jct == doctest::Approx(5.0 / (5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("clock jumps across idle gaps") {
    const Trace trace = make_trace({make_job("a", 0.0, 1.0), make_job("b", 7.0, 1.0)});
    const SimResult res = run_with(trace, "fifo", 1.0, 0.0, true);
    CHECK(record_of(res, "b").start == 7.0);
    // events: two arrivals, two departures; no event between t=1 and t=7
    for (const auto& plan : res.plans)
        CHECK((plan.time <= 1.0 || plan.time >= 7.0));
}

TEST_CASE("lease ticks interleave with arrivals at the right times") {
    const Trace trace =
        make_trace({make_job("a", 0.0, 2000.0), make_job("b", 400.0, 2000.0)});
    SimConfig cfg;
    cfg.capacity = 1.0;
    cfg.lease_duration = 600.0;
    cfg.record_plans = true;
    ThemisPolicy policy;
    const SimResult res = run_simulation(trace, policy, cfg);
    std::vector<double> times;
    for (const auto& plan : res.plans)
        times.push_back(plan.time);
    // arrival at 400 precedes the first lease tick at 600
    CHECK(std::find(times.begin(), times.end(), 400.0) != times.end());
    CHECK(std::find(times.begin(), times.end(), 600.0) != times.end());
    CHECK(std::find(times.begin(), times.end(), 1200.0) != times.end());
}

TEST_CASE("snapshot is isolated from later mutation") {
    ClusterState state;
    state.clock = 5.0;
    state.capacity = 4.0;
    JobRuntime jr;
    jr.job = make_job("x", 0.0, 50.0, 2);
    jr.accrued = 10.0;
    jr.anchor = 5.0;
    jr.allocation = 2.0;
    state.active.push_back(jr);
    FifoPolicy policy;
    const Snapshot snap = take_snapshot(state, policy);
    state.active[0].accrued = 999.0;
    state.active[0].job.size = 1.0;
    CHECK(snap.state.active[0].accrued == 10.0);
    CHECK(snap.state.active[0].job.size == 50.0);
}

TEST_CASE("mid-run snapshot playout matches the rest of the run") {
    for (std::uint64_t variant = 0; variant < 4; ++variant) {
        const WorkloadModel model = random_model(variant, 40, 8, variant % 2 == 1);
        Trace trace = model.generate(variant + 10);
        // no arrivals after the cut, so the playout sees the same future
        const double cut = trace.jobs[trace.jobs.size() / 2].arrival;
        trace.jobs.erase(std::remove_if(trace.jobs.begin(), trace.jobs.end(),
                                        [&](const Job& j) { return j.arrival > cut; }),
                         trace.jobs.end());

        for (const char* name : {"fifo", "srsf", "maxmin", "afs", "themis"}) {
            SimConfig cfg;
            cfg.capacity = static_cast<double>(model.capacity);
            cfg.enable_predictions = false;

            Snapshot snap;
            bool captured = false;
            cfg.on_schedule = [&](const ClusterState& state, const Policy& policy) {
                if (!captured && state.clock >= cut) {
                    snap = take_snapshot(state, policy);
                    captured = true;
                }
            };
            auto policy = make_baseline_policy(name);
            const SimResult direct = run_simulation(trace, *policy, cfg);
            REQUIRE(captured);

            SimConfig playout_cfg = cfg;
            playout_cfg.on_schedule = nullptr;
            const SimResult replay = playout(std::move(snap), playout_cfg);
            for (const auto& rec : replay.records) {
                const auto& ref = record_of(direct, rec.id);
                CHECK(rec.finish == ref.finish);
            }
        }
    }
}

TEST_CASE("energy audit: delivered service equals the rate integral") {
    for (std::uint64_t variant = 0; variant < 6; ++variant) {
        const WorkloadModel model = random_model(variant, 60, 8, variant >= 3);
        const Trace trace = model.generate(variant + 1);
        for (const char* name : {"fifo", "srsf", "maxmin", "afs", "themis"}) {
            for (double overhead : {0.0, 2.0}) {
                const SimResult res =
                    run_with(trace, name, static_cast<double>(model.capacity), overhead);
                REQUIRE(res.records.size() == trace.jobs.size());
                CHECK(res.service_delivered ==
                      doctest::Approx(res.rate_integral).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("work conservation: capacity fully used while anyone is below max") {
    const WorkloadModel model = random_model(1, 50, 8);
    const Trace trace = model.generate(3);
    for (const char* name : {"fifo", "srsf", "maxmin", "afs"}) {
        SimConfig cfg;
        cfg.capacity = 8.0;
        cfg.on_event = [&](const ClusterState& state, const Policy&) {
            double total = 0.0;
            bool any_below_max = false;
            for (const auto& jr : state.active) {
                total += jr.allocation;
                if (jr.allocation < static_cast<double>(jr.job.max_alloc()) - 1e-9)
                    any_below_max = true;
            }
            CHECK(total <= state.capacity + 1e-9);
            if (any_below_max)
                CHECK(total == doctest::Approx(state.capacity).epsilon(1e-9));
        };
        auto policy = make_baseline_policy(name);
        run_simulation(trace, *policy, cfg);
    }
}

TEST_CASE("restart overhead stalls service after a preemption") {
    // b (size 2) preempts a (size 4, running) under srsf at t=1; with a
    // restart overhead of 1, a finishes at 4 (remaining 3) + 1 stall + ...
    const Trace trace = make_trace({make_job("a", 0.0, 4.0), make_job("b", 1.0, 2.0)});
    const SimResult none = run_with(trace, "srsf", 1.0, 0.0);
    CHECK(record_of(none, "b").jct == 2.0);
    CHECK(record_of(none, "a").jct == 6.0);

    const SimResult with = run_with(trace, "srsf", 1.0, 1.0);
    // a loses the unit at t=1 (1s of service done), waits for b (done t=3),
    // resumes after its blackout expired mid-queue, 3s of service remain
    CHECK(record_of(with, "b").jct == 2.0);
    CHECK(record_of(with, "a").jct == 6.0);
}

TEST_CASE("restart overhead delays service when the blackout outlives the preemption") {
    const Trace trace = make_trace({make_job("a", 0.0, 4.0), make_job("b", 1.0, 2.0)});
    const SimResult res = run_with(trace, "srsf", 1.0, 5.0);
    // a preempted at t=1; b finishes at 3; a's blackout runs to t=6, then 3s
    // of service remain -> finish 9
    CHECK(record_of(res, "b").jct == 2.0);
    CHECK(record_of(res, "a").jct == 9.0);
}

TEST_CASE("determinism: identical runs produce identical records") {
    const WorkloadModel model = random_model(2, 80, 8, true);
    const Trace trace = model.generate(21);
    for (const char* name : {"fifo", "srsf", "maxmin", "afs", "themis"}) {
        const SimResult a = run_with(trace, name, 8.0, 1.0);
        const SimResult b = run_with(trace, name, 8.0, 1.0);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t i = 0; i < a.records.size(); ++i) {
            CHECK(a.records[i].finish == b.records[i].finish);
            CHECK(a.records[i].jct_pred == b.records[i].jct_pred);
        }
    }
}

TEST_CASE("removing a job never hurts the others under fifo") {
    for (std::uint64_t variant = 0; variant < 4; ++variant) {
        const WorkloadModel model = random_model(variant, 30, 4);
        const Trace trace = model.generate(variant + 5);
        const SimResult base = run_with(trace, "fifo", 4.0);
        Trace reduced = trace;
        reduced.jobs.erase(reduced.jobs.begin() +
                           static_cast<std::ptrdiff_t>(reduced.jobs.size() / 2));
        const SimResult after = run_with(reduced, "fifo", 4.0);
        for (const auto& rec : after.records) {
            const auto& before = record_of(base, rec.id);
            CHECK(rec.jct <= before.jct + 1e-9);
        }
    }
}

namespace {

// Brute-force reference: fixed-step integration of the same policy,
// independent of the engine's analytic event math. Zero overhead, no
// leases; callers pick policies whose ordering cannot flap mid-step.
std::map<std::string, double> stepped_oracle(const Trace& trace, Policy& policy,
                                             double capacity, double dt) {
    std::map<std::string, double> finish;
    ClusterState state;
    state.capacity = capacity;
    SimConfig cfg;
    cfg.capacity = capacity;
    std::size_t next = 0;
    double now = 0.0;
    std::vector<double> remaining;
    while (next < trace.jobs.size() || !state.active.empty()) {
        while (next < trace.jobs.size() && trace.jobs[next].arrival <= now + 1e-12) {
            JobRuntime jr;
            jr.job = trace.jobs[next];
            jr.anchor = now;
            jr.cap = static_cast<double>(jr.job.max_alloc());
            policy.on_admit(jr, state, cfg);
            auto pos = std::upper_bound(
                state.active.begin(), state.active.end(), jr,
                [](const JobRuntime& a, const JobRuntime& b) {
                    if (a.job.arrival != b.job.arrival)
                        return a.job.arrival < b.job.arrival;
                    return a.job.id < b.job.id;
                });
            const auto offset = pos - state.active.begin();
            state.active.insert(pos, jr);
            remaining.insert(remaining.begin() + offset, jr.job.true_size);
            ++next;
        }
        if (state.active.empty()) {
            if (next < trace.jobs.size()) {
                now = trace.jobs[next].arrival;
                continue;
            }
            break;
        }
        // keep runtimes consistent for policies that read accrued service
        for (std::size_t i = 0; i < state.active.size(); ++i) {
            state.active[i].accrued = state.active[i].job.true_size - remaining[i];
            state.active[i].anchor = now;
        }
        state.clock = now;
        const auto plan = policy.allocate(state, cfg);
        for (std::size_t i = 0; i < state.active.size(); ++i)
            state.active[i].allocation = plan[i];
        double step = dt;
        if (next < trace.jobs.size())
            step = std::min(step, trace.jobs[next].arrival - now + 1e-12);
        for (std::size_t i = state.active.size(); i-- > 0;) {
            const double rate = state.active[i].job.demand->speedup(plan[i]);
            remaining[i] -= rate * step;
            if (remaining[i] <= 1e-12) {
                // back out the overshoot for a sharper finish estimate
                const double overshoot = rate > 0.0 ? -remaining[i] / rate : 0.0;
                finish[state.active[i].job.id] = now + step - overshoot;
                state.active.erase(state.active.begin() + static_cast<std::ptrdiff_t>(i));
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        now += step;
    }
    return finish;
}

} // namespace

TEST_CASE("event-driven engine matches a fixed-step reference integrator") {
    for (std::uint64_t variant = 0; variant < 3; ++variant) {
        WorkloadModel model = random_model(variant, 12, 4, variant == 1);
        model.size_dist = SizeDist::light_tailed(30.0);
        const Trace trace = model.generate(variant + 300);

        std::vector<double> sizes;
        for (const auto& job : trace.jobs)
            sizes.push_back(job.size);
        PcsParams params;
        params.T = 0.4;
        params.W = 1.0;
        params.zeta_min = 0.5;

        std::vector<std::unique_ptr<Policy>> policies;
        policies.push_back(std::make_unique<FifoPolicy>());
        policies.push_back(std::make_unique<MaxMinPolicy>());
        policies.push_back(std::make_unique<PcsPolicy>(params, sizes));
        for (auto& policy : policies) {
            SimConfig cfg;
            cfg.capacity = 4.0;
            cfg.enable_predictions = false;
            const SimResult res = run_simulation(trace, *policy->clone(), cfg);
            const auto oracle = stepped_oracle(trace, *policy->clone(), 4.0, 0.002);
            REQUIRE(oracle.size() == res.records.size());
            for (const auto& rec : res.records) {
                CHECK(rec.finish ==
                      doctest::Approx(oracle.at(rec.id)).epsilon(1e-3).scale(1.0));
            }
        }
    }
}

TEST_CASE("event budget guard aborts runaway runs") {
    const Trace trace = make_trace({make_job("a", 0.0, 4.0), make_job("b", 0.0, 2.0)});
    SimConfig cfg;
    cfg.capacity = 1.0;
    cfg.max_events = 2;
    FifoPolicy policy;
    CHECK_THROWS_AS(run_simulation(trace, policy, cfg), InvariantError);
}

TEST_CASE("over-capacity plans are rejected with a diagnostic") {
    struct GreedyPolicy final : Policy {
        std::string name() const override { return "greedy"; }
        std::vector<double> allocate(const ClusterState& state, const SimConfig&) override {
            return std::vector<double>(state.active.size(), 1e9);
        }
        std::unique_ptr<Policy> clone() const override {
            return std::make_unique<GreedyPolicy>(*this);
        }
    };
    const Trace trace = make_trace({make_job("a", 0.0, 4.0, 4)});
    SimConfig cfg;
    cfg.capacity = 2.0;
    cfg.enable_predictions = false;
    GreedyPolicy policy;
    CHECK_THROWS_AS(run_simulation(trace, policy, cfg), InvariantError);
}
