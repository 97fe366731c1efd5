#ifndef PCS_ENGINE_HPP
#define PCS_ENGINE_HPP

#include "pcs/job.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace pcs {

class Policy;
struct ClusterState;

struct SimConfig {
    double capacity = 1.0;
    double restart_overhead = 0.0; // seconds a job accrues nothing after losing allocation
    double lease_duration = 600.0; // used only by lease-based policies
    double epsilon = 1e-9;         // water-filling / conservation tolerance
    bool enable_predictions = true;
    bool record_plans = false;     // keep per-event allocation log in the result
    std::uint64_t max_events = 0;  // 0 = derived from trace length
    // Diagnostic hooks; neither fires inside prediction playouts.
    // on_schedule fires when the scheduler is about to be invoked
    // (departures and admissions processed, allocations still from the
    // previous plan) — the state a snapshot-and-replay must capture.
    // on_event fires after the plan is applied.
    std::function<void(const ClusterState&, const Policy&)> on_schedule;
    std::function<void(const ClusterState&, const Policy&)> on_event;
};

/// Per-job mutable state inside a run. Service accounting is anchored:
/// `accrued` is exact as of `anchor` and is re-anchored only when the
/// allocation changes, so inter-event arithmetic is independent of how
/// many unrelated events split an interval. That keeps snapshot playouts
/// bit-identical to the run they fork from.
struct JobRuntime {
    Job job;
    double accrued = 0.0; // service completed at reference allocation 1, as of `anchor`
    double anchor = 0.0;
    double allocation = 0.0;
    double restart_until = -std::numeric_limits<double>::infinity();
    double cap = 0.0; // policy-resolved allocation cap (defaults to max_alloc)
    int class_index = -1;
    double start_time = std::numeric_limits<double>::quiet_NaN();
    int preemptions = 0;
    int alloc_changes = 0;
    double jct_pred = std::numeric_limits<double>::quiet_NaN();

    double rate() const { return job.demand->speedup(allocation); }
    // Start of productive service given the restart blackout.
    double service_start() const { return anchor > restart_until ? anchor : restart_until; }
    double accrued_at(double now) const;
    double true_remaining(double now) const { return job.true_size - accrued_at(now); }
    double visible_remaining(double now) const;
    // Absolute finish time if the allocation never changed again; +inf when idle.
    double departure_time() const;
};

struct ClusterState {
    double clock = 0.0;
    double capacity = 0.0;
    std::vector<JobRuntime> active; // FIFO order: (arrival, id)
};

struct JobRecord {
    std::string id;
    double arrival = 0.0;
    double start = 0.0;
    double finish = 0.0;
    double jct = 0.0;
    double jct_pred = std::numeric_limits<double>::quiet_NaN();
    double pred_err = std::numeric_limits<double>::quiet_NaN(); // signed %
    double fft = std::numeric_limits<double>::quiet_NaN();      // filled by metrics
    double unfairness = std::numeric_limits<double>::quiet_NaN();
    int alloc_changes = 0;
    int preemptions = 0;
};

struct PlanRecord {
    double time = 0.0;
    std::vector<std::string> ids;
    std::vector<double> alloc;
    std::vector<double> rate; // effective service rate (0 during restart blackout)
};

struct SimResult {
    std::vector<JobRecord> records; // in (arrival, id) order
    std::string policy_name;
    double capacity = 0.0;
    std::uint64_t event_count = 0;
    // Conservation audit: service handed to jobs vs. the integral of
    // effective rates over time. Equal within 1e-6 relative on a sane run.
    double service_delivered = 0.0;
    double rate_integral = 0.0;
    std::vector<PlanRecord> plans; // only when record_plans
};

/// Deep copy of everything a forward replay needs: runtime state plus the
/// policy's internal state.
struct Snapshot {
    ClusterState state;
    std::unique_ptr<Policy> policy;

    Snapshot() = default;
    Snapshot(const Snapshot& other);
    Snapshot& operator=(const Snapshot& other);
    Snapshot(Snapshot&&) = default;
    Snapshot& operator=(Snapshot&&) = default;
};

Snapshot take_snapshot(const ClusterState& state, const Policy& policy);

// Runs the trace to completion under `policy`. Deterministic: the result is
// a pure function of (trace, policy, cfg).
SimResult run_simulation(const Trace& trace, Policy& policy, const SimConfig& cfg);

// Replays a snapshot forward with no further arrivals. Stops early once
// `until_job_id` (if non-empty) finishes. Predictions are disabled inside
// playouts.
SimResult playout(Snapshot snap, const SimConfig& cfg, const std::string& until_job_id = {});

} // namespace pcs

#endif
