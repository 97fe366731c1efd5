#include "pcs/engine.hpp"

#include "pcs/errors.hpp"
#include "pcs/policy.hpp"
#include "pcs/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVisibleFloor = 1e-9; // remaining-service floor for overrun jobs
} // namespace

double JobRuntime::accrued_at(double now) const {
    const double from = service_start();
    if (now <= from || allocation <= 0.0)
        return accrued;
    return accrued + rate() * (now - from);
}

double JobRuntime::visible_remaining(double now) const {
    const double rem = job.size - accrued_at(now);
    return rem > kVisibleFloor ? rem : kVisibleFloor;
}

double JobRuntime::departure_time() const {
    if (allocation <= 0.0)
        return kInf;
    const double r = rate();
    if (r <= 0.0)
        return kInf;
    return service_start() + (job.true_size - accrued) / r;
}

Snapshot::Snapshot(const Snapshot& other)
    : state(other.state), policy(other.policy ? other.policy->clone() : nullptr) {}

Snapshot& Snapshot::operator=(const Snapshot& other) {
    if (this != &other) {
        state = other.state;
        policy = other.policy ? other.policy->clone() : nullptr;
    }
    return *this;
}

Snapshot take_snapshot(const ClusterState& state, const Policy& policy) {
    Snapshot snap;
    snap.state = state;
    snap.policy = policy.clone();
    return snap;
}

namespace {

class Engine {
public:
    Engine(ClusterState state, Policy& policy, const SimConfig& cfg, std::uint64_t event_budget)
        : state_(std::move(state)), policy_(policy), cfg_(cfg), event_budget_(event_budget) {}

    // `arrivals` must be sorted by (arrival, id). Runs until the arrival
    // stream and the cluster are drained, or `until_id` finishes.
    SimResult drive(const std::vector<Job>& arrivals, const std::string& until_id) {
        next_arrival_ = 0;
        if (!state_.active.empty())
            apply_plan(state_.clock); // playouts start from a mid-run state
        while (next_arrival_ < arrivals.size() || !state_.active.empty()) {
            if (++result_.event_count > event_budget_)
                throw InvariantError("simulation exceeded its event budget (" +
                                     std::to_string(event_budget_) + ")");
            const double t_arr =
                next_arrival_ < arrivals.size() ? arrivals[next_arrival_].arrival : kInf;
            double t_dep = kInf;
            for (const auto& jr : state_.active)
                t_dep = std::min(t_dep, jr.departure_time());
            const double t_lease = next_lease_tick();
            const double t = std::min({t_arr, t_dep, t_lease});
            if (!std::isfinite(t))
                throw InvariantError("no next event while jobs remain active");

            integrate_rates(t);
            state_.clock = t;

            bool finished_target = false;
            if (t_dep == t)
                finished_target = finalize_departures(t, until_id);
            if (finished_target)
                return finish_result();
            while (next_arrival_ < arrivals.size() && arrivals[next_arrival_].arrival == t)
                admit(arrivals[next_arrival_++]);

            if (cfg_.on_schedule)
                cfg_.on_schedule(state_, policy_);
            apply_plan(t);
            if (cfg_.on_event)
                cfg_.on_event(state_, policy_);
        }
        return finish_result();
    }

private:
    // Stateless tick schedule at multiples of lease_duration: identical in a
    // run and in any playout forked from it.
    double next_lease_tick() const {
        if (!policy_.needs_lease() || state_.active.empty())
            return kInf;
        double k = std::floor(state_.clock / cfg_.lease_duration) + 1.0;
        double tick = k * cfg_.lease_duration;
        while (tick <= state_.clock) {
            k += 1.0;
            tick = k * cfg_.lease_duration;
        }
        return tick;
    }

    // Accumulates the audit integral of effective service rates over
    // [clock, t]; per-job accrual itself stays anchored.
    void integrate_rates(double t) {
        for (const auto& jr : state_.active) {
            if (jr.allocation <= 0.0)
                continue;
            const double from = std::max(state_.clock, jr.service_start());
            if (t > from)
                result_.rate_integral += jr.rate() * (t - from);
        }
    }

    bool finalize_departures(double t, const std::string& until_id) {
        bool finished_target = false;
        // departure order: by id among simultaneous finishers
        std::vector<std::size_t> done;
        for (std::size_t i = 0; i < state_.active.size(); ++i)
            if (state_.active[i].departure_time() <= t)
                done.push_back(i);
        std::sort(done.begin(), done.end(), [&](std::size_t a, std::size_t b) {
            return state_.active[a].job.id < state_.active[b].job.id;
        });
        for (std::size_t idx : done) {
            JobRuntime& jr = state_.active[idx];
            JobRecord rec;
            rec.id = jr.job.id;
            rec.arrival = jr.job.arrival;
            rec.start = std::isnan(jr.start_time) ? jr.job.arrival : jr.start_time;
            rec.finish = t;
            rec.jct = t - jr.job.arrival;
            rec.jct_pred = jr.jct_pred;
            if (jr.jct_pred > 0.0)
                rec.pred_err = 100.0 * (rec.jct - jr.jct_pred) / jr.jct_pred;
            rec.alloc_changes = jr.alloc_changes;
            rec.preemptions = jr.preemptions;
            result_.records.push_back(std::move(rec));
            result_.service_delivered += jr.job.true_size;
            if (jr.job.id == until_id)
                finished_target = true;
        }
        // erase by index, descending, so earlier indices stay valid
        std::sort(done.begin(), done.end());
        for (auto it = done.rbegin(); it != done.rend(); ++it)
            state_.active.erase(state_.active.begin() + static_cast<std::ptrdiff_t>(*it));
        return finished_target;
    }

    void admit(const Job& job) {
        if (cfg_.enable_predictions) {
            Snapshot snap = take_snapshot(state_, policy_);
            last_admitted_pred_ = predict_jct(snap, job, cfg_);
        }
        JobRuntime jr;
        jr.job = job;
        jr.accrued = 0.0;
        jr.anchor = state_.clock;
        jr.allocation = 0.0;
        jr.cap = static_cast<double>(job.max_alloc());
        jr.jct_pred = cfg_.enable_predictions ? last_admitted_pred_
                                              : std::numeric_limits<double>::quiet_NaN();
        policy_.on_admit(jr, state_, cfg_);
        // keep FIFO order: (arrival, id)
        auto pos = std::upper_bound(state_.active.begin(), state_.active.end(), jr,
                                    [](const JobRuntime& a, const JobRuntime& b) {
                                        if (a.job.arrival != b.job.arrival)
                                            return a.job.arrival < b.job.arrival;
                                        return a.job.id < b.job.id;
                                    });
        state_.active.insert(pos, std::move(jr));
    }

    void apply_plan(double t) {
        if (state_.active.empty())
            return;
        std::vector<double> plan = policy_.allocate(state_, cfg_);
        if (plan.size() != state_.active.size())
            throw InvariantError("policy '" + policy_.name() + "' returned a plan of size " +
                                 std::to_string(plan.size()) + " for " +
                                 std::to_string(state_.active.size()) + " jobs");
        double total = 0.0;
        for (std::size_t i = 0; i < plan.size(); ++i) {
            JobRuntime& jr = state_.active[i];
            const double a = plan[i];
            const double max_a = static_cast<double>(jr.job.max_alloc());
            if (a < -1e-12 || a > max_a + 1e-9)
                throw InvariantError("policy '" + policy_.name() + "' allocated " +
                                     std::to_string(a) + " to job " + jr.job.id +
                                     " (max " + std::to_string(max_a) + ")");
            total += a;
        }
        if (total > state_.capacity * (1.0 + 1e-9) + 1e-9)
            throw InvariantError("policy '" + policy_.name() + "' exceeded capacity: " +
                                 std::to_string(total) + " > " +
                                 std::to_string(state_.capacity));
        for (std::size_t i = 0; i < plan.size(); ++i) {
            JobRuntime& jr = state_.active[i];
            const double next = plan[i];
            if (next == jr.allocation)
                continue; // unchanged: keep the anchor so arithmetic stays replayable
            jr.accrued = jr.accrued_at(t);
            jr.anchor = t;
            if (jr.allocation > 0.0 && next < jr.allocation && cfg_.restart_overhead > 0.0) {
                jr.restart_until = t + cfg_.restart_overhead;
                ++jr.preemptions;
            }
            jr.allocation = next;
            ++jr.alloc_changes;
            if (next > 0.0 && std::isnan(jr.start_time))
                jr.start_time = t;
        }
        if (cfg_.record_plans) {
            PlanRecord pr;
            pr.time = t;
            for (const auto& jr : state_.active) {
                pr.ids.push_back(jr.job.id);
                pr.alloc.push_back(jr.allocation);
                pr.rate.push_back(t >= jr.restart_until ? jr.rate() : 0.0);
            }
            result_.plans.push_back(std::move(pr));
        }
    }

    SimResult finish_result() {
        for (const auto& jr : state_.active)
            result_.service_delivered += jr.accrued_at(state_.clock);
        result_.policy_name = policy_.name();
        result_.capacity = state_.capacity;
        std::sort(result_.records.begin(), result_.records.end(),
                  [](const JobRecord& a, const JobRecord& b) {
                      if (a.arrival != b.arrival)
                          return a.arrival < b.arrival;
                      return a.id < b.id;
                  });
        return std::move(result_);
    }

    ClusterState state_;
    Policy& policy_;
    const SimConfig& cfg_;
    std::uint64_t event_budget_;
    std::size_t next_arrival_ = 0;
    double last_admitted_pred_ = std::numeric_limits<double>::quiet_NaN();
    SimResult result_;
};

std::uint64_t default_event_budget(std::size_t n_jobs, const SimConfig& cfg) {
    if (cfg.max_events > 0)
        return cfg.max_events;
    return 100000 + 2000 * static_cast<std::uint64_t>(n_jobs);
}

} // namespace

SimResult run_simulation(const Trace& trace, Policy& policy, const SimConfig& cfg) {
    if (cfg.capacity <= 0.0)
        throw ValidationError("capacity must be positive");
    ClusterState state;
    state.capacity = cfg.capacity;
    Engine engine(std::move(state), policy, cfg,
                  default_event_budget(trace.jobs.size(), cfg));
    return engine.drive(trace.jobs, {});
}

SimResult playout(Snapshot snap, const SimConfig& cfg, const std::string& until_job_id) {
    SimConfig pcfg = cfg;
    pcfg.enable_predictions = false;
    pcfg.record_plans = false;
    pcfg.on_schedule = nullptr;
    pcfg.on_event = nullptr;
    const std::uint64_t budget = default_event_budget(snap.state.active.size() + 1, pcfg);
    Engine engine(std::move(snap.state), *snap.policy, pcfg, budget);
    static const std::vector<Job> no_arrivals;
    return engine.drive(no_arrivals, until_job_id);
}

} // namespace pcs
