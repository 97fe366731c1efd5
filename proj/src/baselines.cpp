#include "pcs/baselines.hpp"

#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> water_fill(const std::vector<double>& caps, double capacity) {
    const std::size_t n = caps.size();
    std::vector<double> alloc(n, 0.0);
    if (n == 0)
        return alloc;
    double total_cap = 0.0;
    for (double c : caps)
        total_cap += c;
    if (total_cap <= capacity) {
        return caps;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return caps[a] < caps[b]; });
    // Find the level L with sum(min(cap_i, L)) = capacity.
    double spent = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double candidates_left = static_cast<double>(n - k);
        level = (capacity - spent) / candidates_left;
        if (level <= caps[order[k]])
            break;
        spent += caps[order[k]];
    }
    for (std::size_t i = 0; i < n; ++i)
        alloc[i] = std::min(caps[i], level);
    return alloc;
}

std::vector<double> FifoPolicy::allocate(const ClusterState& state, const SimConfig&) {
    std::vector<double> plan(state.active.size(), 0.0);
    double residual = state.capacity;
    for (std::size_t i = 0; i < state.active.size(); ++i) {
        const double give =
            std::min(residual, static_cast<double>(state.active[i].job.max_alloc()));
        plan[i] = give;
        residual -= give;
    }
    return plan;
}

std::unique_ptr<Policy> FifoPolicy::clone() const {
    return std::make_unique<FifoPolicy>(*this);
}

std::vector<double> SrsfPolicy::allocate(const ClusterState& state, const SimConfig&) {
    const double now = state.clock;
    std::vector<std::size_t> order(state.active.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const JobRuntime& ja = state.active[a];
        const JobRuntime& jb = state.active[b];
        const double ra = ja.visible_remaining(now);
        const double rb = jb.visible_remaining(now);
        if (ra != rb)
            return ra < rb;
        if (ja.job.arrival != jb.job.arrival)
            return ja.job.arrival < jb.job.arrival;
        return ja.job.id < jb.job.id;
    });
    std::vector<double> plan(state.active.size(), 0.0);
    double residual = state.capacity;
    for (std::size_t i : order) {
        const double give =
            std::min(residual, static_cast<double>(state.active[i].job.max_alloc()));
        plan[i] = give;
        residual -= give;
    }
    return plan;
}

std::unique_ptr<Policy> SrsfPolicy::clone() const {
    return std::make_unique<SrsfPolicy>(*this);
}

std::vector<double> MaxMinPolicy::allocate(const ClusterState& state, const SimConfig&) {
    std::vector<double> caps(state.active.size());
    for (std::size_t i = 0; i < state.active.size(); ++i)
        caps[i] = static_cast<double>(state.active[i].job.max_alloc());
    return water_fill(caps, state.capacity);
}

std::unique_ptr<Policy> MaxMinPolicy::clone() const {
    return std::make_unique<MaxMinPolicy>(*this);
}

void ThemisPolicy::on_admit(JobRuntime& jr, const ClusterState& state, const SimConfig& cfg) {
    advance_shadow(state.clock, cfg.capacity);
    ShadowJob sj;
    sj.id = jr.job.id;
    sj.arrival = jr.job.arrival;
    sj.remaining = jr.job.size;
    sj.demand = jr.job.demand;
    shadow_active_.push_back(std::move(sj));
}

namespace {

// One fluid Max-Min step from absolute time `clock`: fills allocations,
// advances every job by min(dt_limit, earliest departure), erases exactly
// the jobs that hit zero and reports them with their absolute finish time.
// Returns the new clock.
template <typename JobVec, typename OnFinish>
double maxmin_step(JobVec& jobs, double capacity, double clock, double dt_limit,
                   OnFinish on_finish) {
    std::vector<double> caps(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i)
        caps[i] = static_cast<double>(jobs[i].demand->max_alloc());
    const std::vector<double> alloc = water_fill(caps, capacity);
    std::vector<double> dep(jobs.size(), kInf);
    double next_dep = kInf;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const double rate = jobs[i].demand->speedup(alloc[i]);
        if (rate > 0.0) {
            dep[i] = std::max(jobs[i].remaining, 0.0) / rate;
            next_dep = std::min(next_dep, dep[i]);
        }
    }
    if (!std::isfinite(next_dep) && !std::isfinite(dt_limit))
        throw InvariantError("fluid max-min replay stalled");
    const double dt = std::min(next_dep, dt_limit);
    const double now = clock + dt;
    for (std::size_t i = jobs.size(); i-- > 0;) {
        jobs[i].remaining -= jobs[i].demand->speedup(alloc[i]) * dt;
        if (dep[i] <= dt) {
            on_finish(jobs[i].id, now);
            jobs.erase(jobs.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    return now;
}

} // namespace

void ThemisPolicy::advance_shadow(double to, double capacity) {
    std::size_t guard = shadow_active_.size() + 16;
    while (shadow_clock_ < to && !shadow_active_.empty()) {
        if (guard-- == 0)
            throw InvariantError("shadow replay exceeded its step budget");
        bool any_finished = false;
        shadow_clock_ = maxmin_step(shadow_active_, capacity, shadow_clock_,
                                    to - shadow_clock_,
                                    [&](const std::string& id, double finish) {
                                        shadow_finished_[id] = finish;
                                        any_finished = true;
                                    });
        if (!any_finished)
            break; // advanced the full interval without a departure
    }
    shadow_clock_ = std::max(shadow_clock_, to);
}

std::map<std::string, double> ThemisPolicy::shadow_finish_times(double capacity) const {
    std::map<std::string, double> fft = shadow_finished_;
    std::vector<ShadowJob> jobs = shadow_active_;
    double clock = shadow_clock_;
    std::size_t guard = jobs.size() + 4;
    while (!jobs.empty()) {
        if (guard-- == 0)
            throw InvariantError("shadow playout exceeded its step budget");
        clock = maxmin_step(jobs, capacity, clock, kInf,
                            [&](const std::string& id, double finish) { fft[id] = finish; });
    }
    return fft;
}

std::vector<double> ThemisPolicy::allocate(const ClusterState& state, const SimConfig& cfg) {
    advance_shadow(state.clock, cfg.capacity);
    const std::map<std::string, double> fft = shadow_finish_times(cfg.capacity);
    const double now = state.clock;

    std::vector<double> rho(state.active.size());
    for (std::size_t i = 0; i < state.active.size(); ++i) {
        const JobRuntime& jr = state.active[i];
        auto it = fft.find(jr.job.id);
        const double fair_finish = it != fft.end() ? it->second : jr.job.arrival + jr.job.size;
        const double fair_dur = std::max(fair_finish - jr.job.arrival, 1e-12);
        if (jr.allocation <= 0.0) {
            rho[i] = kInf; // starved: most unfairly treated, served first
        } else {
            const double projected =
                now + jr.visible_remaining(now) / jr.job.demand->speedup(jr.allocation);
            rho[i] = (projected - jr.job.arrival) / fair_dur;
        }
    }
    std::vector<std::size_t> order(state.active.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rho[a] != rho[b])
            return rho[a] > rho[b];
        const JobRuntime& ja = state.active[a];
        const JobRuntime& jb = state.active[b];
        if (ja.job.arrival != jb.job.arrival)
            return ja.job.arrival < jb.job.arrival;
        return ja.job.id < jb.job.id;
    });
    std::vector<double> plan(state.active.size(), 0.0);
    double residual = state.capacity;
    for (std::size_t i : order) {
        const double give =
            std::min(residual, static_cast<double>(state.active[i].job.max_alloc()));
        plan[i] = give;
        residual -= give;
    }
    return plan;
}

std::unique_ptr<Policy> ThemisPolicy::clone() const {
    return std::make_unique<ThemisPolicy>(*this);
}

std::vector<double> AfsPolicy::allocate(const ClusterState& state, const SimConfig&) {
    const double now = state.clock;
    const std::size_t n = state.active.size();
    std::vector<double> plan(n, 0.0);
    std::vector<double> remaining(n);
    for (std::size_t i = 0; i < n; ++i)
        remaining[i] = state.active[i].visible_remaining(now);

    const int units = static_cast<int>(std::floor(state.capacity + 1e-9));
    auto next_best = [&]() -> std::ptrdiff_t {
        std::ptrdiff_t best = -1;
        double best_gain = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int g = static_cast<int>(plan[i]);
            if (g >= state.active[i].job.max_alloc())
                continue;
            const auto& df = *state.active[i].job.demand;
            const double gain =
                (df.speedup(static_cast<double>(g + 1)) - df.speedup(static_cast<double>(g))) /
                remaining[i];
            const bool better =
                gain > best_gain ||
                (gain == best_gain && best >= 0 &&
                 (remaining[i] < remaining[static_cast<std::size_t>(best)] ||
                  (remaining[i] == remaining[static_cast<std::size_t>(best)] &&
                   state.active[i].job.id < state.active[static_cast<std::size_t>(best)].job.id)));
            if (better) {
                best = static_cast<std::ptrdiff_t>(i);
                best_gain = gain;
            }
        }
        return best;
    };
    for (int u = 0; u < units; ++u) {
        const std::ptrdiff_t best = next_best();
        if (best < 0)
            break;
        plan[static_cast<std::size_t>(best)] += 1.0;
    }
    // fractional tail of a non-integer capacity stays work-conserving
    const double leftover = state.capacity - static_cast<double>(units);
    if (leftover > 0.0) {
        const std::ptrdiff_t best = next_best();
        if (best >= 0)
            plan[static_cast<std::size_t>(best)] += leftover;
    }
    return plan;
}

std::unique_ptr<Policy> AfsPolicy::clone() const {
    return std::make_unique<AfsPolicy>(*this);
}

std::unique_ptr<Policy> make_baseline_policy(const std::string& name) {
    if (name == "fifo")
        return std::make_unique<FifoPolicy>();
    if (name == "srsf")
        return std::make_unique<SrsfPolicy>();
    if (name == "maxmin")
        return std::make_unique<MaxMinPolicy>();
    if (name == "themis")
        return std::make_unique<ThemisPolicy>();
    if (name == "afs")
        return std::make_unique<AfsPolicy>();
    throw ValidationError("unknown policy '" + name + "'");
}

} // namespace pcs
