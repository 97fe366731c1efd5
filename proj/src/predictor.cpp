#include "pcs/predictor.hpp"

#include "pcs/errors.hpp"
#include "pcs/policy.hpp"

#include <cmath>

namespace pcs {

double predict_jct(const Snapshot& snap, const Job& new_job, const SimConfig& cfg) {
    Snapshot copy = snap; // clones the policy
    // The playout believes the scheduler-visible sizes. A job that already
    // overran its visible size (possible under injected estimation error)
    // is treated as one sliver of service away from finishing.
    for (auto& jr : copy.state.active) {
        const double acc = jr.accrued_at(copy.state.clock);
        jr.job.true_size = acc < jr.job.size ? jr.job.size : acc + 1e-9;
    }

    Job arriving = new_job;
    arriving.arrival = copy.state.clock;
    arriving.true_size = arriving.size;

    JobRuntime jr;
    jr.job = arriving;
    jr.anchor = copy.state.clock;
    jr.cap = static_cast<double>(arriving.max_alloc());
    copy.policy->on_admit(jr, copy.state, cfg);
    auto pos = std::upper_bound(copy.state.active.begin(), copy.state.active.end(), jr,
                                [](const JobRuntime& a, const JobRuntime& b) {
                                    if (a.job.arrival != b.job.arrival)
                                        return a.job.arrival < b.job.arrival;
                                    return a.job.id < b.job.id;
                                });
    copy.state.active.insert(pos, std::move(jr));

    SimResult res = playout(std::move(copy), cfg, arriving.id);
    for (const auto& rec : res.records)
        if (rec.id == arriving.id)
            return rec.finish - arriving.arrival;
    throw InvariantError("playout ended without finishing job '" + arriving.id + "'");
}

} // namespace pcs
