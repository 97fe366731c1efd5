#include "pcs/job.hpp"

#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pcs {

void finalize_trace(Trace& trace) {
    std::stable_sort(trace.jobs.begin(), trace.jobs.end(), [](const Job& a, const Job& b) {
        if (a.arrival != b.arrival)
            return a.arrival < b.arrival;
        return a.id < b.id;
    });
    std::set<std::string> ids;
    for (const auto& job : trace.jobs) {
        if (job.id.empty())
            throw ValidationError("job with empty id");
        if (!ids.insert(job.id).second)
            throw ValidationError("duplicate job id '" + job.id + "'");
        if (job.arrival < 0.0)
            throw ValidationError("job '" + job.id + "' has negative arrival");
        if (job.size <= 0.0 || job.true_size <= 0.0)
            throw ValidationError("job '" + job.id + "' has non-positive size");
        if (!job.demand)
            throw ValidationError("job '" + job.id + "' has no demand function");
        const double exec1 = job.demand->points().front().exec_time;
        if (std::fabs(job.true_size - exec1) > 1e-9 * std::max(job.true_size, exec1))
            throw ValidationError("job '" + job.id +
                                  "': size disagrees with demand exec time at allocation 1");
    }
}

} // namespace pcs
