#ifndef PCS_JOB_HPP
#define PCS_JOB_HPP

#include "pcs/demand.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcs {

/// One schedulable unit. `size` is the service requirement at allocation 1
/// as the scheduler sees it; `true_size` is what the job actually needs.
/// They differ only when size-estimation error has been injected.
struct Job {
    std::string id;
    double arrival = 0.0;
    double size = 0.0;
    double true_size = 0.0;
    DemandPtr demand;

    int max_alloc() const { return demand->max_alloc(); }
};

struct Trace {
    std::vector<Job> jobs; // sorted by (arrival, id)
    std::optional<int> capacity_hint;
    std::optional<std::uint64_t> seed;
};

// Sorts by (arrival, id) and checks ids unique, sizes positive,
// arrivals non-negative, demand present.
void finalize_trace(Trace& trace);

} // namespace pcs

#endif
