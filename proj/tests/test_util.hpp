#ifndef PCS_TEST_UTIL_HPP
#define PCS_TEST_UTIL_HPP

#include "pcs/baselines.hpp"
#include "pcs/engine.hpp"
#include "pcs/job.hpp"
#include "pcs/synthetic.hpp"
#include "pcs/wfq.hpp"

#include <random>
#include <string>
#include <vector>

namespace pcs::test {

inline Job make_job(const std::string& id, double arrival, double size, int max_alloc = 1,
                    double alpha = 1.0) {
    Job job;
    job.id = id;
    job.arrival = arrival;
    job.size = size;
    job.true_size = size;
    job.demand = std::make_shared<DemandFunction>(
        DemandFunction::power_law(max_alloc, size, alpha));
    return job;
}

inline Trace make_trace(std::vector<Job> jobs) {
    Trace trace;
    trace.jobs = std::move(jobs);
    finalize_trace(trace);
    return trace;
}

// Small randomized workloads for property tests; cycles through the three
// size distributions and mixes linear/sublinear scaling.
inline WorkloadModel random_model(std::uint64_t variant, int n_jobs = 60, int capacity = 8,
                                  bool sublinear = false) {
    WorkloadModel model;
    model.n_jobs = n_jobs;
    model.capacity = capacity;
    model.load = 0.5 + 0.1 * static_cast<double>(variant % 4);
    switch (variant % 3) {
    case 0:
        model.size_dist = SizeDist::heavy_tailed(1.8, 10.0);
        break;
    case 1:
        model.size_dist = SizeDist::light_tailed(30.0);
        break;
    default:
        model.size_dist = SizeDist::bimodal(0.7, 5.0, 80.0);
        break;
    }
    model.max_alloc_dist = variant % 2 == 0 ? MaxAllocDist::power_of_two(capacity)
                                            : MaxAllocDist::uniform_int(1, capacity / 2 + 1);
    if (sublinear) {
        model.alpha_min = 0.55;
        model.alpha_max = 0.95;
    }
    return model;
}

inline double sample_c2(const std::vector<double>& values) {
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    return var / (mean * mean);
}

// O(n^2) reference dominance filter (keeps input order).
inline std::vector<std::size_t> brute_force_front(
    const std::vector<std::vector<double>>& objectives) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objectives.size() && !dominated; ++j) {
            if (i == j)
                continue;
            bool all_le = true, any_lt = false;
            for (std::size_t k = 0; k < objectives[i].size(); ++k) {
                if (objectives[j][k] > objectives[i][k])
                    all_le = false;
                if (objectives[j][k] < objectives[i][k])
                    any_lt = true;
            }
            dominated = all_le && any_lt;
        }
        if (!dominated)
            kept.push_back(i);
    }
    return kept;
}

} // namespace pcs::test

#endif
