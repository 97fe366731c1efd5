#ifndef PCS_BASELINES_HPP
#define PCS_BASELINES_HPP

#include "pcs/policy.hpp"

#include <map>
#include <string>
#include <vector>

namespace pcs {

// Fluid water-filling: equalize allocations up to per-job caps until the
// capacity is spent. Exact (non-iterative) level computation.
std::vector<double> water_fill(const std::vector<double>& caps, double capacity);

/// Arrival order, each job takes min(residual, max_alloc).
class FifoPolicy final : public Policy {
public:
    std::string name() const override { return "fifo"; }
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;
};

/// Shortest remaining (scheduler-visible) service first.
class SrsfPolicy final : public Policy {
public:
    std::string name() const override { return "srsf"; }
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;
};

/// Max-Min fair share via water-filling over max_alloc caps.
class MaxMinPolicy final : public Policy {
public:
    std::string name() const override { return "maxmin"; }
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;
};

/// Finish-time-fairness ordering. Keeps a shadow Max-Min replay of the
/// observed arrival history; a job's fair finish time is its finish in the
/// shadow played forward with no further arrivals. Jobs are served in
/// descending ratio of projected finish (under the current allocation) to
/// fair finish. Recomputes on every event and on lease expiry.
class ThemisPolicy final : public Policy {
public:
    std::string name() const override { return "themis"; }
    bool needs_lease() const override { return true; }
    void on_admit(JobRuntime& jr, const ClusterState& state, const SimConfig& cfg) override;
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;

private:
    struct ShadowJob {
        std::string id;
        double arrival = 0.0;
        double remaining = 0.0;
        DemandPtr demand;
    };

    void advance_shadow(double to, double capacity);
    std::map<std::string, double> shadow_finish_times(double capacity) const;

    double shadow_clock_ = 0.0;
    std::vector<ShadowJob> shadow_active_;
    std::map<std::string, double> shadow_finished_;
};

/// Greedy efficiency scheduler: hands out whole resource units one at a
/// time to the job with the highest marginal speedup gain per unit of
/// remaining work; ties go to the shorter job.
class AfsPolicy final : public Policy {
public:
    std::string name() const override { return "afs"; }
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;
};

// fifo | srsf | maxmin | themis | afs (pcs needs a config; see wfq.hpp).
std::unique_ptr<Policy> make_baseline_policy(const std::string& name);

} // namespace pcs

#endif
