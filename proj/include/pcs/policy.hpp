#ifndef PCS_POLICY_HPP
#define PCS_POLICY_HPP

#include "pcs/engine.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pcs {

/// Allocation function invoked by the engine at every event. Returns one
/// allocation per active job, aligned with state.active. Policies may keep
/// per-run state (Themis does) but must be deep-copyable via clone() so
/// snapshots can replay independently.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual bool needs_lease() const { return false; }
    // Called once when a job is admitted; sets class/cap bookkeeping and
    // lets stateful policies observe the arrival.
    virtual void on_admit(JobRuntime&, const ClusterState&, const SimConfig&) {}
    virtual std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) = 0;
    virtual std::unique_ptr<Policy> clone() const = 0;
};

} // namespace pcs

#endif
