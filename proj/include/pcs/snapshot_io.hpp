#ifndef PCS_SNAPSHOT_IO_HPP
#define PCS_SNAPSHOT_IO_HPP

#include "pcs/engine.hpp"

#include <string>

namespace pcs {

// Cluster-state snapshot for the `predict` command:
//   {"clock": s, "capacity": n, "jobs": [{"id", "arrival", "size",
//    "accrued", "allocation", "max_gpus", "demand": {"1": ...}}, ...]}
// demand is optional (linear by default); accrued/allocation default to 0.
ClusterState load_cluster_state(const std::string& path);
void save_cluster_state(const ClusterState& state, const std::string& path);

} // namespace pcs

#endif
