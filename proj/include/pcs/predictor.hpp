#ifndef PCS_PREDICTOR_HPP
#define PCS_PREDICTOR_HPP

#include "pcs/engine.hpp"

namespace pcs {

/// Predicted completion time (seconds from arrival) for `new_job` against a
/// snapshot taken at the instant of arrival, before admission. The playout
/// contains the snapshot's jobs plus the new one and no further arrivals;
/// every job's service target is its scheduler-visible size. Pure function.
double predict_jct(const Snapshot& snap, const Job& new_job, const SimConfig& cfg);

} // namespace pcs

#endif
