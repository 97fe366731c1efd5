#ifndef PCS_RESULT_IO_HPP
#define PCS_RESULT_IO_HPP

#include "pcs/engine.hpp"
#include "pcs/metrics.hpp"
#include "pcs/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace pcs {

/// Reproducibility block written into every output file.
struct RunMetadata {
    std::string invocation; // argv joined
    std::string policy;
    std::uint64_t seed = 0;
    std::string config_hash; // FNV-1a of the canonical config string
};

std::string fnv1a_hex(const std::string& s);

// `job_id,arrival,start,finish,jct,jct_pred,pred_err,fft,unfairness` with
// `# key: value` metadata comment lines up front.
void write_records_csv(const SimResult& result, const RunMetadata& meta,
                       const std::string& path);
void write_result_json(const SimResult& result, const RunMetadata& meta,
                       const std::string& path);

// Summary statistics: avg/p50/p90/p99/p100 of jct, |pred_err|, unfairness.
std::map<std::string, std::map<std::string, double>> summarize(const SimResult& result);
void write_summary_json(const SimResult& result, const RunMetadata& meta,
                        const std::string& path);

// Pareto front files. CSV header: T,W,zeta_min,obj_1,...,obj_k
void write_front_csv(const std::vector<ParetoPoint>& front, const RunMetadata& meta,
                     const std::string& path);
void write_front_json(const std::vector<ParetoPoint>& front, const ObjectiveSpec& spec,
                      const RunMetadata& meta, const SearchStats& stats,
                      const std::string& path);
std::vector<ParetoPoint> load_front_json(const std::string& path);

ObjectiveSpec load_objective_spec(const std::string& path);
void write_objective_spec(const ObjectiveSpec& spec, const std::string& path);

} // namespace pcs

#endif
