#ifndef PCS_SOLVER_HPP
#define PCS_SOLVER_HPP

#include "pcs/engine.hpp"
#include "pcs/metrics.hpp"
#include "pcs/spea2.hpp"
#include "pcs/synthetic.hpp"
#include "pcs/wfq.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pcs {

struct SearchSpace {
    // gene encoding: (log10 T, W, zeta_min)
    double log10_T_min = -2.0;
    double log10_T_max = 2.0;
    double W_min = 0.0;
    double W_max = 5.0;
    double zeta_lo = 0.0;
    double zeta_hi = 1.0;
    int population = 40;
    int archive = 40;
    int generations = 25;
    // workload sample seeds shared by every candidate (paired comparisons)
    std::vector<std::uint64_t> eval_seeds = {101, 202};

    void validate() const;
};

struct ParetoPoint {
    PcsParams params;
    WfqConfig resolved; // derived against the union of the evaluation samples
    std::vector<double> objectives;
};

struct SearchStats {
    std::uint64_t evaluations = 0;
    std::uint64_t cache_hits = 0;
    std::vector<double> initial_best; // per-objective min over the random initial population
};

// true iff a <= b componentwise and a < b somewhere (lower is better)
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

// Maximal non-dominated subset, stably ordered by first objective ascending.
std::vector<ParetoPoint> pareto_filter(std::vector<ParetoPoint> points);

/// Pre-generated evaluation workloads shared across candidates: one trace
/// per eval seed, its visible-size sample, and (when the spec needs
/// unfairness) the per-trace fair-finish-time oracle. Immutable during a
/// search, so worker threads share it freely.
class EvalContext {
public:
    EvalContext(const WorkloadModel& model, const ObjectiveSpec& spec, const SimConfig& cfg,
                const std::vector<std::uint64_t>& eval_seeds);

    std::vector<double> evaluate(const PcsParams& params) const;
    // explicit configuration shared across all eval traces
    std::vector<double> evaluate(const WfqConfig& config) const;
    const std::vector<double>& union_size_sample() const { return union_sample_; }
    const ObjectiveSpec& spec() const { return spec_; }
    const SimConfig& sim_config() const { return cfg_; }

private:
    void accumulate(PcsPolicy& policy, std::size_t seed_index,
                    std::vector<double>& mean) const;

    ObjectiveSpec spec_;
    SimConfig cfg_;
    std::vector<Trace> traces_;
    std::vector<std::vector<double>> samples_;
    std::vector<std::map<std::string, double>> ffts_; // empty unless needed
    std::vector<double> union_sample_;
    bool needs_fairness_ = false;
};

// Mean objective vector across the eval seeds for one parameterization;
// thresholds/weights are re-derived per evaluation trace.
std::vector<double> evaluate_config(const PcsParams& params, const WorkloadModel& model,
                                    const ObjectiveSpec& spec,
                                    const std::vector<std::uint64_t>& eval_seeds,
                                    const SimConfig& cfg);

// SPEA2 search over (log10 T, W, zeta_min). Deterministic per seed and
// independent of the worker count.
std::vector<ParetoPoint> search(const ObjectiveSpec& spec, const SearchSpace& space,
                                const WorkloadModel& model, const SimConfig& cfg,
                                std::uint64_t seed, int workers,
                                SearchStats* stats = nullptr);

struct SensitivityEntry {
    ParetoPoint point;                  // original point
    std::vector<double> alt_objectives; // re-evaluated on the alternate workload
    double distance = 0.0;              // L-inf relative gap to the alternate front
};

// Re-evaluates each point's params on an alternate workload and measures the
// normalized L-inf distance to the non-dominated front of (re-evaluated
// points + extra_reference vectors). With the identical workload and no
// extras, points on the front sit at distance 0.
std::vector<SensitivityEntry> sensitivity(const std::vector<ParetoPoint>& points,
                                          const WorkloadModel& alt_model,
                                          const ObjectiveSpec& spec,
                                          const std::vector<std::uint64_t>& eval_seeds,
                                          const SimConfig& cfg, int workers,
                                          const std::vector<std::vector<double>>&
                                              extra_reference = {});

// Dominated 2-D hypervolume against a reference point (both objectives
// minimized; ref must be weakly worse than every point).
double hypervolume_2d(const std::vector<std::vector<double>>& objectives,
                      const std::vector<double>& ref);

} // namespace pcs

#endif
