#ifndef PCS_WFQ_HPP
#define PCS_WFQ_HPP

#include "pcs/policy.hpp"

#include <vector>

namespace pcs {

/// A concrete WFQ policy instance: size thresholds t_1 < ... < t_N with
/// t_N = +inf, strictly positive per-class weights, and the efficiency
/// floor used to cap each job's allocation inside its class.
struct WfqConfig {
    std::vector<double> thresholds;
    std::vector<double> weights;
    double zeta_min = 0.0;

    std::size_t n_classes() const { return thresholds.size(); }
    void validate() const;
};

/// The compact three-knob parameterization a search point names. Thresholds
/// and weights are derived against a workload's size sample.
struct PcsParams {
    double T = 1.0;      // per-class size-variation budget (C^2 ceiling)
    double W = 0.0;      // weight decay: w_i = e^(-i*W)
    double zeta_min = 0.0;

    void validate() const;
};

// Smallest k with size <= thresholds[k]. The final threshold is +inf, so
// every size maps somewhere.
int classify(double size, const std::vector<double>& thresholds);

// Sorts the sample ascending and greedily grows classes while the squared
// coefficient of variation (population variance / mean^2) of the class
// including the next size stays <= T. Closing threshold = largest admitted
// size; the final threshold is replaced by +inf.
std::vector<double> derive_thresholds(std::vector<double> size_sample, double T);

// w_i = e^(-i*W), i = 0..n_classes-1 (class 0 holds the smallest jobs).
std::vector<double> derive_weights(std::size_t n_classes, double W);

// Thresholds/weights derived from a size sample, zeta_min copied through.
WfqConfig resolve_config(const PcsParams& params, const std::vector<double>& size_sample);

// The WFQ allocation pass over the active set (class indices and caps must
// already be resolved on the runtimes). Work-conserving: guaranteed class
// shares, FIFO within class honoring caps, a second FIFO pass relaxing caps
// to max_alloc, then pooled redistribution across unsaturated classes
// proportional to weights.
std::vector<double> wfq_allocate(const ClusterState& state, const WfqConfig& cfg,
                                 double epsilon = 1e-9);

class PcsPolicy final : public Policy {
public:
    explicit PcsPolicy(WfqConfig cfg);
    PcsPolicy(const PcsParams& params, const std::vector<double>& size_sample);

    std::string name() const override { return "pcs"; }
    void on_admit(JobRuntime& jr, const ClusterState& state, const SimConfig& cfg) override;
    std::vector<double> allocate(const ClusterState& state, const SimConfig& cfg) override;
    std::unique_ptr<Policy> clone() const override;

    const WfqConfig& config() const { return cfg_; }

private:
    WfqConfig cfg_;
};

} // namespace pcs

#endif
