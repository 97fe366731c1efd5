#include "pcs/wfq.hpp"

#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void WfqConfig::validate() const {
    if (thresholds.empty() || weights.size() != thresholds.size())
        throw ValidationError("WFQ config needs matching, non-empty thresholds and weights");
    if (!std::isinf(thresholds.back()))
        throw ValidationError("final WFQ threshold must be +inf");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i - 1] < thresholds[i]))
            throw ValidationError("WFQ thresholds must be strictly increasing");
    for (double w : weights)
        if (!(w > 0.0))
            throw ValidationError("WFQ class weights must be strictly positive");
    if (zeta_min < 0.0 || zeta_min > 1.0)
        throw ValidationError("zeta_min must be in [0, 1]");
}

void PcsParams::validate() const {
    if (!(T > 0.0))
        throw ValidationError("T must be positive");
    if (W < 0.0)
        throw ValidationError("W must be non-negative");
    if (zeta_min < 0.0 || zeta_min > 1.0)
        throw ValidationError("zeta_min must be in [0, 1]");
}

int classify(double size, const std::vector<double>& thresholds) {
    for (std::size_t k = 0; k < thresholds.size(); ++k)
        if (size <= thresholds[k])
            return static_cast<int>(k);
    throw InvariantError("size not classified; final threshold must be +inf");
}

std::vector<double> derive_thresholds(std::vector<double> size_sample, double T) {
    if (size_sample.empty())
        throw ValidationError("threshold derivation needs a non-empty size sample");
    if (!(T > 0.0))
        throw ValidationError("T must be positive");
    for (double s : size_sample)
        if (!(s > 0.0))
            throw ValidationError("size sample entries must be positive");
    std::sort(size_sample.begin(), size_sample.end());

    std::vector<double> thresholds;
    double sum = 0.0, sum_sq = 0.0, largest = 0.0;
    std::size_t count = 0;
    for (double s : size_sample) {
        // Never split between equal sizes: a boundary at `largest` would
        // classify the duplicate back into the class we just closed.
        if (count > 0 && s > largest) {
            const double n = static_cast<double>(count + 1);
            const double mean = (sum + s) / n;
            const double var = (sum_sq + s * s) / n - mean * mean;
            const double c2 = var <= 0.0 ? 0.0 : var / (mean * mean);
            if (c2 > T) {
                thresholds.push_back(largest);
                sum = 0.0;
                sum_sq = 0.0;
                count = 0;
            }
        }
        sum += s;
        sum_sq += s * s;
        ++count;
        largest = s;
    }
    thresholds.push_back(kInf);
    return thresholds;
}

std::vector<double> derive_weights(std::size_t n_classes, double W) {
    if (n_classes < 1)
        throw ValidationError("need at least one class");
    std::vector<double> weights(n_classes);
    for (std::size_t i = 0; i < n_classes; ++i)
        weights[i] = std::exp(-static_cast<double>(i) * W);
    return weights;
}

WfqConfig resolve_config(const PcsParams& params, const std::vector<double>& size_sample) {
    params.validate();
    WfqConfig cfg;
    cfg.thresholds = derive_thresholds(size_sample, params.T);
    cfg.weights = derive_weights(cfg.thresholds.size(), params.W);
    cfg.zeta_min = params.zeta_min;
    cfg.validate();
    return cfg;
}

std::vector<double> wfq_allocate(const ClusterState& state, const WfqConfig& cfg,
                                 double epsilon) {
    const std::size_t n_jobs = state.active.size();
    std::vector<double> plan(n_jobs, 0.0);
    if (n_jobs == 0)
        return plan;

    const std::size_t n_classes = cfg.n_classes();
    // FIFO member lists per class; state.active is already in (arrival, id)
    // order.
    std::vector<std::vector<std::size_t>> members(n_classes);
    for (std::size_t i = 0; i < n_jobs; ++i) {
        const int c = state.active[i].class_index;
        if (c < 0 || static_cast<std::size_t>(c) >= n_classes)
            throw InvariantError("active job without a resolved class index");
        members[static_cast<std::size_t>(c)].push_back(i);
    }

    // Two FIFO passes over one class: honor zeta caps, then relax to
    // max_alloc. Returns the unspent budget.
    auto spend_in_class = [&](std::size_t c, double budget) {
        for (std::size_t i : members[c]) {
            if (budget <= 0.0)
                return budget;
            const double cap = state.active[i].cap;
            const double give = std::min(budget, cap - plan[i]);
            if (give > 0.0) {
                plan[i] += give;
                budget -= give;
            }
        }
        for (std::size_t i : members[c]) {
            if (budget <= 0.0)
                return budget;
            const double max_a = static_cast<double>(state.active[i].job.max_alloc());
            const double give = std::min(budget, max_a - plan[i]);
            if (give > 0.0) {
                plan[i] += give;
                budget -= give;
            }
        }
        return budget;
    };

    auto class_unsaturated = [&](std::size_t c) {
        for (std::size_t i : members[c])
            if (plan[i] < static_cast<double>(state.active[i].job.max_alloc()))
                return true;
        return false;
    };

    // Guaranteed shares across non-empty classes.
    double weight_sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c)
        if (!members[c].empty())
            weight_sum += cfg.weights[c];
    double residual = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (members[c].empty())
            continue;
        const double share = state.capacity * (cfg.weights[c] / weight_sum);
        residual += spend_in_class(c, share);
    }

    // Pool leftovers and redistribute across still-unsaturated classes
    // proportional to weights. Each round either spends the pool or
    // saturates a class, so the loop is bounded.
    std::size_t guard = n_jobs + n_classes + 2;
    while (residual > epsilon && guard-- > 0) {
        double unsat_weight = 0.0;
        std::vector<std::size_t> unsat;
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (!members[c].empty() && class_unsaturated(c)) {
                unsat.push_back(c);
                unsat_weight += cfg.weights[c];
            }
        }
        if (unsat.empty())
            break;
        const double pool = residual;
        residual = 0.0;
        for (std::size_t c : unsat)
            residual += spend_in_class(c, pool * (cfg.weights[c] / unsat_weight));
    }
    return plan;
}

PcsPolicy::PcsPolicy(WfqConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
}

PcsPolicy::PcsPolicy(const PcsParams& params, const std::vector<double>& size_sample)
    : cfg_(resolve_config(params, size_sample)) {}

void PcsPolicy::on_admit(JobRuntime& jr, const ClusterState&, const SimConfig&) {
    jr.class_index = classify(jr.job.size, cfg_.thresholds);
    jr.cap = static_cast<double>(jr.job.demand->cap_for(cfg_.zeta_min));
}

std::vector<double> PcsPolicy::allocate(const ClusterState& state, const SimConfig& cfg) {
    return wfq_allocate(state, cfg_, cfg.epsilon);
}

std::unique_ptr<Policy> PcsPolicy::clone() const {
    return std::make_unique<PcsPolicy>(*this);
}

} // namespace pcs
