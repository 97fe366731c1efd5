#include "pcs/solver.hpp"

#include "pcs/errors.hpp"
#include "pcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcs {

void SearchSpace::validate() const {
    if (!(log10_T_min < log10_T_max) || !(W_min < W_max) || !(zeta_lo < zeta_hi))
        throw ValidationError("search space ranges must be non-degenerate");
    if (W_min < 0.0 || zeta_lo < 0.0 || zeta_hi > 1.0)
        throw ValidationError("search space out of domain");
    if (population < 1 || generations < 1 || archive < 1)
        throw ValidationError("population, generations and archive must be >= 1");
    if (eval_seeds.empty())
        throw ValidationError("need at least one evaluation seed");
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ValidationError("objective vectors of different lengths");
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k])
            return false;
        if (a[k] < b[k])
            strict = true;
    }
    return strict;
}

std::vector<ParetoPoint> pareto_filter(std::vector<ParetoPoint> points) {
    std::vector<ParetoPoint> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            if (j != i && dominates(points[j].objectives, points[i].objectives))
                dominated = true;
        if (!dominated)
            kept.push_back(points[i]);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        return a.objectives.front() < b.objectives.front();
    });
    return kept;
}

EvalContext::EvalContext(const WorkloadModel& model, const ObjectiveSpec& spec,
                         const SimConfig& cfg, const std::vector<std::uint64_t>& eval_seeds)
    : spec_(spec), cfg_(cfg) {
    spec_.validate();
    if (eval_seeds.empty())
        throw ValidationError("need at least one evaluation seed");
    cfg_.capacity = static_cast<double>(model.capacity);
    for (const auto& entry : spec_.entries)
        if (entry.metric == Metric::Unfairness)
            needs_fairness_ = true;
    for (std::uint64_t seed : eval_seeds) {
        traces_.push_back(model.generate(seed));
        const Trace& trace = traces_.back();
        std::vector<double> sample;
        sample.reserve(trace.jobs.size());
        for (const auto& job : trace.jobs)
            sample.push_back(job.size);
        samples_.push_back(sample);
        union_sample_.insert(union_sample_.end(), sample.begin(), sample.end());
        if (needs_fairness_)
            ffts_.push_back(compute_fft(trace, cfg_.capacity));
    }
}

std::vector<double> EvalContext::evaluate(const PcsParams& params) const {
    params.validate();
    std::vector<double> mean;
    for (std::size_t s = 0; s < traces_.size(); ++s) {
        PcsPolicy policy(params, samples_[s]);
        accumulate(policy, s, mean);
    }
    for (double& v : mean)
        v /= static_cast<double>(traces_.size());
    return mean;
}

std::vector<double> EvalContext::evaluate(const WfqConfig& config) const {
    config.validate();
    std::vector<double> mean;
    for (std::size_t s = 0; s < traces_.size(); ++s) {
        PcsPolicy policy(config);
        accumulate(policy, s, mean);
    }
    for (double& v : mean)
        v /= static_cast<double>(traces_.size());
    return mean;
}

void EvalContext::accumulate(PcsPolicy& policy, std::size_t seed_index,
                             std::vector<double>& mean) const {
    SimResult result = run_simulation(traces_[seed_index], policy, cfg_);
    if (needs_fairness_) {
        for (auto& rec : result.records) {
            rec.fft = ffts_[seed_index].at(rec.id);
            const double fair_dur = rec.fft - rec.arrival;
            const double late = rec.finish - rec.fft;
            rec.unfairness = late > 0.0 ? 100.0 * late / fair_dur : 0.0;
        }
    }
    const std::vector<double> objectives = evaluate_objectives(result, spec_);
    if (mean.empty())
        mean.assign(objectives.size(), 0.0);
    for (std::size_t k = 0; k < objectives.size(); ++k)
        mean[k] += objectives[k];
}

std::vector<double> evaluate_config(const PcsParams& params, const WorkloadModel& model,
                                    const ObjectiveSpec& spec,
                                    const std::vector<std::uint64_t>& eval_seeds,
                                    const SimConfig& cfg) {
    EvalContext ctx(model, spec, cfg, eval_seeds);
    return ctx.evaluate(params);
}

namespace {

PcsParams genes_to_params(const std::vector<double>& genes) {
    PcsParams params;
    params.T = std::pow(10.0, genes[0]);
    params.W = genes[1];
    params.zeta_min = genes[2];
    return params;
}

} // namespace

std::vector<ParetoPoint> search(const ObjectiveSpec& spec, const SearchSpace& space,
                                const WorkloadModel& model, const SimConfig& cfg,
                                std::uint64_t seed, int workers, SearchStats* stats) {
    space.validate();
    const EvalContext ctx(model, spec, cfg, space.eval_seeds);

    Spea2Options options;
    options.population = space.population;
    options.archive = space.archive;
    options.generations = space.generations;
    options.seed = seed;
    options.workers = workers;

    const std::vector<std::pair<double, double>> bounds = {
        {space.log10_T_min, space.log10_T_max},
        {space.W_min, space.W_max},
        {space.zeta_lo, space.zeta_hi},
    };
    Spea2Stats spea_stats;
    const auto archive = spea2_minimize(
        bounds, [&](const std::vector<double>& genes) { return ctx.evaluate(genes_to_params(genes)); },
        options, &spea_stats);
    if (stats) {
        stats->evaluations = spea_stats.evaluations;
        stats->cache_hits = spea_stats.cache_hits;
        stats->initial_best = spea_stats.initial_best;
    }

    std::vector<ParetoPoint> points;
    points.reserve(archive.size());
    for (const auto& ind : archive) {
        ParetoPoint p;
        p.params = genes_to_params(ind.genes);
        p.resolved = resolve_config(p.params, ctx.union_size_sample());
        p.objectives = ind.objectives;
        points.push_back(std::move(p));
    }
    return pareto_filter(std::move(points));
}

std::vector<SensitivityEntry> sensitivity(const std::vector<ParetoPoint>& points,
                                          const WorkloadModel& alt_model,
                                          const ObjectiveSpec& spec,
                                          const std::vector<std::uint64_t>& eval_seeds,
                                          const SimConfig& cfg, int workers,
                                          const std::vector<std::vector<double>>&
                                              extra_reference) {
    if (points.empty())
        throw ValidationError("sensitivity needs at least one point");
    const EvalContext ctx(alt_model, spec, cfg, eval_seeds);

    std::vector<std::vector<double>> alt(points.size());
    parallel_for(points.size(), workers,
                 [&](std::size_t i) { alt[i] = ctx.evaluate(points[i].params); });

    // reference front: non-dominated subset of re-evaluated points + extras
    std::vector<std::vector<double>> candidates = alt;
    candidates.insert(candidates.end(), extra_reference.begin(), extra_reference.end());
    std::vector<std::vector<double>> front;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < candidates.size() && !dominated; ++j)
            if (j != i && dominates(candidates[j], candidates[i]))
                dominated = true;
        if (!dominated)
            front.push_back(candidates[i]);
    }

    std::vector<SensitivityEntry> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& ref : front) {
            double linf = 0.0;
            for (std::size_t k = 0; k < ref.size(); ++k) {
                const double denom = std::max(std::fabs(ref[k]), 1e-12);
                linf = std::max(linf, std::fabs(alt[i][k] - ref[k]) / denom);
            }
            best = std::min(best, linf);
        }
        out.push_back({points[i], alt[i], best});
    }
    return out;
}

double hypervolume_2d(const std::vector<std::vector<double>>& objectives,
                      const std::vector<double>& ref) {
    if (ref.size() != 2)
        throw ValidationError("hypervolume_2d needs a 2-D reference point");
    // keep the non-dominated subset, sorted by the first objective
    std::vector<std::vector<double>> front;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        if (objectives[i].size() != 2)
            throw ValidationError("hypervolume_2d needs 2-D objective vectors");
        bool dominated = false;
        for (std::size_t j = 0; j < objectives.size() && !dominated; ++j)
            if (j != i && dominates(objectives[j], objectives[i]))
                dominated = true;
        if (!dominated && objectives[i][0] <= ref[0] && objectives[i][1] <= ref[1])
            front.push_back(objectives[i]);
    }
    std::sort(front.begin(), front.end());
    front.erase(std::unique(front.begin(), front.end()), front.end());
    double hv = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next_x = i + 1 < front.size() ? front[i + 1][0] : ref[0];
        hv += (next_x - front[i][0]) * (ref[1] - front[i][1]);
    }
    return hv;
}

} // namespace pcs
