#include "pcs/metrics.hpp"

#include "pcs/baselines.hpp"
#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pcs {

Measure Measure::pct(int p) {
    if (p < 1 || p > 100)
        throw ValidationError("percentile must be in [1, 100]");
    return {false, p};
}

std::string Measure::to_string() const {
    return is_avg ? "avg" : "p" + std::to_string(percentile);
}

void ObjectiveSpec::validate() const {
    if (entries.empty())
        throw ValidationError("objective spec needs at least one entry");
    for (const auto& e : entries)
        if (!e.measure.is_avg && (e.measure.percentile < 1 || e.measure.percentile > 100))
            throw ValidationError("percentile must be in [1, 100]");
}

std::string ObjectiveSpec::to_string() const {
    std::string out;
    for (const auto& e : entries) {
        if (!out.empty())
            out += ",";
        out += metric_name(e.metric) + ":" + e.measure.to_string();
    }
    return out;
}

Metric metric_from_string(const std::string& s) {
    if (s == "jct")
        return Metric::Jct;
    if (s == "pred_err")
        return Metric::PredErr;
    if (s == "unfairness")
        return Metric::Unfairness;
    throw ValidationError("unknown metric '" + s + "' (expected jct|pred_err|unfairness)");
}

std::string metric_name(Metric m) {
    switch (m) {
    case Metric::Jct:
        return "jct";
    case Metric::PredErr:
        return "pred_err";
    case Metric::Unfairness:
        return "unfairness";
    }
    return "?";
}

Measure measure_from_string(const std::string& s) {
    if (s == "avg")
        return Measure::avg();
    if (s.size() > 1 && s[0] == 'p') {
        try {
            return Measure::pct(std::stoi(s.substr(1)));
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw ValidationError("unknown measure '" + s + "' (expected avg or p1..p100)");
}

double pred_err_pct(double jct_true, double jct_pred) {
    if (!(jct_pred > 0.0))
        throw ValidationError("prediction must be positive");
    return 100.0 * (jct_true - jct_pred) / jct_pred;
}

std::map<std::string, double> compute_fft(const Trace& trace, double capacity) {
    Trace oracle = trace;
    for (auto& job : oracle.jobs)
        job.size = job.true_size;
    SimConfig cfg;
    cfg.capacity = capacity;
    cfg.restart_overhead = 0.0;
    cfg.enable_predictions = false;
    MaxMinPolicy policy;
    const SimResult res = run_simulation(oracle, policy, cfg);
    std::map<std::string, double> fft;
    for (const auto& rec : res.records)
        fft[rec.id] = rec.finish;
    return fft;
}

double unfairness_pct(double jct, double arrival, double fft) {
    const double fair_dur = fft - arrival;
    if (!(fair_dur > 0.0))
        throw ValidationError("fair finish time must exceed the arrival");
    const double late = (arrival + jct) - fft;
    return late > 0.0 ? 100.0 * late / fair_dur : 0.0;
}

double aggregate(std::vector<double> values, const Measure& measure) {
    if (values.empty())
        throw ValidationError("cannot aggregate an empty list");
    if (measure.is_avg) {
        double sum = 0.0;
        for (double v : values)
            sum += v;
        return sum / static_cast<double>(values.size());
    }
    if (measure.percentile < 1 || measure.percentile > 100)
        throw ValidationError("percentile must be in [1, 100]");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(static_cast<double>(measure.percentile) * n / 100.0));
    return values[std::max<std::size_t>(rank, 1) - 1];
}

void annotate_fairness(SimResult& result, const Trace& trace, double capacity) {
    const auto fft = compute_fft(trace, capacity);
    for (auto& rec : result.records) {
        auto it = fft.find(rec.id);
        if (it == fft.end())
            throw InvariantError("no fair finish time for job '" + rec.id + "'");
        rec.fft = it->second;
        // differencing finish - fft directly avoids re-rounding through
        // arrival + jct, so a run that matches its own oracle scores exact 0
        const double fair_dur = rec.fft - rec.arrival;
        if (!(fair_dur > 0.0))
            throw ValidationError("fair finish time must exceed the arrival");
        const double late = rec.finish - rec.fft;
        rec.unfairness = late > 0.0 ? 100.0 * late / fair_dur : 0.0;
    }
}

std::vector<double> evaluate_objectives(const SimResult& result, const ObjectiveSpec& spec) {
    spec.validate();
    std::vector<double> out;
    out.reserve(spec.entries.size());
    for (const auto& entry : spec.entries) {
        std::vector<double> values;
        values.reserve(result.records.size());
        for (const auto& rec : result.records) {
            switch (entry.metric) {
            case Metric::Jct:
                values.push_back(rec.jct);
                break;
            case Metric::PredErr:
                if (std::isnan(rec.pred_err))
                    throw InvariantError("record without a prediction for job '" + rec.id +
                                         "'");
                values.push_back(std::fabs(rec.pred_err));
                break;
            case Metric::Unfairness:
                if (std::isnan(rec.unfairness))
                    throw InvariantError("unfairness not annotated for job '" + rec.id + "'");
                values.push_back(rec.unfairness);
                break;
            }
        }
        out.push_back(aggregate(std::move(values), entry.measure));
    }
    return out;
}

} // namespace pcs
