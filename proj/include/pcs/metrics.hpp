#ifndef PCS_METRICS_HPP
#define PCS_METRICS_HPP

#include "pcs/engine.hpp"
#include "pcs/job.hpp"

#include <map>
#include <string>
#include <vector>

namespace pcs {

enum class Metric { Jct, PredErr, Unfairness };

struct Measure {
    bool is_avg = true;
    int percentile = 0; // 1..100 when !is_avg

    static Measure avg() { return {true, 0}; }
    static Measure pct(int p);
    std::string to_string() const;
};

struct Objective {
    Metric metric = Metric::Jct;
    Measure measure;
};

/// Ordered objective list; repeats allowed so the same metric can appear
/// under different measures.
struct ObjectiveSpec {
    std::vector<Objective> entries;

    void validate() const;
    std::string to_string() const;
};

Metric metric_from_string(const std::string& s);
std::string metric_name(Metric m);
Measure measure_from_string(const std::string& s);

// Signed prediction error in percent: 100 * (true - pred) / pred.
double pred_err_pct(double jct_true, double jct_pred);

// Fair finish time of every job: finish times of a Max-Min fluid run of the
// same trace with true sizes and zero restart overhead. Policy-independent.
std::map<std::string, double> compute_fft(const Trace& trace, double capacity);

// Lateness past the fair finish, relative to the fair duration, floored at 0.
double unfairness_pct(double jct, double arrival, double fft);

// avg = arithmetic mean; percentile(p) = nearest-rank (ceil(p*N/100)-th
// smallest).
double aggregate(std::vector<double> values, const Measure& measure);

// Fills fft and unfairness on every record.
void annotate_fairness(SimResult& result, const Trace& trace, double capacity);

// One scalar per spec entry, in spec order; pred_err uses |pred_err| per
// job before aggregation. Lower is better everywhere.
std::vector<double> evaluate_objectives(const SimResult& result, const ObjectiveSpec& spec);

} // namespace pcs

#endif
