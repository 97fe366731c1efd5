#ifndef PCS_SYNTHETIC_HPP
#define PCS_SYNTHETIC_HPP

#include "pcs/job.hpp"

#include <cstdint>
#include <string>

namespace pcs {

struct SizeDist {
    enum class Kind { HeavyTailed, LightTailed, Bimodal };
    Kind kind = Kind::LightTailed;
    // heavy_tailed: Pareto(shape, scale), samples capped at scale * kTailCap
    double shape = 1.5;
    double scale = 1.0;
    // light_tailed: Exponential(mean)
    double mean = 1.0;
    // bimodal: with prob p_small ~ Exp(small_mean), else ~ Exp(large_mean)
    double p_small = 0.8;
    double small_mean = 1.0;
    double large_mean = 10.0;

    static SizeDist heavy_tailed(double shape, double scale);
    static SizeDist light_tailed(double mean);
    static SizeDist bimodal(double p_small, double small_mean, double large_mean);
    void validate() const;
    std::string describe() const;
};

struct MaxAllocDist {
    enum class Kind { Constant, UniformInt, PowerOfTwo };
    Kind kind = Kind::Constant;
    int lo = 1; // Constant: value; UniformInt: inclusive lower bound
    int hi = 1; // UniformInt: inclusive upper bound; PowerOfTwo: largest power (1,2,..,hi)

    static MaxAllocDist constant(int value);
    static MaxAllocDist uniform_int(int lo, int hi);
    static MaxAllocDist power_of_two(int hi);
    void validate() const;
    std::string describe() const;
};

/// Parameterized arrival process: Poisson arrivals sized so the demanded
/// resource-time keeps the cluster at `load` of `capacity`. Per-job speedup
/// exponent drawn uniformly from [alpha_min, alpha_max]; 1.0 means linear
/// scaling.
struct WorkloadModel {
    int n_jobs = 100;
    double load = 0.8;
    SizeDist size_dist;
    MaxAllocDist max_alloc_dist;
    int capacity = 1;
    double alpha_min = 1.0;
    double alpha_max = 1.0;

    void validate() const;
    Trace generate(std::uint64_t seed) const;
    std::string describe() const;
};

// Multiplies each job's scheduler-visible size by a factor drawn uniformly
// from [1-rel_error, 1+rel_error] (floored at a small positive epsilon).
// true_size keeps the original value.
Trace inject_size_error(const Trace& trace, double rel_error, std::uint64_t seed);

} // namespace pcs

#endif
