#include "pcs/synthetic.hpp"

#include "pcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace pcs {

namespace {

// Pareto samples are capped at scale * kTailCap so a single outlier cannot
// dominate an entire run; C^2 of the capped distribution stays >> 1 for
// shapes near 1.5.
constexpr double kTailCap = 1000.0;
constexpr double kMinSize = 1e-6;

// Canonical 53-bit uniform in [0, 1); keeps traces reproducible across
// standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample_exponential(std::mt19937_64& rng, double mean) {
    double u = uniform01(rng);
    return -mean * std::log1p(-u);
}

double sample_size(std::mt19937_64& rng, const SizeDist& dist) {
    switch (dist.kind) {
    case SizeDist::Kind::HeavyTailed: {
        double u = uniform01(rng);
        double x = dist.scale * std::pow(1.0 - u, -1.0 / dist.shape);
        return std::min(x, dist.scale * kTailCap);
    }
    case SizeDist::Kind::LightTailed:
        return std::max(kMinSize, sample_exponential(rng, dist.mean));
    case SizeDist::Kind::Bimodal: {
        double u = uniform01(rng);
        double mean = u < dist.p_small ? dist.small_mean : dist.large_mean;
        return std::max(kMinSize, sample_exponential(rng, mean));
    }
    }
    throw ValidationError("unknown size distribution");
}

int sample_max_alloc(std::mt19937_64& rng, const MaxAllocDist& dist, int capacity) {
    int value = 1;
    switch (dist.kind) {
    case MaxAllocDist::Kind::Constant:
        value = dist.lo;
        break;
    case MaxAllocDist::Kind::UniformInt: {
        double u = uniform01(rng);
        value = dist.lo + static_cast<int>(u * static_cast<double>(dist.hi - dist.lo + 1));
        value = std::min(value, dist.hi);
        break;
    }
    case MaxAllocDist::Kind::PowerOfTwo: {
        int n_choices = 0;
        for (int p = 1; p <= dist.hi; p *= 2)
            ++n_choices;
        double u = uniform01(rng);
        int pick = std::min(n_choices - 1, static_cast<int>(u * n_choices));
        value = 1 << pick;
        break;
    }
    }
    return std::clamp(value, 1, capacity);
}

} // namespace

SizeDist SizeDist::heavy_tailed(double shape, double scale) {
    SizeDist d;
    d.kind = Kind::HeavyTailed;
    d.shape = shape;
    d.scale = scale;
    d.validate();
    return d;
}

SizeDist SizeDist::light_tailed(double mean) {
    SizeDist d;
    d.kind = Kind::LightTailed;
    d.mean = mean;
    d.validate();
    return d;
}

SizeDist SizeDist::bimodal(double p_small, double small_mean, double large_mean) {
    SizeDist d;
    d.kind = Kind::Bimodal;
    d.p_small = p_small;
    d.small_mean = small_mean;
    d.large_mean = large_mean;
    d.validate();
    return d;
}

void SizeDist::validate() const {
    switch (kind) {
    case Kind::HeavyTailed:
        if (shape <= 1.0)
            throw ValidationError("pareto shape must be > 1 (finite mean)");
        if (scale <= 0.0)
            throw ValidationError("pareto scale must be positive");
        return;
    case Kind::LightTailed:
        if (mean <= 0.0)
            throw ValidationError("exponential mean must be positive");
        return;
    case Kind::Bimodal:
        if (p_small < 0.0 || p_small > 1.0)
            throw ValidationError("bimodal p must be in [0,1]");
        if (small_mean <= 0.0 || large_mean <= 0.0)
            throw ValidationError("bimodal means must be positive");
        return;
    }
    throw ValidationError("unknown size distribution");
}

std::string SizeDist::describe() const {
    char buf[96];
    switch (kind) {
    case Kind::HeavyTailed:
        std::snprintf(buf, sizeof(buf), "pareto:%g:%g", shape, scale);
        break;
    case Kind::LightTailed:
        std::snprintf(buf, sizeof(buf), "exp:%g", mean);
        break;
    case Kind::Bimodal:
        std::snprintf(buf, sizeof(buf), "bimodal:%g:%g:%g", p_small, small_mean, large_mean);
        break;
    }
    return buf;
}

MaxAllocDist MaxAllocDist::constant(int value) {
    MaxAllocDist d;
    d.kind = Kind::Constant;
    d.lo = d.hi = value;
    d.validate();
    return d;
}

MaxAllocDist MaxAllocDist::uniform_int(int lo, int hi) {
    MaxAllocDist d;
    d.kind = Kind::UniformInt;
    d.lo = lo;
    d.hi = hi;
    d.validate();
    return d;
}

MaxAllocDist MaxAllocDist::power_of_two(int hi) {
    MaxAllocDist d;
    d.kind = Kind::PowerOfTwo;
    d.lo = 1;
    d.hi = hi;
    d.validate();
    return d;
}

void MaxAllocDist::validate() const {
    if (lo < 1 || hi < lo)
        throw ValidationError("max_alloc distribution bounds invalid");
}

std::string MaxAllocDist::describe() const {
    char buf[64];
    switch (kind) {
    case Kind::Constant:
        std::snprintf(buf, sizeof(buf), "const:%d", lo);
        break;
    case Kind::UniformInt:
        std::snprintf(buf, sizeof(buf), "uniform:%d:%d", lo, hi);
        break;
    case Kind::PowerOfTwo:
        std::snprintf(buf, sizeof(buf), "pow2:%d", hi);
        break;
    }
    return buf;
}

void WorkloadModel::validate() const {
    if (n_jobs < 1)
        throw ValidationError("n_jobs must be >= 1");
    if (load <= 0.0 || load > 1.0)
        throw ValidationError("load must be in (0, 1]");
    if (capacity < 1)
        throw ValidationError("capacity must be >= 1");
    if (alpha_min <= 0.0 || alpha_min > alpha_max || alpha_max > 1.0)
        throw ValidationError("alpha range must satisfy 0 < alpha_min <= alpha_max <= 1");
    size_dist.validate();
    max_alloc_dist.validate();
}

Trace WorkloadModel::generate(std::uint64_t seed) const {
    validate();
    std::mt19937_64 rng(seed);

    struct Draft {
        double size;
        int max_alloc;
        double alpha;
    };
    std::vector<Draft> drafts;
    drafts.reserve(static_cast<std::size_t>(n_jobs));
    // Demanded resource-time per job: running at max_alloc m for exec(m)
    // seconds consumes m * exec(m) = size / zeta(m) resource-seconds.
    double total_work = 0.0;
    for (int i = 0; i < n_jobs; ++i) {
        Draft d;
        d.size = sample_size(rng, size_dist);
        d.max_alloc = sample_max_alloc(rng, max_alloc_dist, capacity);
        d.alpha = alpha_min == alpha_max
                      ? alpha_min
                      : alpha_min + (alpha_max - alpha_min) * uniform01(rng);
        drafts.push_back(d);
        double zeta = std::pow(static_cast<double>(d.max_alloc), d.alpha - 1.0);
        total_work += d.size / zeta;
    }
    const double mean_work = total_work / static_cast<double>(n_jobs);
    const double lambda = load * static_cast<double>(capacity) / mean_work;

    Trace trace;
    trace.capacity_hint = capacity;
    trace.seed = seed;
    trace.jobs.reserve(drafts.size());
    double clock = 0.0;
    for (int i = 0; i < n_jobs; ++i) {
        clock += sample_exponential(rng, 1.0 / lambda);
        Job job;
        char idbuf[16];
        std::snprintf(idbuf, sizeof(idbuf), "j%06d", i);
        job.id = idbuf;
        job.arrival = clock;
        job.size = drafts[i].size;
        job.true_size = drafts[i].size;
        job.demand = std::make_shared<DemandFunction>(
            DemandFunction::power_law(drafts[i].max_alloc, drafts[i].size, drafts[i].alpha));
        trace.jobs.push_back(std::move(job));
    }
    finalize_trace(trace);
    return trace;
}

std::string WorkloadModel::describe() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "n=%d,load=%g,dist=%s,maxalloc=%s,capacity=%d,alpha=%g:%g",
                  n_jobs, load, size_dist.describe().c_str(), max_alloc_dist.describe().c_str(),
                  capacity, alpha_min, alpha_max);
    return buf;
}

Trace inject_size_error(const Trace& trace, double rel_error, std::uint64_t seed) {
    if (rel_error < 0.0)
        throw ValidationError("rel_error must be >= 0");
    Trace out = trace;
    std::mt19937_64 rng(seed);
    for (auto& job : out.jobs) {
        double factor = 1.0 - rel_error + 2.0 * rel_error * uniform01(rng);
        job.size = std::max(kMinSize, job.true_size * factor);
    }
    return out;
}

} // namespace pcs
