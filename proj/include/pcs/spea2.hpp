#ifndef PCS_SPEA2_HPP
#define PCS_SPEA2_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace pcs {

struct Spea2Options {
    int population = 40;
    int archive = 40;
    int generations = 25;
    std::uint64_t seed = 0;
    int workers = 1;
    double crossover_prob = 0.9;
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    double mutation_prob = -1.0; // <0: defaults to 1/dim
};

struct Spea2Individual {
    std::vector<double> genes;
    std::vector<double> objectives;
};

struct Spea2Stats {
    std::uint64_t evaluations = 0;
    std::uint64_t cache_hits = 0;
    // per-objective minimum over the random initial population
    std::vector<double> initial_best;
};

using Spea2EvalFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Strength-Pareto evolutionary search (archive + k-NN density truncation,
/// binary tournaments, SBX crossover, polynomial mutation). Minimizes every
/// objective. `eval` must be pure and thread-safe; all variation decisions
/// are drawn on the calling thread from `seed`, and evaluations are merged
/// by index, so results are independent of `workers`. Returns the final
/// archive (evaluated, mutually non-dominated up to archive truncation).
std::vector<Spea2Individual> spea2_minimize(
    const std::vector<std::pair<double, double>>& bounds, const Spea2EvalFn& eval,
    const Spea2Options& options, Spea2Stats* stats = nullptr);

} // namespace pcs

#endif
