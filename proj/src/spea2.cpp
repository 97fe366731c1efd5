#include "pcs/spea2.hpp"

#include "pcs/errors.hpp"
#include "pcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace pcs {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Scored {
    std::vector<double> genes;
    std::vector<double> objectives;
    double fitness = 0.0;
};

bool strictly_dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool any_better = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k])
            return false;
        if (a[k] < b[k])
            any_better = true;
    }
    return any_better;
}

// Pairwise distances in objective space, normalized per dimension by the
// population range so no metric dominates by scale.
std::vector<std::vector<double>> objective_distances(const std::vector<Scored>& pool) {
    const std::size_t n = pool.size();
    const std::size_t dims = n == 0 ? 0 : pool[0].objectives.size();
    std::vector<double> lo(dims, 0.0), span(dims, 1.0);
    for (std::size_t d = 0; d < dims; ++d) {
        double mn = pool[0].objectives[d], mx = mn;
        for (const auto& s : pool) {
            mn = std::min(mn, s.objectives[d]);
            mx = std::max(mx, s.objectives[d]);
        }
        lo[d] = mn;
        span[d] = mx - mn > 1e-300 ? mx - mn : 1.0;
    }
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t d = 0; d < dims; ++d) {
                const double delta =
                    (pool[i].objectives[d] - pool[j].objectives[d]) / span[d];
                sum += delta * delta;
            }
            dist[i][j] = dist[j][i] = std::sqrt(sum);
        }
    }
    return dist;
}

void assign_fitness(std::vector<Scored>& pool, std::size_t k_neighbor) {
    const std::size_t n = pool.size();
    std::vector<int> strength(n, 0);
    std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && strictly_dominates(pool[i].objectives, pool[j].objectives)) {
                dom[i][j] = true;
                ++strength[i];
            }
    const auto dist = objective_distances(pool);
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (dom[j][i])
                raw += static_cast<double>(strength[j]);
        std::vector<double> row;
        row.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                row.push_back(dist[i][j]);
        std::sort(row.begin(), row.end());
        const std::size_t k = std::min(k_neighbor, row.empty() ? std::size_t{0}
                                                               : row.size() - 1);
        const double sigma = row.empty() ? 0.0 : row[k];
        pool[i].fitness = raw + 1.0 / (sigma + 2.0);
    }
}

// Iteratively drop the member closest to its neighbors (lexicographic
// nearest-distance comparison), the canonical archive truncation.
void truncate_archive(std::vector<Scored>& archive, std::size_t target) {
    while (archive.size() > target) {
        const auto dist = objective_distances(archive);
        const std::size_t n = archive.size();
        std::vector<std::vector<double>> sorted_rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = dist[i];
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(i));
            std::sort(row.begin(), row.end());
            sorted_rows[i] = std::move(row);
        }
        std::size_t victim = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (sorted_rows[i] < sorted_rows[victim])
                victim = i;
        archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(victim));
    }
}

} // namespace

std::vector<Spea2Individual> spea2_minimize(
    const std::vector<std::pair<double, double>>& bounds, const Spea2EvalFn& eval,
    const Spea2Options& options, Spea2Stats* stats) {
    if (bounds.empty())
        throw ValidationError("search space has no dimensions");
    for (const auto& [lo, hi] : bounds)
        if (!(lo < hi))
            throw ValidationError("degenerate search bound");
    if (options.population < 1 || options.archive < 1 || options.generations < 1)
        throw ValidationError("population, archive and generations must be >= 1");

    const std::size_t dim = bounds.size();
    const double pm = options.mutation_prob > 0.0 ? options.mutation_prob
                                                  : 1.0 / static_cast<double>(dim);
    std::mt19937_64 rng(options.seed);
    Spea2Stats local_stats;
    Spea2Stats& st = stats ? *stats : local_stats;

    std::map<std::vector<double>, std::vector<double>> cache;
    auto evaluate_batch = [&](std::vector<std::vector<double>>& genes_batch)
        -> std::vector<std::vector<double>> {
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < genes_batch.size(); ++i) {
            const bool queued = std::any_of(todo.begin(), todo.end(), [&](std::size_t j) {
                return genes_batch[j] == genes_batch[i];
            });
            if (cache.count(genes_batch[i]) || queued)
                ++st.cache_hits;
            else
                todo.push_back(i);
        }
        std::vector<std::vector<double>> fresh(todo.size());
        parallel_for(todo.size(), options.workers,
                     [&](std::size_t t) { fresh[t] = eval(genes_batch[todo[t]]); });
        for (std::size_t t = 0; t < todo.size(); ++t) {
            for (double v : fresh[t])
                if (std::isnan(v))
                    throw InvariantError("objective evaluation produced NaN");
            cache.emplace(genes_batch[todo[t]], fresh[t]);
            ++st.evaluations;
        }
        std::vector<std::vector<double>> out(genes_batch.size());
        for (std::size_t i = 0; i < genes_batch.size(); ++i)
            out[i] = cache.at(genes_batch[i]);
        return out;
    };

    // random initial population
    std::vector<std::vector<double>> population;
    population.reserve(static_cast<std::size_t>(options.population));
    for (int i = 0; i < options.population; ++i) {
        std::vector<double> genes(dim);
        for (std::size_t d = 0; d < dim; ++d)
            genes[d] = bounds[d].first +
                       (bounds[d].second - bounds[d].first) * uniform01(rng);
        population.push_back(std::move(genes));
    }

    std::vector<Scored> archive;
    const std::size_t k_neighbor = static_cast<std::size_t>(
        std::sqrt(static_cast<double>(options.population + options.archive)));

    for (int gen = 0; gen < options.generations; ++gen) {
        std::vector<std::vector<double>> objectives;
        try {
            objectives = evaluate_batch(population);
        } catch (const std::exception& e) {
            throw InvariantError("search aborted in generation " + std::to_string(gen + 1) +
                                 " of " + std::to_string(options.generations) +
                                 " (archive holds " + std::to_string(archive.size()) +
                                 " evaluated points): " + e.what());
        }
        if (gen == 0) {
            st.initial_best.assign(objectives[0].size(),
                                   std::numeric_limits<double>::infinity());
            for (const auto& obj : objectives)
                for (std::size_t d = 0; d < obj.size(); ++d)
                    st.initial_best[d] = std::min(st.initial_best[d], obj[d]);
        }

        std::vector<Scored> pool;
        pool.reserve(population.size() + archive.size());
        for (std::size_t i = 0; i < population.size(); ++i)
            pool.push_back({population[i], objectives[i], 0.0});
        for (const auto& a : archive)
            pool.push_back(a);
        assign_fitness(pool, k_neighbor);

        // environmental selection: non-dominated first (fitness < 1)
        std::vector<Scored> next_archive;
        for (const auto& s : pool)
            if (s.fitness < 1.0)
                next_archive.push_back(s);
        if (next_archive.size() > static_cast<std::size_t>(options.archive)) {
            truncate_archive(next_archive, static_cast<std::size_t>(options.archive));
        } else if (next_archive.size() < static_cast<std::size_t>(options.archive)) {
            std::vector<std::size_t> dominated;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (pool[i].fitness >= 1.0)
                    dominated.push_back(i);
            std::stable_sort(dominated.begin(), dominated.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return pool[a].fitness < pool[b].fitness;
                             });
            for (std::size_t i : dominated) {
                if (next_archive.size() >= static_cast<std::size_t>(options.archive))
                    break;
                next_archive.push_back(pool[i]);
            }
        }
        archive = std::move(next_archive);
        if (gen + 1 == options.generations)
            break;

        // binary tournaments over the archive, SBX + polynomial mutation
        auto tournament = [&]() -> const Scored& {
            const std::size_t a =
                static_cast<std::size_t>(uniform01(rng) * static_cast<double>(archive.size()));
            const std::size_t b =
                static_cast<std::size_t>(uniform01(rng) * static_cast<double>(archive.size()));
            const std::size_t ia = std::min(a, archive.size() - 1);
            const std::size_t ib = std::min(b, archive.size() - 1);
            return archive[ib].fitness < archive[ia].fitness ? archive[ib] : archive[ia];
        };
        std::vector<std::vector<double>> offspring;
        offspring.reserve(population.size());
        while (offspring.size() < population.size()) {
            std::vector<double> c1 = tournament().genes;
            std::vector<double> c2 = tournament().genes;
            if (uniform01(rng) < options.crossover_prob) {
                for (std::size_t d = 0; d < dim; ++d) {
                    if (uniform01(rng) > 0.5 || std::fabs(c1[d] - c2[d]) < 1e-14)
                        continue;
                    const double u = uniform01(rng);
                    const double exponent = 1.0 / (options.eta_crossover + 1.0);
                    const double beta =
                        u <= 0.5 ? std::pow(2.0 * u, exponent)
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
                    const double p1 = c1[d], p2 = c2[d];
                    c1[d] = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
                    c2[d] = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
                }
            }
            for (auto* child : {&c1, &c2}) {
                for (std::size_t d = 0; d < dim; ++d) {
                    if (uniform01(rng) >= pm)
                        continue;
                    const double u = uniform01(rng);
                    const double exponent = 1.0 / (options.eta_mutation + 1.0);
                    const double delta = u < 0.5
                                             ? std::pow(2.0 * u, exponent) - 1.0
                                             : 1.0 - std::pow(2.0 * (1.0 - u), exponent);
                    (*child)[d] += delta * (bounds[d].second - bounds[d].first);
                }
                for (std::size_t d = 0; d < dim; ++d)
                    (*child)[d] = std::clamp((*child)[d], bounds[d].first, bounds[d].second);
                if (offspring.size() < population.size())
                    offspring.push_back(*child);
            }
        }
        population = std::move(offspring);
    }

    std::vector<Spea2Individual> out;
    out.reserve(archive.size());
    for (auto& s : archive)
        out.push_back({std::move(s.genes), std::move(s.objectives)});
    return out;
}

} // namespace pcs
