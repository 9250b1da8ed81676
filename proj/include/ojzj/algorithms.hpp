#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <ojzj/individual.hpp>
#include <ojzj/objectives.hpp>
#include <ojzj/operators.hpp>
#include <ojzj/random.hpp>
#include <ojzj/ranking.hpp>
#include <ojzj/stages.hpp>

namespace ojzj {

enum class Algorithm { nsga2, gsemo };

inline const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::nsga2: return "nsga2";
    case Algorithm::gsemo: return "gsemo";
    }
    return "?";
}

/// One observation of the parent population (for GSEMO: the archive). Emitted
/// after initialization and after every survival selection (GSEMO: after
/// every archive insertion, since nothing changes otherwise).
struct GenerationTrace {
    std::uint64_t generation = 0; // 0 = state right after initialization
    std::uint64_t evaluations = 0;
    Stage stage = Stage::stage1;
    int coverage = 0;            // distinct F* values present
    int outer_coverage = 0;      // 0..2
    bool has_extremal_genome = false;

    friend bool operator==(const GenerationTrace&, const GenerationTrace&) = default;
};

struct AlgorithmConfig {
    OjzjProblem problem{20, 3};
    Algorithm algorithm = Algorithm::nsga2;
    std::size_t population_size = 0; // NSGA-II only; GSEMO ignores it
    SelectionScheme selection = SelectionScheme::independent_tournaments;
    MutationKind mutation = MutationKind::bitwise;
    double beta = 1.5;                  // heavy-tailed exponent
    double crossover_probability = 0.0; // 0 disables the crossover pipeline
    std::uint64_t max_evaluations = 0;  // 0 = default_max_evaluations()

    // Instrumentation.
    bool assert_lemma1 = false; // per-generation rank-1 value retention checks
    bool record_stages = true;  // populate the stage transition fields
    bool force_inner_init = false; // resample initial genomes until inside S*_I
    std::function<void(const GenerationTrace&)> trace; // optional observer
};

/// Generous default evaluation cap, a large multiple of the expected runtimes
/// in the supported configurations: 1000 * N * n^k (N taken as 1 for GSEMO).
inline std::uint64_t default_max_evaluations(const OjzjProblem& p, std::size_t population_size) {
    const long double cap = 1000.0L * static_cast<long double>(std::max<std::size_t>(population_size, 1)) *
                            std::pow(static_cast<long double>(p.n), p.k);
    const long double limit = 0x1p62L;
    return static_cast<std::uint64_t>(std::min(cap, limit));
}

inline std::uint64_t resolved_max_evaluations(const AlgorithmConfig& cfg) {
    if (cfg.max_evaluations != 0)
        return cfg.max_evaluations;
    return default_max_evaluations(cfg.problem,
                                   cfg.algorithm == Algorithm::nsga2 ? cfg.population_size : 1);
}

/// Validates a full run configuration. Throws std::invalid_argument on hard
/// errors; returns warnings.
inline std::vector<std::string> validate(const AlgorithmConfig& cfg) {
    std::vector<std::string> warnings = validate_problem(cfg.problem);
    if (cfg.crossover_probability < 0.0 || cfg.crossover_probability > 1.0)
        throw std::invalid_argument("config: crossover probability must lie in [0,1]");
    if (cfg.mutation == MutationKind::heavy_tailed && !(cfg.beta > 1.0))
        throw std::invalid_argument("config: heavy-tailed mutation needs beta > 1");
    if (cfg.algorithm == Algorithm::gsemo) {
        if (cfg.crossover_probability > 0.0)
            throw std::invalid_argument("config: GSEMO does not support crossover");
        if (resolved_max_evaluations(cfg) < 1)
            throw std::invalid_argument("config: evaluation cap must be positive");
        return warnings;
    }
    if (cfg.population_size < 1)
        throw std::invalid_argument("config: NSGA-II needs a positive population size");
    const bool needs_even = cfg.selection == SelectionScheme::two_permutation_tournaments ||
                            cfg.crossover_probability > 0.0;
    if (needs_even && cfg.population_size % 2 != 0)
        throw std::invalid_argument(
            "config: two-permutation selection and crossover need an even population size");
    if (resolved_max_evaluations(cfg) < cfg.population_size)
        throw std::invalid_argument(
            "config: evaluation cap below the cost of initializing the population");
    return warnings;
}

/// Per-run outcome and instrumentation counters. Fully determined by
/// (config, seed).
struct RunRecord {
    std::uint64_t seed = 0;
    bool covered = false;
    std::optional<std::uint64_t> evaluations_to_cover; // unset = did not finish
    std::uint64_t evaluations_total = 0;               // consumed, <= cap
    std::uint64_t generations = 0;                     // GSEMO: iterations
    std::optional<std::uint64_t> stage1_end_evals;
    std::optional<std::uint64_t> stage2_end_evals;
    std::optional<std::uint64_t> stage3_end_evals;
    std::uint64_t lemma1_violations = 0;         // rank-1 objective values lost
    std::uint64_t crowding_bound_violations = 0; // >4 positive-crowding copies of a value
    std::uint64_t stage_regressions = 0;         // stage moved backwards

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Number of rank-1 objective values of a combined population that are missing
/// from the next parent population. Zero is guaranteed whenever
/// N >= 4(n - 2k + 3).
inline std::size_t check_lemma1(const RankedPopulation& combined,
                                std::span<const Individual> next_parents) {
    std::vector<ObjectivePair> rank1_values;
    rank1_values.reserve(combined.fronts.front().size());
    for (std::size_t i : combined.fronts.front())
        rank1_values.push_back(combined.individuals[i].objectives);
    std::sort(rank1_values.begin(), rank1_values.end());
    rank1_values.erase(std::unique(rank1_values.begin(), rank1_values.end()), rank1_values.end());

    std::vector<ObjectivePair> kept;
    kept.reserve(next_parents.size());
    for (const Individual& ind : next_parents)
        kept.push_back(ind.objectives);
    std::sort(kept.begin(), kept.end());

    std::size_t missing = 0;
    for (ObjectivePair v : rank1_values)
        if (!std::binary_search(kept.begin(), kept.end(), v))
            ++missing;
    return missing;
}

namespace detail {

/// Among the rank-1 members, counts objective values held by more than four
/// individuals of positive (or infinite) crowding distance. For populations of
/// this benchmark the count is always zero.
inline std::size_t values_with_excess_positive_crowding(const RankedPopulation& ranked) {
    const auto& front = ranked.fronts.front();
    std::vector<ObjectivePair> positive;
    positive.reserve(front.size());
    for (std::size_t i : front)
        if (*ranked.individuals[i].crowding > 0.0)
            positive.push_back(ranked.individuals[i].objectives);
    std::sort(positive.begin(), positive.end());
    std::size_t bad = 0;
    for (std::size_t i = 0; i < positive.size();) {
        std::size_t j = i;
        while (j < positive.size() && positive[j] == positive[i])
            ++j;
        if (j - i > 4)
            ++bad;
        i = j;
    }
    return bad;
}

/// Shared stage/coverage bookkeeping for both generation loops.
class RunObserver {
public:
    RunObserver(const AlgorithmConfig& cfg, RunRecord& rec)
        : cfg_(cfg), rec_(rec), front_size_(cfg.problem.front_size()) {}

    /// Returns true once the population covers the full front.
    bool observe(std::span<const Individual> population, std::uint64_t generation) {
        const CoverageReport rep = coverage_report(cfg_.problem, population);
        const Stage stage = stage_of(rep, cfg_.problem);
        if (cfg_.record_stages) {
            if (previous_stage_ && stage < *previous_stage_)
                ++rec_.stage_regressions;
            previous_stage_ = stage;
            if (stage > Stage::stage1 && !rec_.stage1_end_evals)
                rec_.stage1_end_evals = rec_.evaluations_total;
            if (stage > Stage::stage2 && !rec_.stage2_end_evals)
                rec_.stage2_end_evals = rec_.evaluations_total;
            if (stage == Stage::done && !rec_.stage3_end_evals)
                rec_.stage3_end_evals = rec_.evaluations_total;
        }
        if (cfg_.trace) {
            GenerationTrace t;
            t.generation = generation;
            t.evaluations = rec_.evaluations_total;
            t.stage = stage;
            t.coverage = rep.total();
            t.outer_coverage = rep.outer_covered;
            t.has_extremal_genome = rep.has_extremal_genome;
            cfg_.trace(t);
        }
        if (rep.total() == front_size_) {
            rec_.covered = true;
            rec_.evaluations_to_cover = rec_.evaluations_total;
            return true;
        }
        return false;
    }

private:
    const AlgorithmConfig& cfg_;
    RunRecord& rec_;
    int front_size_;
    std::optional<Stage> previous_stage_;
};

} // namespace detail

/// One full NSGA-II run. Per generation: select N parents, produce N
/// offspring through the variation pipeline, evaluate them, and keep the best
/// N of the combined 2N by rank and crowding. Coverage is judged on the
/// parent population after survival selection (and once right after
/// initialization); the runtime is the evaluation counter at the first
/// covered observation. Generations are atomic blocks of N evaluations: a
/// generation starts only if it still fits under the evaluation cap.
///
/// Without crossover every selected parent is mutated once. With crossover
/// probability pc the N selected parents are taken as N/2 consecutive pairs;
/// each pair, with probability pc, is recombined by uniform crossover and the
/// two children are mutated, otherwise the two parents are mutated directly.
inline RunRecord nsga2_run(const AlgorithmConfig& cfg, RandomSource& rng) {
    validate(cfg);
    if (cfg.algorithm != Algorithm::nsga2)
        throw std::invalid_argument("nsga2_run: config selects a different algorithm");
    const OjzjProblem& problem = cfg.problem;
    const std::size_t pop_size = cfg.population_size;
    const std::uint64_t cap = resolved_max_evaluations(cfg);

    std::optional<HeavyTailedDistribution> heavy;
    if (cfg.mutation == MutationKind::heavy_tailed)
        heavy.emplace(problem.n, cfg.beta);
    const HeavyTailedDistribution* heavy_ptr = heavy ? &*heavy : nullptr;

    // Lemma-style retention checks are only meaningful at the population
    // sizes for which they are guaranteed.
    const bool lemma1_applicable =
        cfg.assert_lemma1 &&
        pop_size >= 4 * static_cast<std::size_t>(problem.front_size());

    RunRecord rec;
    rec.seed = rng.seed();
    detail::RunObserver observer(cfg, rec);

    std::vector<Individual> parents;
    parents.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) {
        BitString genome = random_bitstring(static_cast<std::size_t>(problem.n), rng);
        if (cfg.force_inner_init)
            while (!in_inner_pareto_set(problem, genome))
                genome = random_bitstring(static_cast<std::size_t>(problem.n), rng);
        parents.push_back(make_individual(problem, std::move(genome)));
    }
    rec.evaluations_total = pop_size;
    {
        // The initial population plays the role of survivors of a trivial
        // selection: rank and crowd it so generation-0 tournaments are defined.
        RankedPopulation ranked = non_dominated_sort(std::move(parents));
        assign_crowding(ranked, &rng);
        parents = std::move(ranked.individuals);
    }

    bool covered = observer.observe(parents, 0);
    std::uint64_t generation = 0;
    while (!covered && rec.evaluations_total + pop_size <= cap) {
        ++generation;
        std::vector<Individual> selected = select_parents(cfg.selection, parents, rng);

        std::vector<Individual> offspring;
        offspring.reserve(pop_size);
        auto emit = [&](const BitString& genome) {
            offspring.push_back(
                make_individual(problem, mutate(cfg.mutation, heavy_ptr, genome, rng)));
        };
        if (cfg.crossover_probability > 0.0) {
            for (std::size_t i = 0; i + 1 < selected.size(); i += 2) {
                if (rng.bernoulli(cfg.crossover_probability)) {
                    auto [c1, c2] =
                        uniform_crossover(selected[i].genome, selected[i + 1].genome, rng);
                    emit(c1);
                    emit(c2);
                } else {
                    emit(selected[i].genome);
                    emit(selected[i + 1].genome);
                }
            }
        } else {
            for (const Individual& parent : selected)
                emit(parent.genome);
        }
        rec.evaluations_total += pop_size;

        std::vector<Individual> combined;
        combined.reserve(2 * pop_size);
        std::move(parents.begin(), parents.end(), std::back_inserter(combined));
        std::move(offspring.begin(), offspring.end(), std::back_inserter(combined));
        RankedPopulation ranked = non_dominated_sort(std::move(combined));
        assign_crowding(ranked, &rng);
        if (cfg.assert_lemma1)
            rec.crowding_bound_violations += detail::values_with_excess_positive_crowding(ranked);
        parents = select_survivors(ranked, pop_size, rng);
        if (lemma1_applicable)
            rec.lemma1_violations += check_lemma1(ranked, parents);
        covered = observer.observe(parents, generation);
    }
    rec.generations = generation;
    return rec;
}

/// Inserts a candidate into a GSEMO archive. The candidate enters iff no
/// archive member strictly dominates it and none has an equal objective
/// value; on entry every member it weakly dominates is removed, so the
/// archive keeps exactly one representative per non-dominated value.
inline bool gsemo_insert(std::vector<Individual>& archive, Individual candidate) {
    for (const Individual& member : archive)
        if (member.objectives == candidate.objectives ||
            strictly_dominates(member.objectives, candidate.objectives))
            return false;
    std::erase_if(archive, [&](const Individual& member) {
        return weakly_dominates(candidate.objectives, member.objectives);
    });
    archive.push_back(std::move(candidate));
    return true;
}

/// Global SEMO baseline: an archive of one individual per non-dominated
/// objective value; each iteration mutates a uniformly chosen member (one
/// evaluation) and applies the insertion rule above. Coverage is judged on
/// the archive; observations happen after initialization and after every
/// successful insertion (the archive does not change otherwise).
inline RunRecord gsemo_run(const AlgorithmConfig& cfg, RandomSource& rng) {
    validate(cfg);
    if (cfg.algorithm != Algorithm::gsemo)
        throw std::invalid_argument("gsemo_run: config selects a different algorithm");
    const OjzjProblem& problem = cfg.problem;
    const std::uint64_t cap = resolved_max_evaluations(cfg);

    std::optional<HeavyTailedDistribution> heavy;
    if (cfg.mutation == MutationKind::heavy_tailed)
        heavy.emplace(problem.n, cfg.beta);
    const HeavyTailedDistribution* heavy_ptr = heavy ? &*heavy : nullptr;

    RunRecord rec;
    rec.seed = rng.seed();
    detail::RunObserver observer(cfg, rec);

    std::vector<Individual> archive;
    archive.push_back(
        make_individual(problem, random_bitstring(static_cast<std::size_t>(problem.n), rng)));
    rec.evaluations_total = 1;
    bool covered = observer.observe(archive, 0);

    std::uint64_t iteration = 0;
    while (!covered && rec.evaluations_total < cap) {
        ++iteration;
        const Individual& parent = archive[rng.below(archive.size())];
        Individual child =
            make_individual(problem, mutate(cfg.mutation, heavy_ptr, parent.genome, rng));
        ++rec.evaluations_total;
        if (gsemo_insert(archive, std::move(child)))
            covered = observer.observe(archive, iteration);
    }
    rec.generations = iteration;
    return rec;
}

inline RunRecord run(const AlgorithmConfig& cfg, RandomSource& rng) {
    return cfg.algorithm == Algorithm::nsga2 ? nsga2_run(cfg, rng) : gsemo_run(cfg, rng);
}

} // namespace ojzj
