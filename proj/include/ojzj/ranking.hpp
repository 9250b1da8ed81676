#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <ojzj/individual.hpp>
#include <ojzj/objectives.hpp>
#include <ojzj/random.hpp>

namespace ojzj {

/// Crowding distances are plain doubles; +infinity marks boundary members of a
/// front and beats every finite value, and sums absorb it.
using CrowdingValue = double;
inline constexpr CrowdingValue infinite_crowding = std::numeric_limits<double>::infinity();

/// A population with ranks assigned. fronts[i] holds the indices of all
/// individuals of rank i+1, in ascending index order; the fronts partition the
/// population.
struct RankedPopulation {
    std::vector<Individual> individuals;
    std::vector<std::vector<std::size_t>> fronts;
};

/// Non-dominated sorting. Rank 1 contains everything not strictly dominated
/// by any other member; rank i+1 contains what is strictly dominated only by
/// ranks <= i. Equal objective values always end up with equal rank.
///
/// Straightforward O(m^2) domination counting; m stays in the hundreds here.
inline RankedPopulation non_dominated_sort(std::vector<Individual> population) {
    const std::size_t m = population.size();
    if (m == 0)
        throw std::invalid_argument("non_dominated_sort: population must be non-empty");

    std::vector<ObjectivePair> values(m);
    for (std::size_t i = 0; i < m; ++i)
        values[i] = population[i].objectives;

    // Two passes over all pairs: count first, then fill one flat adjacency
    // array (dominator -> dominated) without per-node allocations.
    std::vector<std::uint32_t> dominated_count(m, 0);
    std::vector<std::uint32_t> out_degree(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (strictly_dominates(values[i], values[j])) {
                ++out_degree[i];
                ++dominated_count[j];
            } else if (strictly_dominates(values[j], values[i])) {
                ++out_degree[j];
                ++dominated_count[i];
            }
        }
    }
    std::vector<std::size_t> offset(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i)
        offset[i + 1] = offset[i] + out_degree[i];
    std::vector<std::uint32_t> adjacency(offset[m]);
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (strictly_dominates(values[i], values[j]))
                adjacency[cursor[i]++] = static_cast<std::uint32_t>(j);
            else if (strictly_dominates(values[j], values[i]))
                adjacency[cursor[j]++] = static_cast<std::uint32_t>(i);
        }
    }

    RankedPopulation ranked;
    ranked.individuals = std::move(population);
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < m; ++i)
        if (dominated_count[i] == 0)
            current.push_back(i);
    int rank = 1;
    while (!current.empty()) {
        std::sort(current.begin(), current.end());
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            ranked.individuals[i].rank = rank;
            ranked.individuals[i].crowding.reset();
            for (std::size_t a = offset[i]; a < offset[i] + out_degree[i]; ++a) {
                std::size_t j = adjacency[a];
                if (--dominated_count[j] == 0)
                    next.push_back(j);
            }
        }
        ranked.fronts.push_back(std::move(current));
        current = std::move(next);
        ++rank;
    }
    return ranked;
}

namespace detail {

/// Crowding kernel with an explicit tie order per objective: members whose
/// objective values coincide are ordered by ascending priority. Null priority
/// means input order.
inline std::vector<CrowdingValue> crowding_with_ties(std::span<const ObjectivePair> front,
                                                     const std::vector<std::size_t>* tie_priority_f1,
                                                     const std::vector<std::size_t>* tie_priority_f2) {
    const std::size_t m = front.size();
    if (m == 0)
        throw std::invalid_argument("crowding_distances: front must be non-empty");
    std::vector<CrowdingValue> out(m, 0.0);
    std::vector<std::size_t> order(m);
    for (int objective = 0; objective < 2; ++objective) {
        auto value = [&](std::size_t i) {
            return objective == 0 ? front[i].f1 : front[i].f2;
        };
        const std::vector<std::size_t>* priority = objective == 0 ? tie_priority_f1 : tie_priority_f2;
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (value(a) != value(b))
                return value(a) < value(b);
            return priority ? (*priority)[a] < (*priority)[b] : a < b;
        });
        out[order.front()] = infinite_crowding;
        out[order.back()] = infinite_crowding;
        const int spread = value(order.back()) - value(order.front());
        if (m <= 2 || spread == 0)
            continue;
        for (std::size_t pos = 1; pos + 1 < m; ++pos) {
            out[order[pos]] +=
                static_cast<double>(value(order[pos + 1]) - value(order[pos - 1])) / spread;
        }
    }
    return out;
}

} // namespace detail

/// Crowding distances of one front (all members of one rank), index-aligned
/// with the input.
///
/// Per objective, members are sorted ascending by that objective. The first
/// and last of each sorted list get infinity; an interior member accumulates
/// the gap between its two sorted neighbors, normalized by the objective's
/// spread within the front. When a whole front shares one value of an
/// objective, the spread is zero; interior contributions for that objective
/// are then 0 (the limit of the formula) and the boundary members still get
/// infinity.
///
/// Members with equal objective values are ordered by their position in the
/// input list in this overload. The rng overload below instead draws an
/// independent random tie order per objective; the generation loops use that
/// one. Either way at most four members per distinct objective value end up
/// with positive crowding (the class ends of the two sorted lists), but under
/// random tie orders those four slots spread over up to four distinct copies
/// instead of collapsing onto the same two.
///
/// Distances are computed once per front and never updated during truncation.
inline std::vector<CrowdingValue> crowding_distances(std::span<const ObjectivePair> front) {
    return detail::crowding_with_ties(front, nullptr, nullptr);
}

inline std::vector<CrowdingValue> crowding_distances(std::span<const ObjectivePair> front,
                                                     RandomSource& rng) {
    std::vector<std::size_t> priority_f1(front.size());
    std::iota(priority_f1.begin(), priority_f1.end(), std::size_t{0});
    std::vector<std::size_t> priority_f2 = priority_f1;
    shuffle(priority_f1, rng);
    shuffle(priority_f2, rng);
    return detail::crowding_with_ties(front, &priority_f1, &priority_f2);
}

inline std::vector<CrowdingValue> crowding_distances(std::span<const Individual> front) {
    std::vector<ObjectivePair> values(front.size());
    for (std::size_t i = 0; i < front.size(); ++i)
        values[i] = front[i].objectives;
    return crowding_distances(std::span<const ObjectivePair>(values));
}

/// Computes and stores crowding distances for every front of a ranked
/// population, so all members carry both rank and crowding afterwards. The
/// rng overload draws random tie orders, the other one keeps index order.
inline void assign_crowding(RankedPopulation& ranked, RandomSource* rng = nullptr) {
    std::vector<ObjectivePair> scratch;
    for (const auto& front : ranked.fronts) {
        scratch.resize(front.size());
        for (std::size_t i = 0; i < front.size(); ++i)
            scratch[i] = ranked.individuals[front[i]].objectives;
        std::vector<CrowdingValue> dist =
            rng ? crowding_distances(std::span<const ObjectivePair>(scratch), *rng)
                : crowding_distances(std::span<const ObjectivePair>(scratch));
        for (std::size_t i = 0; i < front.size(); ++i)
            ranked.individuals[front[i]].crowding = dist[i];
    }
}

/// Survivor selection on an already ranked-and-crowded population: whole
/// fronts are kept while they fit, the critical front is filled in descending
/// crowding order, and the members tied at the cut value are chosen uniformly
/// at random. Survivors keep their rank/crowding and appear in ascending
/// combined-population index order.
inline std::vector<Individual> select_survivors(const RankedPopulation& ranked, std::size_t n_keep,
                                                RandomSource& rng) {
    if (ranked.individuals.size() < n_keep)
        throw std::invalid_argument("select_survivors: population smaller than survivor count");
    std::vector<std::size_t> chosen;
    chosen.reserve(n_keep);
    for (const auto& front : ranked.fronts) {
        if (chosen.size() == n_keep)
            break;
        if (chosen.size() + front.size() <= n_keep) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            continue;
        }
        // Critical front.
        const std::size_t need = n_keep - chosen.size();
        auto crowding = [&](std::size_t i) { return *ranked.individuals[i].crowding; };
        std::vector<std::size_t> by_crowding(front.begin(), front.end());
        std::stable_sort(by_crowding.begin(), by_crowding.end(), [&](std::size_t a, std::size_t b) {
            return crowding(a) > crowding(b);
        });
        const double cut = crowding(by_crowding[need - 1]);
        std::vector<std::size_t> tied;
        std::size_t above = 0;
        for (std::size_t i : by_crowding) {
            if (crowding(i) > cut)
                ++above;
            else if (crowding(i) == cut)
                tied.push_back(i);
        }
        for (std::size_t pos = 0; pos < above; ++pos)
            chosen.push_back(by_crowding[pos]);
        std::size_t take = need - above;
        if (take < tied.size())
            shuffle(tied, rng);
        chosen.insert(chosen.end(), tied.begin(), tied.begin() + static_cast<std::ptrdiff_t>(take));
        break;
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<Individual> survivors;
    survivors.reserve(n_keep);
    for (std::size_t i : chosen)
        survivors.push_back(ranked.individuals[i]);
    return survivors;
}

/// Full survival-selection step on a combined parent+offspring population:
/// rank, compute crowding (random tie orders), truncate to n_keep.
inline std::vector<Individual> survivor_selection(std::vector<Individual> combined,
                                                  std::size_t n_keep, RandomSource& rng) {
    if (combined.size() < n_keep)
        throw std::invalid_argument("survivor_selection: population smaller than survivor count");
    RankedPopulation ranked = non_dominated_sort(std::move(combined));
    assign_crowding(ranked, &rng);
    return select_survivors(ranked, n_keep, rng);
}

} // namespace ojzj
