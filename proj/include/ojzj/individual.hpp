#pragma once

#include <optional>
#include <utility>

#include <ojzj/bitstring.hpp>
#include <ojzj/objectives.hpp>

namespace ojzj {

/// One population member: genome plus its objective value, cached once at
/// creation (the genome never changes afterwards, so the cache cannot go
/// stale). Rank and crowding distance are unset until a non-dominated sort /
/// crowding pass assigns them; survivors keep the values computed on the
/// combined population they were selected from.
struct Individual {
    BitString genome;
    ObjectivePair objectives;
    std::optional<int> rank;        // 1-based; 1 = non-dominated
    std::optional<double> crowding; // finite >= 0, or +infinity for boundary members
};

inline Individual make_individual(const OjzjProblem& problem, BitString genome) {
    ObjectivePair f = evaluate(problem, genome);
    return Individual{std::move(genome), f, std::nullopt, std::nullopt};
}

} // namespace ojzj
