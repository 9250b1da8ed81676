#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include <ojzj/individual.hpp>
#include <ojzj/objectives.hpp>

namespace ojzj {

/// Phase of a run, judged on the parent population:
///   stage1 - no member of S*_I yet;
///   stage2 - some inner front value still uncovered;
///   stage3 - inner front covered, an extremal value still missing;
///   done   - full front covered.
enum class Stage { stage1 = 1, stage2 = 2, stage3 = 3, done = 4 };

inline const char* to_string(Stage s) {
    switch (s) {
    case Stage::stage1: return "stage1";
    case Stage::stage2: return "stage2";
    case Stage::stage3: return "stage3";
    case Stage::done: return "done";
    }
    return "?";
}

inline std::ostream& operator<<(std::ostream& os, Stage s) { return os << to_string(s); }

/// One scan of a population: which front values are present, plus the two
/// population facts the stage definitions need.
struct CoverageReport {
    int inner_covered = 0;          // distinct F*_I values present
    int outer_covered = 0;          // distinct F*_O values present, 0..2
    bool any_inner_member = false;  // some individual lies in S*_I
    bool has_extremal_genome = false; // 0^n or 1^n present

    int total() const noexcept { return inner_covered + outer_covered; }
};

inline CoverageReport coverage_report(const OjzjProblem& p, std::span<const Individual> population) {
    // Front values are exactly the pairs with f1 + f2 = 2k + n; index them by
    // a = f1 - k in [0 .. n].
    CoverageReport rep;
    std::vector<bool> seen(static_cast<std::size_t>(p.n) + 1, false);
    for (const Individual& ind : population) {
        const ObjectivePair f = ind.objectives;
        if (f.f1 + f.f2 == 2 * p.k + p.n && f.f1 >= p.k && f.f1 <= p.n + p.k)
            seen[static_cast<std::size_t>(f.f1 - p.k)] = true;
        const int ones = static_cast<int>(ind.genome.count_ones());
        if (p.k <= ones && ones <= p.n - p.k)
            rep.any_inner_member = true;
        if (ones == 0 || ones == p.n)
            rep.has_extremal_genome = true;
    }
    for (int a = 2 * p.k; a <= p.n; ++a)
        if (seen[static_cast<std::size_t>(a - p.k)])
            ++rep.inner_covered;
    if (seen[0])
        ++rep.outer_covered; // (k, n+k), the all-zeros value
    if (seen[static_cast<std::size_t>(p.n)])
        ++rep.outer_covered; // (n+k, k), the all-ones value
    return rep;
}

inline Stage stage_of(const CoverageReport& rep, const OjzjProblem& p) {
    if (!rep.any_inner_member)
        return Stage::stage1;
    if (rep.inner_covered < p.n - 2 * p.k + 1)
        return Stage::stage2;
    if (rep.outer_covered < 2)
        return Stage::stage3;
    return Stage::done;
}

inline Stage classify_stage(const OjzjProblem& p, std::span<const Individual> population) {
    if (population.empty())
        throw std::invalid_argument("classify_stage: population must be non-empty");
    return stage_of(coverage_report(p, population), p);
}

/// Number of distinct front points present among the population's objective
/// values. Full coverage <=> count == |F*|.
inline int coverage_count(const FrontSpec& front, std::span<const Individual> population) {
    std::vector<bool> seen(front.all_points.size(), false);
    for (const Individual& ind : population) {
        auto it = std::lower_bound(front.all_points.begin(), front.all_points.end(),
                                   ind.objectives);
        if (it != front.all_points.end() && *it == ind.objectives)
            seen[static_cast<std::size_t>(it - front.all_points.begin())] = true;
    }
    int covered = 0;
    for (bool b : seen)
        covered += b ? 1 : 0;
    return covered;
}

} // namespace ojzj
