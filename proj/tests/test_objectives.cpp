#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <set>
#include <vector>

#include <ojzj/individual.hpp>
#include <ojzj/objectives.hpp>
#include <ojzj/stages.hpp>

#include "oracles.hpp"

using namespace ojzj;

namespace {

// Genome with the requested ones-count: leading ones, trailing zeros.
BitString with_ones(int n, int ones) {
    BitString x(static_cast<std::size_t>(n));
    for (int i = 0; i < ones; ++i)
        x.flip(static_cast<std::size_t>(i));
    return x;
}

std::vector<Individual> population_with_ones(const OjzjProblem& p, std::initializer_list<int> counts) {
    std::vector<Individual> pop;
    for (int c : counts)
        pop.push_back(make_individual(p, with_ones(p.n, c)));
    return pop;
}

} // namespace

TEST_CASE("problem validation") {
    REQUIRE(validate_problem({8, 2}).empty());
    REQUIRE(validate_problem({4, 1}).size() == 1); // k=1 draws a warning
    REQUIRE_THROWS_AS(validate_problem({8, 3}), std::invalid_argument); // k > n/4
    REQUIRE_THROWS_AS(validate_problem({8, 0}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_problem({0, 1}), std::invalid_argument);
    REQUIRE(OjzjProblem{8, 2}.front_size() == 7);
}

TEST_CASE("evaluate on the n=8, k=2 instance") {
    const OjzjProblem p{8, 2};
    REQUIRE(evaluate(p, BitString::ones(8)) == ObjectivePair{10, 2});
    REQUIRE(evaluate(p, BitString::zeros(8)) == ObjectivePair{2, 10});
    REQUIRE(evaluate(p, with_ones(8, 3)) == ObjectivePair{5, 7});
    // |x|_1 = 7 > n-k and x != 1^n: f1 = n - |x|_1 = 1, f2 = k + 1 = 3
    REQUIRE(evaluate(p, with_ones(8, 7)) == ObjectivePair{1, 3});
    REQUIRE_THROWS_AS(evaluate(p, BitString(7)), std::invalid_argument);
}

TEST_CASE("objective symmetry under bit complement") {
    RandomSource rng(11);
    const OjzjProblem p{12, 3};
    std::vector<std::size_t> all(12);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (int i = 0; i < 200; ++i) {
        const BitString x = random_bitstring(12, rng);
        const BitString complement = flip_bits(x, all);
        const ObjectivePair fx = evaluate(p, x);
        const ObjectivePair fc = evaluate(p, complement);
        REQUIRE(fx.f1 == fc.f2);
        REQUIRE(fx.f2 == fc.f1);
    }
}

TEST_CASE("front_spec enumerates the exact front") {
    const FrontSpec front = front_spec({8, 2});
    const std::set<ObjectivePair> expected{{2, 10}, {4, 8}, {5, 7}, {6, 6}, {7, 5}, {8, 4}, {10, 2}};
    REQUIRE(std::set<ObjectivePair>(front.all_points.begin(), front.all_points.end()) == expected);
    REQUIRE(front.all_points.size() == 7);
    REQUIRE(front.outer[0] == ObjectivePair{2, 10});
    REQUIRE(front.outer[1] == ObjectivePair{10, 2});
    REQUIRE(front.inner.size() == 5);
    REQUIRE(front_spec({4, 1}).all_points.size() == 5);

    for (ObjectivePair v : front.all_points) {
        REQUIRE(v.f1 + v.f2 == 2 * 2 + 8);
        REQUIRE(front.is_front_point(v));
    }
    REQUIRE_FALSE(front.is_front_point({3, 9}));
    REQUIRE(front.is_outer_point({2, 10}));
    REQUIRE_FALSE(front.is_outer_point({4, 8}));
}

TEST_CASE("dominance relation") {
    REQUIRE_FALSE(strictly_dominates({5, 7}, {5, 7}));
    REQUIRE(strictly_dominates({6, 6}, {5, 5}));
    REQUIRE_FALSE(strictly_dominates({6, 4}, {4, 6}));
    REQUIRE_FALSE(strictly_dominates({4, 6}, {6, 4}));
    REQUIRE(strictly_dominates({6, 5}, {6, 4}));
    REQUIRE(weakly_dominates({5, 7}, {5, 7}));
    REQUIRE_FALSE(weakly_dominates({5, 7}, {6, 7}));
}

TEST_CASE("pareto set membership predicates") {
    const OjzjProblem p{8, 2};
    REQUIRE(in_inner_pareto_set(p, with_ones(8, 2)));
    REQUIRE(in_inner_pareto_set(p, with_ones(8, 6)));
    REQUIRE_FALSE(in_inner_pareto_set(p, with_ones(8, 1)));
    REQUIRE_FALSE(in_inner_pareto_set(p, BitString::ones(8)));
    REQUIRE(in_outer_pareto_set(p, BitString::ones(8)));
    REQUIRE(in_outer_pareto_set(p, BitString::zeros(8)));
    REQUIRE_FALSE(in_outer_pareto_set(p, with_ones(8, 4)));
    REQUIRE(in_pareto_set(p, with_ones(8, 4)));
    REQUIRE_FALSE(in_pareto_set(p, with_ones(8, 7)));
}

TEST_CASE("brute force front and pareto set for small instances") {
    for (const OjzjProblem p : {OjzjProblem{8, 2}, OjzjProblem{10, 2}, OjzjProblem{9, 2}}) {
        const oracle::ExhaustiveFront truth = oracle::exhaustive_front(p);
        const FrontSpec front = front_spec(p);
        REQUIRE(std::set<ObjectivePair>(front.all_points.begin(), front.all_points.end()) ==
                truth.nondominated_values);
        // preimage: exactly the strings with |x|_1 in [k..n-k] union {0, n}
        for (std::uint32_t code = 0; code < (1u << p.n); ++code) {
            BitString x(static_cast<std::size_t>(p.n));
            for (int b = 0; b < p.n; ++b)
                if (code & (1u << b))
                    x.flip(static_cast<std::size_t>(b));
            REQUIRE(truth.genome_is_optimal[code] == in_pareto_set(p, x));
        }
    }
}

TEST_CASE("every inner pareto member strictly dominates every gap individual") {
    // dominance depends only on the ones-count, so compare count classes
    for (const OjzjProblem p : {OjzjProblem{8, 2}, OjzjProblem{12, 3}}) {
        std::vector<int> gap_counts;
        for (int g = 1; g <= p.k - 1; ++g)
            gap_counts.push_back(g);
        for (int g = p.n - p.k + 1; g <= p.n - 1; ++g)
            gap_counts.push_back(g);
        for (int v = p.k; v <= p.n - p.k; ++v)
            for (int g : gap_counts)
                REQUIRE(strictly_dominates(evaluate(p, with_ones(p.n, v)),
                                           evaluate(p, with_ones(p.n, g))));
    }
}

TEST_CASE("stage classification") {
    const OjzjProblem p{8, 2};
    REQUIRE(classify_stage(p, population_with_ones(p, {1, 1, 7})) == Stage::stage1);
    REQUIRE(classify_stage(p, population_with_ones(p, {2, 3})) == Stage::stage2);
    // inner front fully covered: counts 2..6
    REQUIRE(classify_stage(p, population_with_ones(p, {2, 3, 4, 5, 6})) == Stage::stage3);
    REQUIRE(classify_stage(p, population_with_ones(p, {2, 3, 4, 5, 6, 0})) == Stage::stage3);
    REQUIRE(classify_stage(p, population_with_ones(p, {2, 3, 4, 5, 6, 0, 8})) == Stage::done);
    // outer members alone do not leave stage 1
    REQUIRE(classify_stage(p, population_with_ones(p, {0, 8})) == Stage::stage1);
    REQUIRE_THROWS_AS(classify_stage(p, std::vector<Individual>{}), std::invalid_argument);
    REQUIRE(Stage::stage1 < Stage::stage2);
    REQUIRE(Stage::stage3 < Stage::done);
}

TEST_CASE("coverage counting") {
    const OjzjProblem p{8, 2};
    const FrontSpec front = front_spec(p);
    REQUIRE(coverage_count(front, population_with_ones(p, {1, 7})) == 0);
    REQUIRE(coverage_count(front, population_with_ones(p, {0, 8})) == 2);
    REQUIRE(coverage_count(front, population_with_ones(p, {0, 8, 2, 3, 4, 5, 6})) == 7);
    // duplicates count once
    REQUIRE(coverage_count(front, population_with_ones(p, {4, 4, 4})) == 1);

    // classification is consistent with the count
    const auto population = population_with_ones(p, {0, 8, 2, 3, 4, 5, 6});
    REQUIRE(classify_stage(p, population) == Stage::done);
    REQUIRE(coverage_count(front, population) == p.front_size());
}

TEST_CASE("coverage report agrees with coverage_count on random populations") {
    RandomSource rng(21);
    const OjzjProblem p{12, 2};
    const FrontSpec front = front_spec(p);
    for (int i = 0; i < 100; ++i) {
        const auto pop = oracle::random_population(p, 1 + rng.below(30), rng);
        const CoverageReport rep = coverage_report(p, pop);
        REQUIRE(rep.total() == coverage_count(front, pop));
        bool zeros = false, ones = false;
        for (const auto& ind : pop) {
            zeros = zeros || ind.genome.count_ones() == 0;
            ones = ones || ind.genome.count_ones() == 12;
        }
        REQUIRE(rep.outer_covered == (zeros ? 1 : 0) + (ones ? 1 : 0));
        REQUIRE(rep.has_extremal_genome == (zeros || ones));
    }
}
