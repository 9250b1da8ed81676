#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <ojzj/operators.hpp>
#include <ojzj/ranking.hpp>

#include "oracles.hpp"

using namespace ojzj;

namespace {

Individual tagged(const std::string& genome, int rank, double crowding) {
    Individual ind{bitstring_from_string(genome), {0, 0}, rank, crowding};
    return ind;
}

// Population of pairwise distinct genomes (the binary codes 1..count) with
// rank and crowding assigned, so the tournament schemes accept it.
std::vector<Individual> ranked_population(std::size_t count, RandomSource&) {
    const OjzjProblem p{8, 2};
    std::vector<Individual> pop;
    for (std::size_t code = 1; code <= count; ++code) {
        BitString x(8);
        for (std::size_t b = 0; b < 8; ++b)
            if (code & (std::size_t{1} << b))
                x.flip(b);
        pop.push_back(make_individual(p, std::move(x)));
    }
    RankedPopulation ranked = non_dominated_sort(std::move(pop));
    assign_crowding(ranked);
    return std::move(ranked.individuals);
}

std::multiset<std::string> genome_multiset(const std::vector<Individual>& pop) {
    std::multiset<std::string> out;
    for (const auto& ind : pop)
        out.insert(to_string(ind.genome));
    return out;
}

} // namespace

TEST_CASE("fair selection returns the population itself in order") {
    RandomSource rng(1);
    const auto pop = ranked_population(5, rng);
    const auto selected = select_fair(pop);
    REQUIRE(selected.size() == pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        REQUIRE(selected[i].genome == pop[i].genome);
}

TEST_CASE("uniform selection draws N times with replacement") {
    RandomSource rng(2);
    SECTION("single individual is always selected") {
        const auto pop = ranked_population(1, rng);
        const auto selected = select_uniform(pop, rng);
        REQUIRE(selected.size() == 1);
        REQUIRE(selected[0].genome == pop[0].genome);
    }
    SECTION("index frequencies are uniform") {
        const auto pop = ranked_population(4, rng);
        std::map<std::string, int> counts;
        const int rounds = 25000; // 1e5 draws total
        for (int round = 0; round < rounds; ++round)
            for (const auto& ind : select_uniform(pop, rng))
                ++counts[to_string(ind.genome)];
        // expected 25000 per slot, 3 sigma ~ 411
        REQUIRE(counts.size() == 4);
        for (const auto& [genome, count] : counts) {
            REQUIRE(count > 25000 - 450);
            REQUIRE(count < 25000 + 450);
        }
    }
    SECTION("fraction never selected approaches 1/e") {
        const std::size_t n = 100;
        const auto pop = ranked_population(n, rng);
        double never_total = 0.0;
        const int trials = 10000;
        for (int t = 0; t < trials; ++t) {
            std::vector<bool> seen(n, false);
            for (std::size_t i = 0; i < n; ++i)
                seen[rng.below(n)] = true;
            int missed = 0;
            for (bool s : seen)
                missed += s ? 0 : 1;
            never_total += static_cast<double>(missed) / static_cast<double>(n);
        }
        const double fraction = never_total / trials;
        REQUIRE(fraction == Catch::Approx(std::pow(1.0 - 1.0 / 100, 100)).margin(0.005));
    }
}

TEST_CASE("binary tournament rule") {
    RandomSource rng(3);
    SECTION("lower rank wins") {
        const auto a = tagged("1000", 1, 0.0);
        const auto b = tagged("0100", 2, infinite_crowding);
        REQUIRE(binary_tournament(a, b, rng).genome == a.genome);
        REQUIRE(binary_tournament(b, a, rng).genome == a.genome);
    }
    SECTION("crowding breaks rank ties, infinity beats finite") {
        const auto a = tagged("1000", 1, infinite_crowding);
        const auto b = tagged("0100", 1, 2.0);
        REQUIRE(binary_tournament(a, b, rng).genome == a.genome);
        REQUIRE(binary_tournament(b, a, rng).genome == a.genome);
    }
    SECTION("full ties are a fair coin") {
        const auto a = tagged("1000", 1, 2.0);
        const auto b = tagged("0100", 1, 2.0);
        int a_wins = 0;
        const int rounds = 10000;
        for (int round = 0; round < rounds; ++round)
            a_wins += binary_tournament(a, b, rng).genome == a.genome ? 1 : 0;
        REQUIRE(a_wins > 5000 - 160); // 3 sigma ~ 150
        REQUIRE(a_wins < 5000 + 160);
    }
    SECTION("unset rank or crowding is rejected") {
        Individual bare{bitstring_from_string("1100"), {0, 0}, std::nullopt, std::nullopt};
        const auto a = tagged("1000", 1, 1.0);
        REQUIRE_THROWS_AS(binary_tournament(a, bare, rng), std::invalid_argument);
        REQUIRE_THROWS_AS(binary_tournament(bare, a, rng), std::invalid_argument);
    }
}

TEST_CASE("independent tournaments") {
    RandomSource rng(4);
    SECTION("N=2: the strict winner is selected twice") {
        std::vector<Individual> pop{tagged("1100", 1, 1.0), tagged("0011", 2, 1.0)};
        const auto selected = select_independent_tournaments(pop, rng);
        REQUIRE(selected.size() == 2);
        for (const auto& ind : selected)
            REQUIRE(to_string(ind.genome) == "1100");
    }
    SECTION("rejects populations below two") {
        std::vector<Individual> pop{tagged("1100", 1, 1.0)};
        REQUIRE_THROWS_AS(select_independent_tournaments(pop, rng), std::invalid_argument);
    }
    SECTION("each member participates in a tournament with probability 2/N") {
        const std::size_t n = 10;
        auto pop = ranked_population(n, rng);
        for (auto& ind : pop) {
            ind.rank = 1;
            ind.crowding = 1.0;
        }
        // give slot 0 a rank that always wins: its selection count then
        // equals its participation count
        pop[0].rank = 0;
        long participations = 0;
        const int rounds = 10000; // 1e5 tournaments
        for (int round = 0; round < rounds; ++round)
            for (const auto& ind : select_independent_tournaments(pop, rng))
                participations += ind.genome == pop[0].genome ? 1 : 0;
        const double expected = 2.0 / static_cast<double>(n) * 10000 * n;
        const double sigma = std::sqrt(10000.0 * n * 0.2 * 0.8);
        REQUIRE(std::abs(static_cast<double>(participations) - expected) < 3.5 * sigma);
    }
    SECTION("output size and multiset inclusion") {
        const auto pop = ranked_population(12, rng);
        const auto selected = select_independent_tournaments(pop, rng);
        REQUIRE(selected.size() == 12);
        const auto in = genome_multiset(pop);
        for (const auto& ind : selected)
            REQUIRE(in.count(to_string(ind.genome)) >= 1);
    }
}

TEST_CASE("two-permutation tournaments") {
    RandomSource rng(5);
    SECTION("odd population sizes are rejected") {
        const auto pop = ranked_population(5, rng);
        REQUIRE_THROWS_AS(select_two_permutation(pop, rng), std::invalid_argument);
    }
    SECTION("a winner of every tournament is selected exactly twice, losers zero times") {
        std::vector<Individual> pop;
        pop.push_back(tagged("1111", 1, infinite_crowding)); // beats everything
        for (const char* g : {"0001", "0010", "0100", "1000", "0011", "0101", "0110"})
            pop.push_back(tagged(g, 2, 0.0));
        for (int round = 0; round < 50; ++round) {
            const auto selected = select_two_permutation(pop, rng);
            REQUIRE(selected.size() == 8);
            int wins = 0;
            for (const auto& ind : selected)
                wins += to_string(ind.genome) == "1111" ? 1 : 0;
            REQUIRE(wins == 2); // one tournament per permutation, both won
        }
    }
    SECTION("every slot is a contestant exactly twice") {
        // all equal: every selected individual is some tournament's winner;
        // with distinct genomes the selected multiset counts wins per slot,
        // and wins <= participations = 2
        std::vector<Individual> pop;
        for (const char* g : {"0001", "0010", "0100", "1000", "0011", "0101", "0110", "0111"})
            pop.push_back(tagged(g, 1, 1.0));
        std::map<std::string, int> wins;
        const int rounds = 20000;
        for (int round = 0; round < rounds; ++round) {
            const auto selected = select_two_permutation(pop, rng);
            REQUIRE(selected.size() == 8);
            std::map<std::string, int> per_round;
            for (const auto& ind : selected)
                ++per_round[to_string(ind.genome)];
            for (const auto& [g, c] : per_round) {
                REQUIRE(c <= 2);
                wins[g] += c;
            }
        }
        // a uniformly tied individual is selected at least once with
        // probability 1 - (1/2)^2 = 3/4; its expected win count is 1
        for (const auto& [g, c] : wins)
            REQUIRE(std::abs(c - rounds) < 4.0 * std::sqrt(rounds * 0.5));
    }
    SECTION("selected at least once with probability 3/4 under worst-case coins") {
        std::vector<Individual> pop;
        for (const char* g : {"0001", "0010", "0100", "1000", "0011", "0101", "0110", "0111"})
            pop.push_back(tagged(g, 1, 1.0));
        int selected_once = 0;
        const int rounds = 20000;
        for (int round = 0; round < rounds; ++round) {
            const auto selected = select_two_permutation(pop, rng);
            for (const auto& ind : selected)
                if (to_string(ind.genome) == "0001") {
                    ++selected_once;
                    break;
                }
        }
        const double fraction = static_cast<double>(selected_once) / rounds;
        REQUIRE(fraction == Catch::Approx(0.75).margin(0.012)); // 3 sigma ~ 0.009
    }
}

TEST_CASE("one-bit mutation") {
    RandomSource rng(6);
    SECTION("n=1 flips the single bit") {
        const BitString x(1);
        REQUIRE(to_string(mutate_one_bit(x, rng)) == "1");
    }
    SECTION("hamming distance is exactly one, positions uniform") {
        const BitString x = bitstring_from_string("10110100");
        std::vector<int> flipped(8, 0);
        const int rounds = 100000;
        for (int round = 0; round < rounds; ++round) {
            const BitString y = mutate_one_bit(x, rng);
            REQUIRE(hamming_distance(x, y) == 1);
            for (std::size_t i = 0; i < 8; ++i)
                if (y.test(i) != x.test(i))
                    ++flipped[i];
        }
        // expected 12500 per position, 3 sigma ~ 314
        for (int count : flipped) {
            REQUIRE(count > 12500 - 350);
            REQUIRE(count < 12500 + 350);
        }
    }
}

TEST_CASE("bitwise mutation") {
    RandomSource rng(7);
    const std::size_t n = 20;
    const BitString x = random_bitstring(n, rng);
    SECTION("length preserved, input untouched") {
        const BitString before = x;
        const BitString y = mutate_bitwise(x, rng);
        REQUIRE(y.size() == n);
        REQUIRE(x == before);
    }
    SECTION("no-flip probability and mean flip count match the binomial law") {
        const int rounds = 100000;
        int unchanged = 0;
        long flips = 0;
        for (int round = 0; round < rounds; ++round) {
            const BitString y = mutate_bitwise(x, rng);
            const std::size_t d = hamming_distance(x, y);
            unchanged += d == 0 ? 1 : 0;
            flips += static_cast<long>(d);
        }
        // (1 - 1/20)^20 = 0.358486; 3 sigma ~ 0.0046
        REQUIRE(static_cast<double>(unchanged) / rounds ==
                Catch::Approx(std::pow(0.95, 20)).margin(0.006));
        // expected hamming distance 1; 3 sigma of the mean ~ 0.0093
        REQUIRE(static_cast<double>(flips) / rounds == Catch::Approx(1.0).margin(0.012));
    }
    SECTION("probability of one specific k-bit jump") {
        // flipping exactly the two one-bits of x and nothing else:
        // (1/n)^2 (1-1/n)^(n-2) at n=8, and at least 1/(e n^2)
        const BitString start = bitstring_from_string("10000001");
        const BitString target = bitstring_from_string("00000000");
        const double exact = std::pow(1.0 / 8, 2) * std::pow(7.0 / 8, 6);
        REQUIRE(exact >= 1.0 / (std::exp(1.0) * 64));
        int hits = 0;
        const int rounds = 1000000;
        for (int round = 0; round < rounds; ++round)
            hits += mutate_bitwise(start, rng) == target ? 1 : 0;
        // exact = 0.0070124, 3 sigma ~ 2.5e-4
        REQUIRE(static_cast<double>(hits) / rounds == Catch::Approx(exact).margin(4e-4));
    }
}

TEST_CASE("heavy-tailed distribution") {
    SECTION("hand-computed table at n=4, beta=2") {
        const HeavyTailedDistribution dist(4, 2.0);
        REQUIRE(dist.cutoff() == 2);
        REQUIRE(dist.normalizer() == Catch::Approx(1.25));
        REQUIRE(dist.probability(1) == Catch::Approx(0.8));
        REQUIRE(dist.probability(2) == Catch::Approx(0.2));
        REQUIRE_THROWS_AS(dist.probability(3), std::out_of_range);
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(HeavyTailedDistribution(1, 1.5), std::invalid_argument);
        REQUIRE_THROWS_AS(HeavyTailedDistribution(10, 1.0), std::invalid_argument);
    }
    SECTION("probabilities sum to one and the normalizer is bounded") {
        for (int n : {4, 9, 20, 30, 64}) {
            for (double beta : {1.1, 1.5, 2.0, 3.0}) {
                const HeavyTailedDistribution dist(n, beta);
                double total = 0.0;
                for (int a = 1; a <= dist.cutoff(); ++a)
                    total += dist.probability(a);
                REQUIRE(std::abs(total - 1.0) < 1e-12);
                REQUIRE(dist.normalizer() <= beta / (beta - 1.0));
            }
        }
    }
    SECTION("odd n uses floor(n/2)") {
        REQUIRE(HeavyTailedDistribution(9, 1.5).cutoff() == 4);
    }
    SECTION("sampling support and frequencies") {
        RandomSource rng(8);
        const HeavyTailedDistribution dist(30, 1.5);
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(dist.cutoff()), 0);
        const int rounds = 1000000;
        for (int round = 0; round < rounds; ++round) {
            const int alpha = sample_alpha(dist, rng);
            REQUIRE(alpha >= 1);
            REQUIRE(alpha <= 15);
            ++counts[static_cast<std::size_t>(alpha - 1)];
        }
        for (int a = 1; a <= dist.cutoff(); ++a) {
            const double p = dist.probability(a);
            const double sigma = std::sqrt(p * (1 - p) * rounds);
            REQUIRE(std::abs(static_cast<double>(counts[static_cast<std::size_t>(a - 1)]) -
                             p * rounds) < 4.0 * sigma);
        }
    }
}

TEST_CASE("heavy-tailed mutation") {
    RandomSource rng(9);
    SECTION("length checks") {
        const HeavyTailedDistribution dist(20, 1.5);
        REQUIRE_THROWS_AS(mutate_heavy_tailed(BitString(19), dist, rng), std::invalid_argument);
    }
    SECTION("step distribution matches the exact convolution") {
        const int n = 30;
        const HeavyTailedDistribution dist(n, 1.5);
        const std::vector<double> exact = oracle::heavy_tailed_step_probabilities(n, 1.5);
        // the library route and the oracle route agree analytically
        for (int j = 0; j <= n; ++j)
            REQUIRE(dist.step_probability(j) == Catch::Approx(exact[static_cast<std::size_t>(j)])
                                                    .epsilon(1e-9)
                                                    .margin(1e-15));
        // and empirical frequencies agree with both for j in [1..8]
        const BitString x = random_bitstring(n, rng);
        std::vector<std::uint64_t> histogram(static_cast<std::size_t>(n) + 1, 0);
        const int rounds = 200000;
        for (int round = 0; round < rounds; ++round)
            ++histogram[hamming_distance(x, mutate_heavy_tailed(x, dist, rng))];
        for (int j = 1; j <= 8; ++j) {
            const double p = exact[static_cast<std::size_t>(j)];
            const double sigma = std::sqrt(p * (1 - p) * rounds);
            REQUIRE(std::abs(static_cast<double>(histogram[static_cast<std::size_t>(j)]) -
                             p * rounds) < 4.0 * sigma);
        }
    }
    SECTION("mean flip count conditional on alpha") {
        // alpha = cutoff is identifiable only through distance statistics, so
        // check the unconditional mean instead: E[H] = E[alpha]
        const int n = 20;
        const HeavyTailedDistribution dist(n, 1.5);
        double expected_alpha = 0.0;
        for (int a = 1; a <= dist.cutoff(); ++a)
            expected_alpha += a * dist.probability(a);
        const BitString x = random_bitstring(n, rng);
        long flips = 0;
        const int rounds = 200000;
        for (int round = 0; round < rounds; ++round)
            flips += static_cast<long>(hamming_distance(x, mutate_heavy_tailed(x, dist, rng)));
        REQUIRE(static_cast<double>(flips) / rounds == Catch::Approx(expected_alpha).margin(0.03));
    }
}

TEST_CASE("uniform crossover") {
    RandomSource rng(10);
    SECTION("identical parents reproduce themselves") {
        const BitString x = random_bitstring(16, rng);
        const auto [c1, c2] = uniform_crossover(x, x, rng);
        REQUIRE(c1 == x);
        REQUIRE(c2 == x);
    }
    SECTION("mismatched lengths rejected") {
        REQUIRE_THROWS_AS(uniform_crossover(BitString(4), BitString(5), rng),
                          std::invalid_argument);
    }
    SECTION("children partition the parent bits position by position") {
        for (int round = 0; round < 200; ++round) {
            const BitString p1 = random_bitstring(20, rng);
            const BitString p2 = random_bitstring(20, rng);
            const auto [c1, c2] = uniform_crossover(p1, p2, rng);
            for (std::size_t i = 0; i < 20; ++i) {
                const bool ok = (c1.test(i) == p1.test(i) && c2.test(i) == p2.test(i)) ||
                                (c1.test(i) == p2.test(i) && c2.test(i) == p1.test(i));
                REQUIRE(ok);
            }
            REQUIRE(ones_count(c1) + ones_count(c2) == ones_count(p1) + ones_count(p2));
            // xor identity: c1 ^ c2 = p1 ^ p2
            for (std::size_t i = 0; i < 20; ++i)
                REQUIRE((c1.test(i) ^ c2.test(i)) == (p1.test(i) ^ p2.test(i)));
        }
    }
    SECTION("inheritance is an even coin") {
        const BitString p1 = BitString::zeros(20);
        const BitString p2 = BitString::ones(20);
        long from_first = 0;
        const int rounds = 10000;
        for (int round = 0; round < rounds; ++round) {
            const auto [c1, c2] = uniform_crossover(p1, p2, rng);
            for (std::size_t i = 0; i < 20; ++i)
                from_first += c1.test(i) ? 0 : 1;
        }
        const double fraction = static_cast<double>(from_first) / (rounds * 20.0);
        REQUIRE(fraction == Catch::Approx(0.5).margin(0.004)); // 3 sigma ~ 0.0034
    }
}

TEST_CASE("every selection scheme returns exactly N parents from the population") {
    RandomSource rng(11);
    for (std::size_t n : {2u, 8u, 14u}) {
        const auto pop = ranked_population(n, rng);
        const auto in = genome_multiset(pop);
        for (SelectionScheme scheme :
             {SelectionScheme::fair, SelectionScheme::uniform,
              SelectionScheme::independent_tournaments,
              SelectionScheme::two_permutation_tournaments}) {
            const auto selected = select_parents(scheme, pop, rng);
            REQUIRE(selected.size() == n);
            for (const auto& ind : selected)
                REQUIRE(in.count(to_string(ind.genome)) >= 1);
        }
    }
}

TEST_CASE("tournament symmetry: swapping arguments does not bias the winner") {
    RandomSource rng(12);
    const auto a = tagged("1000", 1, 1.0);
    const auto b = tagged("0100", 1, 1.0);
    int a_wins_first = 0, a_wins_second = 0;
    const int rounds = 20000;
    for (int round = 0; round < rounds; ++round) {
        a_wins_first += binary_tournament(a, b, rng).genome == a.genome ? 1 : 0;
        a_wins_second += binary_tournament(b, a, rng).genome == a.genome ? 1 : 0;
    }
    // both orderings give a ~ Binomial(rounds, 1/2) win count
    REQUIRE(std::abs(a_wins_first - rounds / 2) < 300);
    REQUIRE(std::abs(a_wins_second - rounds / 2) < 300);
}
