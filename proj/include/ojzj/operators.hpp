#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <ojzj/bitstring.hpp>
#include <ojzj/individual.hpp>
#include <ojzj/random.hpp>

namespace ojzj {

/// Parent-selection schemes. Every scheme maps a parent population of size N
/// to exactly N selected parents (with repetition).
enum class SelectionScheme {
    fair,                       // each individual exactly once, in population order
    uniform,                    // N independent uniform draws with replacement
    independent_tournaments,    // N binary tournaments between two distinct members
    two_permutation_tournaments // tournaments over consecutive pairs of two permutations
};

inline const char* to_string(SelectionScheme s) {
    switch (s) {
    case SelectionScheme::fair: return "fair";
    case SelectionScheme::uniform: return "uniform";
    case SelectionScheme::independent_tournaments: return "tournament";
    case SelectionScheme::two_permutation_tournaments: return "two-perm";
    }
    return "?";
}

enum class MutationKind {
    one_bit,     // flip one position chosen uniformly at random
    bitwise,     // flip each bit independently with probability 1/n
    heavy_tailed // power-law mutation strength, then bitwise with rate alpha/n
};

inline const char* to_string(MutationKind m) {
    switch (m) {
    case MutationKind::one_bit: return "one-bit";
    case MutationKind::bitwise: return "bitwise";
    case MutationKind::heavy_tailed: return "heavy-tailed";
    }
    return "?";
}

inline std::vector<Individual> select_fair(std::span<const Individual> population) {
    return std::vector<Individual>(population.begin(), population.end());
}

inline std::vector<Individual> select_uniform(std::span<const Individual> population,
                                              RandomSource& rng) {
    if (population.empty())
        throw std::invalid_argument("select_uniform: population must be non-empty");
    std::vector<Individual> selected;
    selected.reserve(population.size());
    for (std::size_t i = 0; i < population.size(); ++i)
        selected.push_back(population[rng.below(population.size())]);
    return selected;
}

/// Binary tournament: lower rank wins; on a rank tie the larger crowding
/// distance wins (infinity beats anything finite); on a full tie a fair coin
/// decides. Both contestants must carry rank and crowding, i.e. stem from a
/// ranked population.
inline const Individual& binary_tournament(const Individual& a, const Individual& b,
                                           RandomSource& rng) {
    if (!a.rank || !a.crowding || !b.rank || !b.crowding)
        throw std::invalid_argument("binary_tournament: contestants need rank and crowding set");
    if (*a.rank != *b.rank)
        return *a.rank < *b.rank ? a : b;
    if (*a.crowding != *b.crowding)
        return *a.crowding > *b.crowding ? a : b;
    return rng.bernoulli(0.5) ? a : b;
}

/// N independent binary tournaments; the two contestants of each tournament
/// are two distinct population slots (their genomes may still coincide).
inline std::vector<Individual> select_independent_tournaments(std::span<const Individual> population,
                                                              RandomSource& rng) {
    const std::size_t n = population.size();
    if (n < 2)
        throw std::invalid_argument("select_independent_tournaments: need at least 2 individuals");
    std::vector<Individual> selected;
    selected.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t i = rng.below(n);
        std::size_t j = rng.below(n - 1);
        if (j >= i)
            ++j;
        selected.push_back(binary_tournament(population[i], population[j], rng));
    }
    return selected;
}

/// Two random permutations of the population; each permutation is cut into
/// consecutive pairs and every pair plays one binary tournament. Every
/// individual is a contestant exactly once per permutation, and the N/2 + N/2
/// winners make up the N selected parents.
inline std::vector<Individual> select_two_permutation(std::span<const Individual> population,
                                                      RandomSource& rng) {
    const std::size_t n = population.size();
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("select_two_permutation: population size must be even and >= 2");
    std::vector<Individual> selected;
    selected.reserve(n);
    std::vector<std::size_t> perm(n);
    for (int round = 0; round < 2; ++round) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        shuffle(perm, rng);
        for (std::size_t i = 0; i + 1 < n; i += 2)
            selected.push_back(binary_tournament(population[perm[i]], population[perm[i + 1]], rng));
    }
    return selected;
}

inline std::vector<Individual> select_parents(SelectionScheme scheme,
                                              std::span<const Individual> population,
                                              RandomSource& rng) {
    switch (scheme) {
    case SelectionScheme::fair: return select_fair(population);
    case SelectionScheme::uniform: return select_uniform(population, rng);
    case SelectionScheme::independent_tournaments:
        return select_independent_tournaments(population, rng);
    case SelectionScheme::two_permutation_tournaments:
        return select_two_permutation(population, rng);
    }
    throw std::invalid_argument("select_parents: unknown scheme");
}

inline BitString mutate_one_bit(const BitString& x, RandomSource& rng) {
    BitString y = x;
    y.flip(rng.below(x.size()));
    return y;
}

inline BitString mutate_bitwise(const BitString& x, RandomSource& rng) {
    const double rate = 1.0 / static_cast<double>(x.size());
    BitString y = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (rng.bernoulli(rate))
            y.flip(i);
    return y;
}

/// Power-law distribution of the mutation strength alpha:
/// Pr[alpha] = alpha^-beta / C for alpha in [1 .. floor(n/2)], where C is the
/// normalizing sum. beta > 1; C <= beta/(beta-1) for every cutoff.
class HeavyTailedDistribution {
public:
    HeavyTailedDistribution(int n, double beta) : n_(n), beta_(beta) {
        if (n < 2)
            throw std::invalid_argument("HeavyTailedDistribution: n must be at least 2");
        if (!(beta > 1.0))
            throw std::invalid_argument("HeavyTailedDistribution: beta must exceed 1");
        cutoff_ = n / 2;
        normalizer_ = 0.0;
        std::vector<double> weight(static_cast<std::size_t>(cutoff_));
        for (int a = 1; a <= cutoff_; ++a) {
            weight[static_cast<std::size_t>(a - 1)] = std::pow(static_cast<double>(a), -beta);
            normalizer_ += weight[static_cast<std::size_t>(a - 1)];
        }
        cumulative_.resize(weight.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < weight.size(); ++i) {
            acc += weight[i] / normalizer_;
            cumulative_[i] = acc;
        }
        cumulative_.back() = 1.0;
    }

    int n() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    int cutoff() const noexcept { return cutoff_; }
    double normalizer() const noexcept { return normalizer_; }

    /// Pr[alpha], alpha in [1 .. cutoff].
    double probability(int alpha) const {
        if (alpha < 1 || alpha > cutoff_)
            throw std::out_of_range("HeavyTailedDistribution: alpha outside support");
        return std::pow(static_cast<double>(alpha), -beta_) / normalizer_;
    }

    /// Exact Pr[Hamming(x, y) = j] for y drawn by this operator: the mixture
    /// over alpha of the binomial flip-count probabilities at rate alpha/n.
    double step_probability(int j) const {
        if (j < 0 || j > n_)
            return 0.0;
        double total = 0.0;
        for (int a = 1; a <= cutoff_; ++a) {
            const double rate = static_cast<double>(a) / static_cast<double>(n_);
            total += probability(a) * binomial_pmf(n_, j, rate);
        }
        return total;
    }

    const std::vector<double>& cumulative() const noexcept { return cumulative_; }

    static double binomial_coefficient(int n, int j) {
        if (j < 0 || j > n)
            return 0.0;
        double c = 1.0;
        for (int i = 1; i <= j; ++i)
            c *= static_cast<double>(n - j + i) / static_cast<double>(i);
        return c;
    }

    static double binomial_pmf(int n, int j, double rate) {
        return binomial_coefficient(n, j) * std::pow(rate, j) * std::pow(1.0 - rate, n - j);
    }

private:
    int n_;
    int cutoff_;
    double beta_;
    double normalizer_;
    std::vector<double> cumulative_;
};

/// One draw of the mutation strength alpha, via inversion of the cumulative
/// table (one uniform draw, then binary search).
inline int sample_alpha(const HeavyTailedDistribution& dist, RandomSource& rng) {
    const double u = rng.next_double();
    const auto& cum = dist.cumulative();
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end())
        --it;
    return static_cast<int>(it - cum.begin()) + 1;
}

/// Heavy-tailed ("fast") mutation: draw a fresh alpha for this application,
/// then flip each bit independently with probability alpha/n.
inline BitString mutate_heavy_tailed(const BitString& x, const HeavyTailedDistribution& dist,
                                     RandomSource& rng) {
    if (x.size() != static_cast<std::size_t>(dist.n()))
        throw std::invalid_argument("mutate_heavy_tailed: genome length does not match distribution");
    const int alpha = sample_alpha(dist, rng);
    const double rate = static_cast<double>(alpha) / static_cast<double>(dist.n());
    BitString y = x;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (rng.bernoulli(rate))
            y.flip(i);
    return y;
}

/// Two-offspring uniform crossover: per position an independent coin decides
/// which parent the first child inherits from; the second child takes the bit
/// the first one did not.
inline std::pair<BitString, BitString> uniform_crossover(const BitString& p1, const BitString& p2,
                                                         RandomSource& rng) {
    if (p1.size() != p2.size())
        throw std::invalid_argument("uniform_crossover: parent length mismatch");
    BitString c1(p1.size());
    BitString c2(p1.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        const bool from_first = rng.bernoulli(0.5);
        c1.set(i, from_first ? p1.test(i) : p2.test(i));
        c2.set(i, from_first ? p2.test(i) : p1.test(i));
    }
    return {std::move(c1), std::move(c2)};
}

/// Dispatch helper used by the generation loops. `heavy` must be non-null for
/// the heavy-tailed kind and is ignored otherwise.
inline BitString mutate(MutationKind kind, const HeavyTailedDistribution* heavy, const BitString& x,
                        RandomSource& rng) {
    switch (kind) {
    case MutationKind::one_bit: return mutate_one_bit(x, rng);
    case MutationKind::bitwise: return mutate_bitwise(x, rng);
    case MutationKind::heavy_tailed:
        if (heavy == nullptr)
            throw std::invalid_argument("mutate: heavy-tailed distribution missing");
        return mutate_heavy_tailed(x, *heavy, rng);
    }
    throw std::invalid_argument("mutate: unknown mutation kind");
}

} // namespace ojzj
