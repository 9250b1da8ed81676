#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ojzj {

/// splitmix64 finalizer step. Used to derive per-run seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of a single run, derived from the experiment master seed, the index of
/// the grid point, and the repetition index. Three chained splitmix64 rounds;
/// the additive constants separate the two index arguments so that (grid, rep)
/// and (rep, grid) do not collide.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t grid_id,
                                    std::uint64_t repetition) noexcept {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ (grid_id + 0x9E3779B97F4A7C15ull));
    s = splitmix64(s ^ (repetition + 0xD1B54A32D192ED03ull));
    return s;
}

/// Deterministic random source: equal seeds give bit-identical draw sequences
/// on every platform and every build.
///
/// The raw stream is std::mt19937_64, whose output is fully specified by the
/// C++ standard. The bounded/real draws below are implemented here rather than
/// with the <random> distribution templates, whose algorithms are
/// implementation-defined and differ between standard libraries.
///
/// A RandomSource is single-owner mutable state: never share one instance
/// between concurrent runs.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), from the top 53 bits of one raw draw.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Masked rejection sampling: draw the
    /// smallest power-of-two mask covering bound-1 and retry until the masked
    /// value lands below bound. Unbiased, and under two raw draws on average.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0)
            throw std::invalid_argument("RandomSource::below: bound must be positive");
        std::uint64_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            std::uint64_t r = gen_() & mask;
            if (r < bound)
                return r;
        }
    }

    /// True with probability p.
    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

/// In-place Fisher-Yates shuffle. std::shuffle is avoided on purpose: its draw
/// pattern is implementation-defined, this one is pinned.
template <typename T>
void shuffle(std::vector<T>& values, RandomSource& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace ojzj
