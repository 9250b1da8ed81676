#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <ojzj/random.hpp>

namespace ojzj {

/// Fixed-length binary genome. The length is set at construction and never
/// changes. Bit 0 is the leftmost character in the textual rendering.
///
/// Treat instances as plain values: copy, then modify the copy. Shared
/// (const) instances are safe to read concurrently.
///
/// Strings up to 64 bits live in a single inline word; longer ones spill to a
/// heap-allocated word array. The inline case is the hot path: the search
/// spaces studied here are a few dozen bits wide, and populations copy genomes
/// every generation.
class BitString {
public:
    /// All-zero string of length n. Rejects n = 0.
    explicit BitString(std::size_t n) : n_(n), word_(0) {
        if (n == 0)
            throw std::invalid_argument("BitString: length must be positive");
        if (!small())
            words_.assign((n + 63) / 64, 0);
    }

    static BitString zeros(std::size_t n) { return BitString(n); }

    static BitString ones(std::size_t n) {
        BitString s(n);
        if (s.small()) {
            s.word_ = tail_mask(n);
        } else {
            for (auto& w : s.words_)
                w = ~std::uint64_t{0};
            s.words_.back() = tail_mask(n % 64 == 0 ? 64 : n % 64);
        }
        return s;
    }

    std::size_t size() const noexcept { return n_; }

    bool test(std::size_t i) const {
        check_index(i);
        return small() ? (word_ >> i) & 1u : (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void flip(std::size_t i) {
        check_index(i);
        if (small())
            word_ ^= std::uint64_t{1} << i;
        else
            words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    void set(std::size_t i, bool value) {
        if (test(i) != value)
            flip(i);
    }

    std::size_t count_ones() const noexcept {
        if (small())
            return static_cast<std::size_t>(std::popcount(word_));
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const BitString& a, const BitString& b) {
        return a.n_ == b.n_ && (a.small() ? a.word_ == b.word_ : a.words_ == b.words_);
    }

    friend BitString random_bitstring(std::size_t n, RandomSource& rng);
    friend std::size_t hamming_distance(const BitString& a, const BitString& b);

private:
    bool small() const noexcept { return n_ <= 64; }

    void check_index(std::size_t i) const {
        if (i >= n_)
            throw std::out_of_range("BitString: bit index out of range");
    }

    static std::uint64_t tail_mask(std::size_t bits) noexcept {
        return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    }

    std::size_t n_;
    std::uint64_t word_;               // payload when n_ <= 64
    std::vector<std::uint64_t> words_; // payload otherwise; tail bits kept zero
};

/// Uniform random string: every bit is independently 0 or 1 with probability
/// 1/2. One raw 64-bit draw per word of storage.
inline BitString random_bitstring(std::size_t n, RandomSource& rng) {
    BitString s(n);
    if (s.small()) {
        s.word_ = rng.next_u64() & BitString::tail_mask(n);
    } else {
        for (auto& w : s.words_)
            w = rng.next_u64();
        s.words_.back() &= BitString::tail_mask(n % 64 == 0 ? 64 : n % 64);
    }
    return s;
}

inline std::size_t ones_count(const BitString& x) { return x.count_ones(); }

inline std::size_t zeros_count(const BitString& x) { return x.size() - x.count_ones(); }

/// Copy of x with exactly the given positions toggled. `positions` is a set:
/// passing an index twice toggles it twice and cancels out.
inline BitString flip_bits(const BitString& x, std::span<const std::size_t> positions) {
    BitString y = x;
    for (std::size_t p : positions)
        y.flip(p);
    return y;
}

inline BitString flip_bits(const BitString& x, std::initializer_list<std::size_t> positions) {
    return flip_bits(x, std::span<const std::size_t>(positions.begin(), positions.size()));
}

inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    if (a.small())
        return static_cast<std::size_t>(std::popcount(a.word_ ^ b.word_));
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
        c += static_cast<std::size_t>(std::popcount(a.words_[i] ^ b.words_[i]));
    return c;
}

/// n-character '0'/'1' rendering, index 0 leftmost.
inline std::string to_string(const BitString& x) {
    std::string s(x.size(), '0');
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x.test(i))
            s[i] = '1';
    return s;
}

inline BitString bitstring_from_string(std::string_view text) {
    BitString s(text.size()); // rejects empty
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            s.flip(i);
        else if (text[i] != '0')
            throw std::invalid_argument("bitstring_from_string: expected only '0' and '1'");
    }
    return s;
}

} // namespace ojzj
