#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <ojzj/bitstring.hpp>

namespace ojzj {

/// Bi-objective value, both components maximized. OneJumpZeroJump is
/// integer-valued, so the components are exact integers; coverage bookkeeping
/// relies on exact equality.
struct ObjectivePair {
    int f1 = 0;
    int f2 = 0;

    friend constexpr auto operator<=>(const ObjectivePair&, const ObjectivePair&) = default;
};

inline std::ostream& operator<<(std::ostream& os, ObjectivePair p) {
    return os << '(' << p.f1 << ',' << p.f2 << ')';
}

/// u strictly dominates v: componentwise >= with at least one strict >.
constexpr bool strictly_dominates(ObjectivePair u, ObjectivePair v) noexcept {
    return u.f1 >= v.f1 && u.f2 >= v.f2 && (u.f1 > v.f1 || u.f2 > v.f2);
}

/// u weakly dominates v: componentwise >=.
constexpr bool weakly_dominates(ObjectivePair u, ObjectivePair v) noexcept {
    return u.f1 >= v.f1 && u.f2 >= v.f2;
}

/// OneJumpZeroJump instance: problem size n and jump size k.
///
/// The first objective is the Jump function of the ones-count (a fitness
/// valley of width k around the all-ones optimum), the second is the same
/// function of the zeros-count. Valid configurations satisfy 1 <= k <= n/4;
/// k = 1 degenerates to OneMinMax and is accepted with a warning.
struct OjzjProblem {
    int n = 0;
    int k = 0;

    /// |F*| = n - 2k + 3.
    int front_size() const noexcept { return n - 2 * k + 3; }
};

/// Validates a problem configuration. Throws std::invalid_argument on hard
/// errors; returns warnings (currently only for k = 1) otherwise.
inline std::vector<std::string> validate_problem(const OjzjProblem& p) {
    if (p.n < 1)
        throw std::invalid_argument("OjzjProblem: n must be positive");
    if (p.k < 1)
        throw std::invalid_argument("OjzjProblem: k must be positive");
    if (4 * p.k > p.n)
        throw std::invalid_argument("OjzjProblem: k must satisfy k <= n/4 (got n=" +
                                    std::to_string(p.n) + ", k=" + std::to_string(p.k) + ")");
    std::vector<std::string> warnings;
    if (p.k == 1)
        warnings.push_back("k=1 degenerates OneJumpZeroJump to OneMinMax");
    return warnings;
}

/// OneJumpZeroJump_{n,k}(x). f1 = k + |x|_1 if |x|_1 <= n-k or x = 1^n, else
/// n - |x|_1; f2 is the same with the roles of ones and zeros exchanged.
inline ObjectivePair evaluate(const OjzjProblem& p, const BitString& x) {
    if (x.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("evaluate: genome length does not match problem size");
    const int ones = static_cast<int>(x.count_ones());
    const int zeros = p.n - ones;
    ObjectivePair f;
    f.f1 = (ones <= p.n - p.k || ones == p.n) ? p.k + ones : p.n - ones;
    f.f2 = (zeros <= p.n - p.k || zeros == p.n) ? p.k + zeros : p.n - zeros;
    return f;
}

/// The exact Pareto front F* = {(a, 2k+n-a) | a in [2k..n] union {k, n+k}},
/// split into the inner part (reachable by one-bit steps along the front) and
/// the two extremal points (k, n+k) and (n+k, k), which require a k-bit jump.
struct FrontSpec {
    std::vector<ObjectivePair> all_points; // ascending f1, |all_points| = n-2k+3
    std::vector<ObjectivePair> inner;      // a in [2k..n]
    std::array<ObjectivePair, 2> outer;    // {(k, n+k), (n+k, k)}

    bool is_front_point(ObjectivePair v) const {
        return std::binary_search(all_points.begin(), all_points.end(), v);
    }
    bool is_outer_point(ObjectivePair v) const { return v == outer[0] || v == outer[1]; }
};

inline FrontSpec front_spec(const OjzjProblem& p) {
    validate_problem(p);
    FrontSpec spec;
    spec.outer = {ObjectivePair{p.k, p.n + p.k}, ObjectivePair{p.n + p.k, p.k}};
    spec.inner.reserve(static_cast<std::size_t>(p.n - 2 * p.k + 1));
    for (int a = 2 * p.k; a <= p.n; ++a)
        spec.inner.push_back({a, 2 * p.k + p.n - a});
    spec.all_points.reserve(spec.inner.size() + 2);
    spec.all_points.push_back(spec.outer[0]);
    spec.all_points.insert(spec.all_points.end(), spec.inner.begin(), spec.inner.end());
    spec.all_points.push_back(spec.outer[1]);
    return spec;
}

/// x in S*_I, i.e. k <= |x|_1 <= n-k.
inline bool in_inner_pareto_set(const OjzjProblem& p, const BitString& x) {
    if (x.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("in_inner_pareto_set: genome length mismatch");
    const int ones = static_cast<int>(x.count_ones());
    return p.k <= ones && ones <= p.n - p.k;
}

/// x in S*_O, i.e. x = 0^n or x = 1^n.
inline bool in_outer_pareto_set(const OjzjProblem& p, const BitString& x) {
    if (x.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("in_outer_pareto_set: genome length mismatch");
    const std::size_t ones = x.count_ones();
    return ones == 0 || ones == static_cast<std::size_t>(p.n);
}

inline bool in_pareto_set(const OjzjProblem& p, const BitString& x) {
    return in_inner_pareto_set(p, x) || in_outer_pareto_set(p, x);
}

} // namespace ojzj
