#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "asqlab/poly_norm.hpp"

namespace asqlab {

// Two-family space: averages of up to n coordinates at weight 1/n together
// with single coordinates at weight 1/k.
template <class S>
struct FknSpace {
    std::int64_t k = 0;
    std::int64_t n = 0;
    std::int64_t m = 0;
    PolyNormSpace<S> space;
};

// Keeps every block/index computation comfortably inside int64.
constexpr std::int64_t kMaxTruncation = std::int64_t{1} << 46;

template <class S>
FknSpace<S> make_fkn(std::int64_t k, std::int64_t n, std::int64_t m) {
    if (k < 2) throw ConfigError("fkn: k must be >= 2");
    if (n < k) throw ConfigError("fkn: n must be >= k");
    if (m < n) throw ConfigError("fkn: truncation must be >= n");
    if (m > kMaxTruncation) throw ConfigError("fkn: truncation too large");
    FknSpace<S> s;
    s.k = k;
    s.n = n;
    s.m = m;
    s.space.name = "F(" + std::to_string(k) + "," + std::to_string(n) + ")";
    s.space.m = m;
    s.space.families = {FunctionalFamily::average(n, n), FunctionalFamily::scaled(k)};
    return s;
}

// Three-family space: averages of up to k*N coordinates at weight 1/N,
// single coordinates at weight 1/k, and dyadic block pairs.
template <class S>
struct XnSpace {
    std::int64_t k = 0;
    std::int64_t N = 0;
    std::int64_t m = 0;
    PolyNormSpace<S> space;
};

template <class S>
XnSpace<S> make_xn(std::int64_t k, std::int64_t N, std::int64_t m) {
    if (k < 2) throw ConfigError("xn: k must be >= 2");
    if (N < 1) throw ConfigError("xn: N must be >= 1");
    if (m < 2) throw ConfigError("xn: truncation must be >= 2");
    if (m > kMaxTruncation) throw ConfigError("xn: truncation too large");
    XnSpace<S> s;
    s.k = k;
    s.N = N;
    s.m = m;
    s.space.name = "X(" + std::to_string(N) + ")";
    s.space.m = m;
    s.space.families = {FunctionalFamily::average(N, k * N), FunctionalFamily::scaled(k),
                        FunctionalFamily::block_pairs()};
    return s;
}

enum class SumKind { C0, Linf };

// Finite c0-style sum of XnSpace components; the norm is the max of the
// component norms (for finitely many components the c0 and sup sums agree,
// they differ only in which witness constructions apply downstream).
template <class S>
struct C0Sum {
    std::vector<XnSpace<S>> comps;

    std::size_t size() const { return comps.size(); }
};

template <class S>
C0Sum<S> make_c0_sum(std::vector<XnSpace<S>> comps) {
    if (comps.empty()) throw ConfigError("c0 sum: needs at least one component");
    for (const auto& c : comps)
        if (c.N % 2 != 0) throw ConfigError("c0 sum: component N must be even");
    return C0Sum<S>{std::move(comps)};
}

// Element of a finite sum: one coordinate vector per component position.
// Trailing all-zero components may be omitted.
template <class S>
struct SumVector {
    std::vector<CoordVector<S>> parts;

    const CoordVector<S>& part(std::size_t i) const {
        static const CoordVector<S> empty;
        return i < parts.size() ? parts[i] : empty;
    }
    void set_part(std::size_t i, CoordVector<S> v) {
        if (parts.size() <= i) parts.resize(i + 1);
        parts[i] = std::move(v);
    }
    bool empty() const {
        for (const auto& p : parts)
            if (!p.empty()) return false;
        return true;
    }

    friend SumVector operator+(const SumVector& a, const SumVector& b) {
        SumVector r;
        r.parts.resize(std::max(a.parts.size(), b.parts.size()));
        for (std::size_t i = 0; i < r.parts.size(); ++i) r.parts[i] = a.part(i) + b.part(i);
        return r;
    }
    friend SumVector operator-(const SumVector& a, const SumVector& b) {
        return a + b.scaled(scalar_traits<S>::from_int(-1));
    }
    SumVector scaled(const S& t) const {
        SumVector r;
        r.parts.reserve(parts.size());
        for (const auto& p : parts) r.parts.push_back(p.scaled(t));
        return r;
    }
};

template <class S>
S sum_norm(const C0Sum<S>& sum, const SumVector<S>& x) {
    if (x.parts.size() > sum.comps.size())
        throw InputError("sum vector: " + std::to_string(x.parts.size()) + " parts, space has " +
                         std::to_string(sum.comps.size()) + " components");
    S best{};
    for (std::size_t i = 0; i < x.parts.size(); ++i)
        best = std::max(best, sum.comps[i].space.norm(x.parts[i]));
    return best;
}

// Max norm of a pair (left, right) from two possibly different spaces.
template <class S>
S pair_norm(const PolyNormSpace<S>& left, const PolyNormSpace<S>& right, const CoordVector<S>& w,
            const CoordVector<S>& x) {
    return std::max(left.norm(w), right.norm(x));
}

// Shell pairing of (component t, coordinate j) onto a single index axis:
// shell s = max(t, j) occupies positions (s-1)^2+1 .. s^2, enumerating
// (s,1)..(s,s-1), then (1,s)..(s-1,s), then (s,s).
inline std::int64_t interleave_index(std::int64_t t, std::int64_t j) {
    if (t < 1 || j < 1) throw InputError("interleave: component and coordinate must be >= 1");
    std::int64_t s = std::max(t, j);
    if (t == j) return s * s;
    if (t > j) return (s - 1) * (s - 1) + j;
    return (s - 1) * (s - 1) + (s - 1) + t;
}

inline std::pair<std::int64_t, std::int64_t> deinterleave_index(std::int64_t pos) {
    if (pos < 1) throw InputError("interleave: position must be >= 1");
    auto s = static_cast<std::int64_t>(std::llround(std::floor(std::sqrt(static_cast<double>(pos)))));
    while (s * s < pos) ++s;
    while ((s - 1) * (s - 1) >= pos) --s;
    std::int64_t r = pos - (s - 1) * (s - 1);
    if (r <= s - 1) return {s, r};
    if (r <= 2 * (s - 1)) return {r - (s - 1), s};
    return {s, s};
}

// Flattens a sum vector to a single coordinate vector along the pairing.
template <class S>
CoordVector<S> interleave(const SumVector<S>& x) {
    CoordVector<S> flat;
    for (std::size_t i = 0; i < x.parts.size(); ++i)
        for (const auto& [j, v] : x.parts[i].entries())
            flat.set(interleave_index(static_cast<std::int64_t>(i + 1), j), v);
    return flat;
}

template <class S>
SumVector<S> deinterleave(const CoordVector<S>& flat) {
    SumVector<S> x;
    for (const auto& [pos, v] : flat.entries()) {
        auto [t, j] = deinterleave_index(pos);
        if (x.parts.size() < static_cast<std::size_t>(t)) x.parts.resize(static_cast<std::size_t>(t));
        x.parts[static_cast<std::size_t>(t) - 1].set(j, v);
    }
    return x;
}

} // namespace asqlab
