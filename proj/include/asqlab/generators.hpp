#pragma once

#include "asqlab/rng.hpp"
#include "asqlab/spaces.hpp"

namespace asqlab {

// Random vector of norm exactly 1 (rational) or 1 up to rounding (float),
// supported on at most max_support indices inside [1, index_hi].
template <class S>
CoordVector<S> random_unit(const PolyNormSpace<S>& space, Rng& rng, std::int64_t index_hi,
                           std::int64_t max_support) {
    for (;;) {
        auto f = random_vector<S>(rng, index_hi, max_support);
        S n = space.norm(f);
        if (n == S{}) continue;
        return f.scaled(scalar_traits<S>::from_int(1) / n);
    }
}

// Random unit element of a finite sum, each part supported on at most
// max_support indices inside [1, index_hi] of its component.
template <class S>
SumVector<S> random_unit_sum(const C0Sum<S>& sum, Rng& rng, std::int64_t index_hi,
                             std::int64_t max_support) {
    for (;;) {
        SumVector<S> x;
        for (std::size_t c = 0; c < sum.comps.size(); ++c)
            x.set_part(c, random_vector<S>(rng, std::min(index_hi, sum.comps[c].m), max_support));
        S n = sum_norm(sum, x);
        if (n == S{}) continue;
        return x.scaled(scalar_traits<S>::from_int(1) / n);
    }
}

} // namespace asqlab
