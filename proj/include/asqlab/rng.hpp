#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "asqlab/coord_vector.hpp"
#include "asqlab/errors.hpp"

namespace asqlab {

// Deterministic generator. Only the engine comes from the standard library
// (mt19937_64 output is fully specified); the distributions are hand-rolled
// because std::uniform_*_distribution sequences vary across standard
// libraries and reports must be byte-identical for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Child-stream seed, stable under reordering of trials.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Independent child stream, stable under reordering of trials.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) { return Rng(mix(seed, stream)); }

    std::uint64_t bits() { return eng_(); }

    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (hi < lo) throw InputError("rng: empty integer range");
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(eng_()); // full 64-bit range
        // Rejection sampling keeps the draw unbiased and deterministic.
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / span * span;
        std::uint64_t r = eng_();
        while (r >= limit) r = eng_();
        return lo + static_cast<std::int64_t>(r % span);
    }

    double gaussian() {
        // Box-Muller; cached second value intentionally omitted to keep the
        // draw count per call fixed.
        double u1 = u01();
        double u2 = u01();
        while (u1 <= 0) u1 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    std::vector<std::int64_t> distinct_ints(std::size_t count, std::int64_t lo, std::int64_t hi) {
        if (static_cast<std::int64_t>(count) > hi - lo + 1)
            throw InputError("rng: asked for more distinct values than the range holds");
        std::vector<std::int64_t> out;
        out.reserve(count);
        while (out.size() < count) {
            std::int64_t v = uniform_int(lo, hi);
            bool seen = false;
            for (std::int64_t w : out) seen = seen || w == v;
            if (!seen) out.push_back(v);
        }
        return out;
    }

  private:
    std::mt19937_64 eng_;
};

// Sparse random vector: support of random size up to max_support inside
// [1, index_hi]. Rational values are small fractions so downstream exact
// arithmetic stays far from overflow; float values are uniform in [-1, 1].
template <class S>
CoordVector<S> random_vector(Rng& rng, std::int64_t index_hi, std::int64_t max_support) {
    std::int64_t size = rng.uniform_int(0, std::min(max_support, index_hi));
    auto idxs = rng.distinct_ints(static_cast<std::size_t>(size), 1, index_hi);
    CoordVector<S> v;
    for (std::int64_t j : idxs) {
        if constexpr (scalar_traits<S>::exact) {
            std::int64_t num = rng.uniform_int(-4, 4);
            std::int64_t den = rng.uniform_int(1, 4);
            v.set(j, S(num, den));
        } else {
            v.set(j, rng.uniform(-1.0, 1.0));
        }
    }
    return v;
}

} // namespace asqlab
