#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asqlab/family.hpp"

namespace asqlab {

constexpr double kDefaultEnumCap = 1e7;

// A norm given as the sup of finitely many functional families over
// coordinates [1, m]. Vectors supported beyond m are rejected.
template <class S>
struct PolyNormSpace {
    std::string name;
    std::int64_t m = 0;
    std::vector<FunctionalFamily> families;

    S norm(const CoordVector<S>& f) const {
        check_in_truncation(f, m);
        S best{};
        for (const auto& fam : families) best = std::max(best, family_sup(fam, f, m));
        return best;
    }

    std::vector<S> per_family(const CoordVector<S>& f) const {
        std::vector<S> vals;
        vals.reserve(families.size());
        for (const auto& fam : families) vals.push_back(family_sup(fam, f, m));
        return vals;
    }

    // Index of the family whose sup attains the norm (smallest index on ties,
    // in the order the families were declared).
    std::size_t norming_family(const CoordVector<S>& f) const {
        auto vals = per_family(f);
        std::size_t best = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[best] < vals[i]) best = i;
        return best;
    }

    double enumeration_size(const CoordVector<S>& f) const {
        double total = 0;
        for (const auto& fam : families) total += enumeration_count(fam, f, m);
        return total;
    }

    // Independent norm computation: explicit sup over every enumerated
    // functional. Refuses when the enumeration exceeds the cap.
    S oracle_norm(const CoordVector<S>& f, double cap = kDefaultEnumCap) const {
        check_in_truncation(f, m);
        double total = enumeration_size(f);
        if (total > cap)
            throw CapError("oracle: enumeration of " + std::to_string(total) +
                               " functionals exceeds cap " + std::to_string(cap),
                           total, cap);
        S best{};
        for (const auto& fam : families)
            enumerate_family(fam, f, m, [&](const S& v) {
                if (best < v) best = v;
            });
        return best;
    }
};

template <class S>
struct MonotoneReport {
    std::vector<S> values; // ||prefix(f, K)|| for K = 1..m
    bool nondecreasing = true;
    bool attained = false; // equals ||f|| from the max support index on
};

// Checks that K -> ||prefix(f, K)|| is nondecreasing and reaches ||f||
// from the largest support index on.
template <class S>
MonotoneReport<S> monotone_check(const PolyNormSpace<S>& space, const CoordVector<S>& f,
                                 double rel_tol = kDefaultRelTol) {
    check_in_truncation(f, space.m);
    MonotoneReport<S> rep;
    S full = space.norm(f);
    S prev{};
    rep.attained = true;
    rep.values.reserve(static_cast<std::size_t>(space.m));
    for (std::int64_t K = 1; K <= space.m; ++K) {
        S v = space.norm(f.prefix(K));
        if (!le_tol(prev, v, rel_tol)) rep.nondecreasing = false;
        if (K >= f.max_support() && !close_tol(v, full, rel_tol)) rep.attained = false;
        prev = v;
        rep.values.push_back(v);
    }
    return rep;
}

} // namespace asqlab
