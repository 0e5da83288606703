#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "asqlab/coord_vector.hpp"
#include "asqlab/errors.hpp"
#include "asqlab/scalar.hpp"

namespace asqlab {

// Dyadic blocks: index j >= 2 lies in block n = floor(log2 j), i.e. the
// range [2^n, 2^(n+1)). Index 1 belongs to no block.
inline int block_of(std::int64_t j) {
    return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(j))) - 1;
}
inline std::int64_t block_first(int n) { return std::int64_t{1} << n; }
inline std::int64_t block_last(int n) { return (std::int64_t{1} << (n + 1)) - 1; }
inline std::int64_t block_inrange_size(int n, std::int64_t m) {
    std::int64_t lo = block_first(n);
    std::int64_t hi = std::min(block_last(n), m);
    return hi >= lo ? hi - lo + 1 : 0;
}

// One family of norming functionals. The norm of a space is the sup of
// |phi(f)| over the union of its families.
//   Average:   c * sum_{j in T} e_j^*  for every T subset of the naturals
//              with at most max_terms indices (coordinates beyond the
//              truncation read 0, so T may be taken inside [1, m]).
//   Scaled:    c * e_j^* for every j.
//   BlockPair: (e_l^* +- e_r^*) / 2 for l < r in the same dyadic block.
struct FunctionalFamily {
    enum class Kind { Average, Scaled, BlockPair };

    Kind kind;
    std::int64_t c_num = 1;
    std::int64_t c_den = 1;
    std::int64_t max_terms = 0;

    static FunctionalFamily average(std::int64_t den, std::int64_t terms) {
        if (den < 1 || terms < 1) throw ConfigError("family: average needs den >= 1, terms >= 1");
        return {Kind::Average, 1, den, terms};
    }
    static FunctionalFamily scaled(std::int64_t k) {
        if (k < 1) throw ConfigError("family: scaled needs k >= 1");
        return {Kind::Scaled, 1, k, 1};
    }
    static FunctionalFamily block_pairs() { return {Kind::BlockPair, 1, 2, 2}; }

    template <class S>
    S coeff() const {
        return scalar_traits<S>::from_ratio(c_num, c_den);
    }

    const char* kind_name() const {
        switch (kind) {
            case Kind::Average: return "average";
            case Kind::Scaled: return "scaled";
            case Kind::BlockPair: return "block_pair";
        }
        return "?";
    }
};

template <class S>
void check_in_truncation(const CoordVector<S>& f, std::int64_t m) {
    if (f.max_support() > m)
        throw InputError("vector: support index " + std::to_string(f.max_support()) +
                         " beyond truncation " + std::to_string(m));
}

// Closed-form sup of |phi(f)| over one family at truncation m.
template <class S>
S family_sup(const FunctionalFamily& fam, const CoordVector<S>& f, std::int64_t m) {
    check_in_truncation(f, m);
    const S zero{};
    switch (fam.kind) {
        case FunctionalFamily::Kind::Average: {
            if (fam.max_terms > m)
                throw ConfigError("family: average with " + std::to_string(fam.max_terms) +
                                  " terms exceeds truncation " + std::to_string(m));
            // Best subset takes either the largest positives or the largest
            // negatives, never a mix.
            std::vector<S> pos;
            std::vector<S> neg;
            for (const auto& [j, v] : f.entries()) {
                if (zero < v) pos.push_back(v);
                else neg.push_back(scalar_traits<S>::abs(v));
            }
            auto top_sum = [&](std::vector<S>& vals) {
                std::sort(vals.begin(), vals.end(), std::greater<S>());
                S s{};
                std::size_t take = std::min<std::size_t>(vals.size(), static_cast<std::size_t>(fam.max_terms));
                for (std::size_t i = 0; i < take; ++i) s += vals[i];
                return s;
            };
            return fam.coeff<S>() * std::max(top_sum(pos), top_sum(neg));
        }
        case FunctionalFamily::Kind::Scaled: {
            return fam.coeff<S>() * f.linf();
        }
        case FunctionalFamily::Kind::BlockPair: {
            S best{};
            const auto& es = f.entries();
            std::size_t i = 0;
            while (i < es.size() && es[i].first < 2) ++i;
            while (i < es.size()) {
                int n = block_of(es[i].first);
                S top1{};
                S top2{};
                while (i < es.size() && block_of(es[i].first) == n) {
                    S a = scalar_traits<S>::abs(es[i].second);
                    if (top1 < a) {
                        top2 = top1;
                        top1 = a;
                    } else if (top2 < a) {
                        top2 = a;
                    }
                    ++i;
                }
                if (block_inrange_size(n, m) >= 2) best = std::max(best, top1 + top2);
                // blocks with fewer than 2 in-range indices contribute nothing
            }
            return fam.coeff<S>() * best;
        }
    }
    throw InternalError("family: unknown kind");
}

// Number of functionals a full enumeration of the family visits; the Average
// enumeration is restricted to subsets of the support (value-preserving:
// off-support indices contribute 0 to every sum). Returned as double so
// astronomically large counts stay comparable against a cap.
template <class S>
double enumeration_count(const FunctionalFamily& fam, const CoordVector<S>& f, std::int64_t m) {
    switch (fam.kind) {
        case FunctionalFamily::Kind::Average: {
            double total = 0;
            double binom = 1;
            double sup = static_cast<double>(f.support_size());
            std::int64_t top = std::min<std::int64_t>(fam.max_terms, static_cast<std::int64_t>(sup));
            for (std::int64_t s = 0; s <= top; ++s) {
                total += binom;
                binom = binom * (sup - static_cast<double>(s)) / (static_cast<double>(s) + 1);
                if (!std::isfinite(total)) return total;
            }
            return total;
        }
        case FunctionalFamily::Kind::Scaled:
            return static_cast<double>(m);
        case FunctionalFamily::Kind::BlockPair: {
            double total = 0;
            for (int n = 1; block_first(n) <= m; ++n) {
                double sz = static_cast<double>(block_inrange_size(n, m));
                total += sz * (sz - 1); // ordered pair count = 2 * C(sz, 2)
            }
            return total;
        }
    }
    throw InternalError("family: unknown kind");
}

// Visits |phi(f)| for every enumerated functional of the family.
template <class S, class Visitor>
void enumerate_family(const FunctionalFamily& fam, const CoordVector<S>& f, std::int64_t m,
                      Visitor&& visit) {
    check_in_truncation(f, m);
    switch (fam.kind) {
        case FunctionalFamily::Kind::Average: {
            if (fam.max_terms > m)
                throw ConfigError("family: average with " + std::to_string(fam.max_terms) +
                                  " terms exceeds truncation " + std::to_string(m));
            const auto& es = f.entries();
            S c = fam.coeff<S>();
            // Depth-first over subsets of the support with at most max_terms
            // elements, carrying the running sum.
            auto rec = [&](auto&& self, std::size_t i, std::int64_t left, S sum) -> void {
                visit(scalar_traits<S>::abs(c * sum));
                if (left == 0) return;
                for (std::size_t j = i; j < es.size(); ++j)
                    self(self, j + 1, left - 1, sum + es[j].second);
            };
            rec(rec, 0, fam.max_terms, S{});
            return;
        }
        case FunctionalFamily::Kind::Scaled: {
            S c = fam.coeff<S>();
            for (std::int64_t j = 1; j <= m; ++j) visit(scalar_traits<S>::abs(c * f.get(j)));
            return;
        }
        case FunctionalFamily::Kind::BlockPair: {
            S c = fam.coeff<S>();
            for (int n = 1; block_first(n) <= m; ++n) {
                std::int64_t lo = block_first(n);
                std::int64_t hi = std::min(block_last(n), m);
                for (std::int64_t l = lo; l <= hi; ++l) {
                    for (std::int64_t r = l + 1; r <= hi; ++r) {
                        S a = f.get(l);
                        S b = f.get(r);
                        visit(scalar_traits<S>::abs(c * (a + b)));
                        visit(scalar_traits<S>::abs(c * (a - b)));
                    }
                }
            }
            return;
        }
    }
    throw InternalError("family: unknown kind");
}

// Explicit functional as sparse coefficients, used by certificates.
template <class S>
struct SparseFunctional {
    std::vector<std::pair<std::int64_t, S>> coeffs; // sorted by index

    S eval(const CoordVector<S>& f) const {
        S s{};
        for (const auto& [j, c] : coeffs) s += c * f.get(j);
        return s;
    }
};

// Whether phi or -phi is a member of the family at truncation m.
template <class S>
bool in_family(const FunctionalFamily& fam, const SparseFunctional<S>& phi, std::int64_t m) {
    const auto& cs = phi.coeffs;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].first < 1 || cs[i].first > m) return false;
        if (i > 0 && cs[i].first <= cs[i - 1].first) return false;
    }
    S c = fam.coeff<S>();
    switch (fam.kind) {
        case FunctionalFamily::Kind::Average: {
            if (cs.empty() || static_cast<std::int64_t>(cs.size()) > fam.max_terms) return false;
            bool all_pos = true;
            bool all_neg = true;
            for (const auto& [j, v] : cs) {
                if (!(v == c)) all_pos = false;
                if (!(v == -c)) all_neg = false;
            }
            return all_pos || all_neg;
        }
        case FunctionalFamily::Kind::Scaled: {
            if (cs.size() != 1) return false;
            return cs[0].second == c || cs[0].second == -c;
        }
        case FunctionalFamily::Kind::BlockPair: {
            if (cs.size() != 2) return false;
            if (cs[0].first < 2) return false;
            if (block_of(cs[0].first) != block_of(cs[1].first)) return false;
            S a = cs[0].second;
            S b = cs[1].second;
            return (a == c || a == -c) && (b == c || b == -c);
        }
    }
    return false;
}

} // namespace asqlab
