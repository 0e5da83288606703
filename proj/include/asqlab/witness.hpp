#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "asqlab/spaces.hpp"

namespace asqlab {

// Outcome of a witness construction in a single coordinate space: a unit
// vector h together with max(||f_i + h||, ||f_i - h||) for every input and
// the bound the construction guarantees.
template <class S>
struct WitnessReport {
    std::string lemma; // wire name of the construction that produced h
    CoordVector<S> h;
    S h_norm{};
    std::vector<S> per_input; // max(||f_i + h||, ||f_i - h||)
    S bound{};
    bool pass = false;

    S worst() const {
        S w{};
        for (const auto& v : per_input) w = std::max(w, v);
        return w;
    }
};

template <class S>
S plus_minus_value(const PolyNormSpace<S>& space, const CoordVector<S>& f,
                   const CoordVector<S>& h) {
    return std::max(space.norm(f + h), space.norm(f - h));
}

template <class S>
void require_in_ball(const PolyNormSpace<S>& space, const CoordVector<S>& f, double rel_tol,
                     const char* who) {
    if (!le_tol(space.norm(f), scalar_traits<S>::from_int(1), rel_tol))
        throw InputError(std::string(who) + ": input must lie in the unit ball");
}

// Single-vector witness in a two-family space. Picks the sign class holding
// at least n indices of [1, m], takes the index of smallest absolute value
// there (ties to the smallest index), and returns h = k * e_l. Guarantees
// max(||f + h||, ||f - h||) <= 1 + 1/k for ||f|| <= 1; the averaging side of
// that estimate contributes k/n, so the space must satisfy k*k <= n.
template <class S>
WitnessReport<S> lemma22_witness(const FknSpace<S>& F, const CoordVector<S>& f,
                                 double rel_tol = kDefaultRelTol) {
    if (F.k * F.k > F.n) throw ConfigError("lemma22: needs k*k <= n for the 1 + 1/k bound");
    require_in_ball(F.space, f, rel_tol, "lemma22");
    if (F.m < 2 * F.n - 1)
        throw ConfigError("lemma22: needs truncation >= 2n-1 so one sign class has n indices");

    const S zero{};
    std::int64_t nonneg = 0;
    for (std::int64_t j = 1; j <= F.m; ++j)
        if (!(f.get(j) < zero)) ++nonneg;
    bool use_nonneg = nonneg >= F.n;

    std::int64_t l = 0;
    S best{};
    for (std::int64_t j = 1; j <= F.m; ++j) {
        S v = f.get(j);
        bool in_class = use_nonneg ? !(v < zero) : !(zero < v);
        if (!in_class) continue;
        S a = scalar_traits<S>::abs(v);
        if (l == 0 || a < best) {
            l = j;
            best = a;
        }
    }
    if (l == 0) throw InternalError("lemma22: no sign class of size n");

    WitnessReport<S> rep;
    rep.lemma = "lemma22";
    rep.h = CoordVector<S>::unit(l, scalar_traits<S>::from_int(F.k));
    rep.h_norm = F.space.norm(rep.h);
    rep.per_input = {plus_minus_value(F.space, f, rep.h)};
    S one = scalar_traits<S>::from_int(1);
    rep.bound = one + scalar_traits<S>::from_ratio(1, F.k);
    rep.pass = close_tol(rep.h_norm, one, rel_tol) && le_tol(rep.worst(), rep.bound, rel_tol);
    return rep;
}

// Multi-vector variant: one h = k * e_l serving every input at the 1 + 1/k
// bound, which requires k*k <= n. The candidate index must satisfy
// |f_i(l)| <= 1 for all i; at most 2(n-1) indices per input can violate
// that, so 2K(n-1)+1 coordinates always suffice.
template <class S>
WitnessReport<S> remark23_witness(const FknSpace<S>& F, const std::vector<CoordVector<S>>& fs,
                                  double rel_tol = kDefaultRelTol) {
    if (F.k * F.k > F.n) throw ConfigError("remark23: needs k*k <= n for the 1 + 1/k bound");
    if (fs.empty()) throw InputError("remark23: needs at least one input");
    for (const auto& f : fs) require_in_ball(F.space, f, rel_tol, "remark23");

    S one = scalar_traits<S>::from_int(1);
    std::int64_t l = 0;
    for (std::int64_t j = 1; j <= F.m && l == 0; ++j) {
        bool ok = true;
        for (const auto& f : fs)
            ok = ok && le_tol(scalar_traits<S>::abs(f.get(j)), one, rel_tol);
        if (ok) l = j;
    }
    double required = 2.0 * static_cast<double>(fs.size()) * (static_cast<double>(F.n) - 1) + 1;
    if (l == 0)
        throw TruncationError("remark23: no index is moderate for all inputs; truncation " +
                                  std::to_string(F.m) + " too small, " +
                                  std::to_string(static_cast<std::int64_t>(required)) +
                                  " always suffices",
                              required);

    WitnessReport<S> rep;
    rep.lemma = "remark23";
    rep.h = CoordVector<S>::unit(l, scalar_traits<S>::from_int(F.k));
    rep.h_norm = F.space.norm(rep.h);
    rep.per_input.reserve(fs.size());
    for (const auto& f : fs) rep.per_input.push_back(plus_minus_value(F.space, f, rep.h));
    rep.bound = one + scalar_traits<S>::from_ratio(1, F.k);
    rep.pass = close_tol(rep.h_norm, one, rel_tol) && le_tol(rep.worst(), rep.bound, rel_tol);
    return rep;
}

// A dyadic block free of large coordinates together with two indices whose
// values agree within eps across every input.
struct BlockPairResult {
    int block = 0;       // the block both indices came from
    std::int64_t l = 0;  // l < r, same block
    std::int64_t r = 0;
    int first_clean_block = 0; // first block past every large coordinate
    std::int64_t cells_per_axis = 0;
};

// Pigeonhole search: all coordinates beyond the large ones are at most 1/k
// in absolute value, so bucketing the K-tuples of values in cells of side
// eps forces a collision once a clean block has more indices than cells.
// Scans blocks in order and returns the first collision.
template <class S>
BlockPairResult lemma33_block_pair(const XnSpace<S>& X, const std::vector<CoordVector<S>>& fs,
                                   const S& eps, double rel_tol = kDefaultRelTol) {
    if (!(S{} < eps)) throw ConfigError("lemma33: eps must be positive");
    for (const auto& f : fs) require_in_ball(X.space, f, rel_tol, "lemma33");

    S inv_k = scalar_traits<S>::from_ratio(1, X.k);
    std::int64_t last_large = 1;
    for (const auto& f : fs)
        for (const auto& [j, v] : f.entries())
            if (inv_k < scalar_traits<S>::abs(v)) last_large = std::max(last_large, j);
    int n0 = last_large >= 2 ? block_of(last_large) + 1 : 1;

    S side = scalar_traits<S>::bucket_side(eps);
    std::int64_t cell_hi = scalar_traits<S>::floor_div(inv_k, side);
    std::int64_t cell_lo = scalar_traits<S>::floor_div(-inv_k, side);
    std::int64_t p = cell_hi - cell_lo + 1;

    // first block guaranteed to collide: 2^n > p^K
    double guarantee_bits = static_cast<double>(fs.size()) * std::log2(static_cast<double>(p));
    int n1 = n0;
    while (static_cast<double>(n1) <= guarantee_bits) ++n1;

    BlockPairResult res;
    res.first_clean_block = n0;
    res.cells_per_axis = p;
    for (int n = n0; block_last(n) <= X.m; ++n) {
        std::map<std::vector<std::int64_t>, std::int64_t> seen;
        for (std::int64_t j = block_first(n); j <= block_last(n); ++j) {
            std::vector<std::int64_t> key;
            key.reserve(fs.size());
            for (const auto& f : fs) key.push_back(scalar_traits<S>::floor_div(f.get(j), side));
            auto [it, fresh] = seen.insert({std::move(key), j});
            if (!fresh) {
                res.block = n;
                res.l = it->second;
                res.r = j;
                for (const auto& f : fs)
                    if (!le_tol(scalar_traits<S>::abs(f.get(res.l) - f.get(res.r)), eps, rel_tol))
                        throw InternalError("lemma33: colliding cells disagree beyond eps");
                return res;
            }
        }
        if (n >= n1)
            throw InternalError("lemma33: pigeonhole guarantee failed in block " +
                                std::to_string(n));
    }
    double required = std::pow(2.0, static_cast<double>(n1) + 1);
    throw TruncationError("lemma33: no fully in-range clean block collides; truncation " +
                              std::to_string(X.m) + " too small, " +
                              std::to_string(required) + " suffices",
                          required);
}

// Witness h = e_l - e_r from a clean block pair at eps = 1/N. The block-pair
// family norms h exactly to 1 and every family values f +- h within 1 + 1/N.
template <class S>
WitnessReport<S> lemma34_witness(const XnSpace<S>& X, const std::vector<CoordVector<S>>& fs,
                                 double rel_tol = kDefaultRelTol) {
    if (fs.empty()) throw InputError("lemma34: needs at least one input");
    S eps = scalar_traits<S>::from_ratio(1, X.N);
    auto pair = lemma33_block_pair(X, fs, eps, rel_tol);

    WitnessReport<S> rep;
    rep.lemma = "lemma34";
    rep.h.set(pair.l, scalar_traits<S>::from_int(1));
    rep.h.set(pair.r, scalar_traits<S>::from_int(-1));
    rep.h_norm = X.space.norm(rep.h);
    rep.per_input.reserve(fs.size());
    for (const auto& f : fs) rep.per_input.push_back(plus_minus_value(X.space, f, rep.h));
    S one = scalar_traits<S>::from_int(1);
    rep.bound = one + eps;
    rep.pass = close_tol(rep.h_norm, one, rel_tol) && le_tol(rep.worst(), rep.bound, rel_tol);
    return rep;
}

// Witness construction in a finite c0-style sum: pick the first component
// whose width M exceeds 1/eps strictly, build the block-pair witness there
// from the component projections, and embed it. The guaranteed bound
// 1 + 1/M is strictly below 1 + eps.
template <class S>
struct SumWitnessReport {
    std::string lemma;
    std::int64_t M = 0;        // width of the chosen component
    std::size_t comp_pos = 0;  // 0-based position of that component
    SumVector<S> h;
    S h_norm{};
    std::vector<S> per_input;
    S bound{};
    S eps{};
    bool pass = false;

    S worst() const {
        S w{};
        for (const auto& v : per_input) w = std::max(w, v);
        return w;
    }
};

template <class S>
SumWitnessReport<S> thm35_witness(const C0Sum<S>& sum, const std::vector<SumVector<S>>& xs,
                                  const S& eps, double rel_tol = kDefaultRelTol) {
    if (!(S{} < eps)) throw ConfigError("thm35: eps must be positive");
    if (xs.empty()) throw InputError("thm35: needs at least one input");
    S one = scalar_traits<S>::from_int(1);
    for (const auto& x : xs)
        if (!le_tol(sum_norm(sum, x), one, rel_tol))
            throw InputError("thm35: input must lie in the unit ball");

    // smallest component width M with M * eps > 1, earliest position on ties
    std::size_t pos = sum.comps.size();
    for (std::size_t i = 0; i < sum.comps.size(); ++i) {
        if (one < scalar_traits<S>::from_int(sum.comps[i].N) * eps) {
            if (pos == sum.comps.size() || sum.comps[i].N < sum.comps[pos].N) pos = i;
        }
    }
    if (pos == sum.comps.size()) {
        std::int64_t need = static_cast<std::int64_t>(1.0 / scalar_traits<S>::to_double(eps)) + 1;
        if (need % 2 != 0) ++need;
        throw ConfigError("thm35: no component width exceeds 1/eps; add a component with N >= " +
                          std::to_string(need));
    }

    std::vector<CoordVector<S>> projections;
    projections.reserve(xs.size());
    for (const auto& x : xs) projections.push_back(x.part(pos));
    auto wit = lemma34_witness(sum.comps[pos], projections, rel_tol);

    SumWitnessReport<S> rep;
    rep.lemma = "thm35";
    rep.M = sum.comps[pos].N;
    rep.comp_pos = pos;
    rep.h.set_part(pos, wit.h);
    rep.h_norm = sum_norm(sum, rep.h);
    rep.per_input.reserve(xs.size());
    for (const auto& x : xs)
        rep.per_input.push_back(
            std::max(sum_norm(sum, x + rep.h), sum_norm(sum, x - rep.h)));
    rep.bound = wit.bound; // 1 + 1/M
    rep.eps = eps;
    if (!(rep.bound < one + eps))
        throw InternalError("thm35: bound 1 + 1/M must be strictly below 1 + eps");
    rep.pass = close_tol(rep.h_norm, one, rel_tol) && le_tol(rep.worst(), rep.bound, rel_tol);
    return rep;
}

// Transfer to a two-part sup sum: a witness for the right part serves the
// pair because the pair norm is the max of the part norms and the left
// parts stay inside their unit ball.
template <class S>
struct PairWitnessReport {
    WitnessReport<S> right;     // construction in the right space
    std::vector<S> per_input;   // max over signs of ||(w_i, x_i +- h)||
    S bound{};
    bool max_identity = false;  // ||(w, x +- h)|| == max(||w||, ||x +- h||)
    bool pass = false;

    S worst() const {
        S w{};
        for (const auto& v : per_input) w = std::max(w, v);
        return w;
    }
};

template <class S>
PairWitnessReport<S> transfer_witness(const PolyNormSpace<S>& left,
                                      const std::vector<CoordVector<S>>& ws,
                                      const XnSpace<S>& right,
                                      const std::vector<CoordVector<S>>& xs,
                                      double rel_tol = kDefaultRelTol) {
    if (ws.size() != xs.size())
        throw InputError("transfer: needs one left part per right part");
    if (ws.empty()) throw InputError("transfer: needs at least one input pair");
    S one = scalar_traits<S>::from_int(1);
    for (std::size_t i = 0; i < ws.size(); ++i)
        if (!le_tol(pair_norm(left, right.space, ws[i], xs[i]), one, rel_tol))
            throw InputError("transfer: pair must lie in the unit ball");

    PairWitnessReport<S> rep;
    rep.right = lemma34_witness(right, xs, rel_tol);
    rep.bound = rep.right.bound;
    rep.max_identity = true;
    rep.per_input.reserve(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        S w_norm = left.norm(ws[i]);
        S vp_pair = pair_norm(left, right.space, ws[i], xs[i] + rep.right.h);
        S vm_pair = pair_norm(left, right.space, ws[i], xs[i] - rep.right.h);
        S vp_manual = std::max(w_norm, right.space.norm(xs[i] + rep.right.h));
        S vm_manual = std::max(w_norm, right.space.norm(xs[i] - rep.right.h));
        if (!(vp_pair == vp_manual) || !(vm_pair == vm_manual)) rep.max_identity = false;
        rep.per_input.push_back(std::max(vp_pair, vm_pair));
    }
    rep.pass = rep.right.pass && rep.max_identity && le_tol(rep.worst(), rep.bound, rel_tol);
    return rep;
}

// Runs the sum-space witness construction along a decreasing tolerance
// sequence, step n serving the first n points, and checks every value
// max(||x_i + h_n||, ||x_i - h_n||) lands inside (1 - eps_n, 1 + eps_n).
template <class S>
struct SequenceReport {
    std::vector<SumWitnessReport<S>> steps;
    bool pass = false;
};

template <class S>
SequenceReport<S> lemma43_sequence(const C0Sum<S>& sum, const std::vector<SumVector<S>>& points,
                                   const std::vector<S>& eps_seq,
                                   double rel_tol = kDefaultRelTol) {
    if (points.empty()) throw InputError("lemma43: needs at least one point");
    if (eps_seq.empty()) throw InputError("lemma43: needs a tolerance sequence");
    for (std::size_t i = 1; i < eps_seq.size(); ++i)
        if (!(eps_seq[i] < eps_seq[i - 1]))
            throw ConfigError("lemma43: tolerance sequence must decrease strictly");
    S one = scalar_traits<S>::from_int(1);
    for (const auto& x : points)
        if (!close_tol(sum_norm(sum, x), one, rel_tol))
            throw InputError("lemma43: points must be unit vectors");

    SequenceReport<S> rep;
    rep.pass = true;
    for (std::size_t n = 0; n < eps_seq.size(); ++n) {
        std::vector<SumVector<S>> prefix(points.begin(),
                                         points.begin() +
                                             static_cast<std::ptrdiff_t>(
                                                 std::min(points.size(), n + 1)));
        auto step = thm35_witness(sum, prefix, eps_seq[n], rel_tol);
        // two-sided pinch: each value must also stay above 1 - eps_n
        for (const auto& x : prefix) {
            for (int sgn : {+1, -1}) {
                S v = sum_norm(sum, sgn > 0 ? x + step.h : x - step.h);
                bool inside = le_tol(one - eps_seq[n], v, rel_tol) &&
                              le_tol(v, one + eps_seq[n], rel_tol);
                if (!inside) step.pass = false;
            }
        }
        rep.pass = rep.pass && step.pass;
        rep.steps.push_back(std::move(step));
    }
    return rep;
}

// Limit type of the witness sequence at x: the values ||x + h_n|| together
// with their tail variation, compared against max(||x||, 1). density_gap
// measures how far x (radially normalized when ||x|| > 1) sits from the
// point family the sequence was built for.
template <class S>
struct TauReport {
    std::vector<S> values; // ||x + h_n||
    S tau{};               // last value
    S tail_variation{};    // spread of the last three values
    S x_norm{};
    S target{};            // max(||x||, 1)
    S density_gap{};
    S deviation{};         // |tau - target|
};

template <class S>
TauReport<S> type_tau(const C0Sum<S>& sum, const SumVector<S>& x, const SequenceReport<S>& seq,
                      const std::vector<SumVector<S>>& points) {
    if (seq.steps.empty()) throw InputError("tau: needs a nonempty witness sequence");
    TauReport<S> rep;
    rep.x_norm = sum_norm(sum, x);
    S one = scalar_traits<S>::from_int(1);
    rep.target = std::max(rep.x_norm, one);
    for (const auto& step : seq.steps) rep.values.push_back(sum_norm(sum, x + step.h));
    rep.tau = rep.values.back();
    std::size_t tail = std::min<std::size_t>(3, rep.values.size());
    S lo = rep.values.back();
    S hi = rep.values.back();
    for (std::size_t i = rep.values.size() - tail; i < rep.values.size(); ++i) {
        lo = std::min(lo, rep.values[i]);
        hi = std::max(hi, rep.values[i]);
    }
    rep.tail_variation = hi - lo;
    if (x.empty()) {
        rep.density_gap = S{};
    } else {
        SumVector<S> ray = x;
        if (one < rep.x_norm) ray = x.scaled(one / rep.x_norm);
        bool first = true;
        for (const auto& d : points) {
            S dist = sum_norm(sum, ray - d);
            if (first || dist < rep.density_gap) rep.density_gap = dist;
            first = false;
        }
    }
    S dev = rep.tau - rep.target;
    rep.deviation = scalar_traits<S>::abs(dev);
    return rep;
}

} // namespace asqlab
