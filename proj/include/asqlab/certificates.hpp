#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "asqlab/spaces.hpp"

namespace asqlab {

// The vector that defeats every small symmetric perturbation: 2 at the
// first index of each of the blocks 2 .. N/2+1. Averaging the N/2 twos at
// weight 1/N gives exactly 1; every block pair reaches 1; no family
// exceeds it, so the norm is exactly 1.
template <class S>
CoordVector<S> build_counterexample(const XnSpace<S>& X) {
    if (X.N % 2 != 0 || X.N < 2) throw ConfigError("counterexample: N must be even and >= 2");
    if (X.N < X.k) throw ConfigError("counterexample: needs N >= k");
    std::int64_t top_block = X.N / 2 + 1;
    // One spare block past the support blocks keeps zero-padding room for
    // the refutation functionals.
    std::int64_t required_m = std::int64_t{1} << (X.N / 2 + 3);
    if (X.m < required_m)
        throw TruncationError("counterexample: blocks 2.." + std::to_string(top_block + 1) +
                                  " must lie inside the truncation; need m >= " +
                                  std::to_string(required_m),
                              static_cast<double>(required_m));
    CoordVector<S> f;
    for (std::int64_t n = 2; n <= top_block; ++n)
        f.set(block_first(static_cast<int>(n)), scalar_traits<S>::from_int(2));
    if (!(X.space.norm(f) == scalar_traits<S>::from_int(1)))
        throw InternalError("counterexample: norm must be exactly 1");
    return f;
}

// A norming functional from one of the space's families, a sign, and the
// value it certifies: |phi(f + sign*h)| = achieved > 1 + eps.
template <class S>
struct RefutationCertificate {
    std::string case_tag;        // blockClaim | case1_A | case2_B | case3_C
    bool derived_from_peak = false; // case2 reuses the case3 construction
    std::size_t family = 0;      // index into the space's family list
    SparseFunctional<S> phi;
    int sign = +1;
    S achieved{};
    S display_bound{};           // guaranteed lower estimate for this case
    S eps{};
    S margin{};                  // achieved - (1 + eps)
};

namespace detail {

template <class S>
RefutationCertificate<S> finish_certificate(const XnSpace<S>& X, const CoordVector<S>& f,
                                            const CoordVector<S>& h, const S& eps,
                                            RefutationCertificate<S> cert,
                                            double rel_tol = kDefaultRelTol) {
    CoordVector<S> g = cert.sign > 0 ? f + h : f - h;
    cert.achieved = scalar_traits<S>::abs(cert.phi.eval(g));
    S one = scalar_traits<S>::from_int(1);
    cert.eps = eps;
    cert.margin = cert.achieved - (one + eps);
    if (!in_family(X.space.families[cert.family], cert.phi, X.m))
        throw InternalError("refute: emitted functional left its family");
    // strict clearance: in float mode the margin must beat the tolerance
    if (le_tol(cert.achieved, one + eps, rel_tol))
        throw InternalError("refute: certificate only achieves " +
                            scalar_traits<S>::str(cert.achieved) + " at eps " +
                            scalar_traits<S>::str(eps) + "; norming gap " +
                            scalar_traits<S>::str(cert.margin));
    return cert;
}

// Average functional over E and the peak index l (not in E): its value at
// f + sign*h is at least 1 + 1/N - 2*eps once the block claim holds.
template <class S>
RefutationCertificate<S> peak_certificate(const XnSpace<S>& X, const CoordVector<S>& f,
                                          const CoordVector<S>& h, const S& eps, std::int64_t l,
                                          const char* tag, bool derived, double rel_tol) {
    const S zero{};
    if (!(f.get(l) == zero))
        throw InternalError("refute: peak index landed inside the support of f");
    RefutationCertificate<S> cert;
    cert.case_tag = tag;
    cert.derived_from_peak = derived;
    cert.family = 0;
    cert.sign = h.get(l) < zero ? -1 : +1;
    S c = scalar_traits<S>::from_ratio(1, X.N);
    for (const auto& e : f.entries()) cert.phi.coeffs.push_back({e.first, c});
    cert.phi.coeffs.push_back({l, c});
    std::sort(cert.phi.coeffs.begin(), cert.phi.coeffs.end());
    S one = scalar_traits<S>::from_int(1);
    cert.display_bound = one + scalar_traits<S>::from_ratio(1, X.N) - (eps + eps);
    return finish_certificate(X, f, h, eps, std::move(cert), rel_tol);
}

} // namespace detail

// Certifies that the counterexample f admits no almost-square perturbation:
// for the given unit h produces a functional phi and sign with
// |phi(f +- h)| > 1 + eps. Requires eps < 1/(3N), the range in which every
// case's guaranteed bound clears 1 + eps.
template <class S>
RefutationCertificate<S> refute_unit_h(const XnSpace<S>& X, const CoordVector<S>& h, const S& eps,
                                       double rel_tol = kDefaultRelTol) {
    auto f = build_counterexample(X);
    S one = scalar_traits<S>::from_int(1);
    if (!(S{} < eps) || !(eps * scalar_traits<S>::from_int(3 * X.N) < one))
        throw ConfigError("refute: needs 0 < eps < 1/(3N)");
    if (!close_tol(X.space.norm(h), one, rel_tol))
        throw InputError("refute: h must be a unit vector");

    const S zero{};
    std::int64_t top_block = X.N / 2 + 1;

    // Block claim: inside each block holding a support index of f, the mass
    // |h at the support index| + |h elsewhere| stays within 2*eps, or the
    // aligned block pair already values f +- h above 1 + eps.
    for (std::int64_t n = 2; n <= top_block; ++n) {
        std::int64_t l0 = block_first(static_cast<int>(n));
        std::int64_t hi = std::min(block_last(static_cast<int>(n)), X.m);
        S h0 = scalar_traits<S>::abs(h.get(l0));
        S best{};
        std::int64_t other = l0 + 1; // a second in-range index always exists here
        for (std::int64_t j = l0 + 1; j <= hi; ++j) {
            S a = scalar_traits<S>::abs(h.get(j));
            if (best < a) {
                best = a;
                other = j;
            }
        }
        if (eps + eps < h0 + best) {
            RefutationCertificate<S> cert;
            cert.case_tag = "blockClaim";
            cert.family = 2;
            cert.sign = h.get(l0) < zero ? -1 : +1;
            S half = scalar_traits<S>::from_ratio(1, 2);
            S other_coeff =
                (cert.sign > 0 ? h.get(other) : -h.get(other)) < zero ? -half : half;
            cert.phi.coeffs = {{l0, half}, {other, other_coeff}};
            cert.display_bound = one + (h0 + best) * half;
            return detail::finish_certificate(X, f, h, eps, std::move(cert), rel_tol);
        }
    }

    // Dispatch on the family that norms h (first on ties).
    std::size_t fam = X.space.norming_family(h);
    if (fam == 1 || fam == 2) {
        // Peak coordinate of the scaled-coordinate or block-pair norming
        // functional carries |h_l| >= 1; the block claim keeps it outside
        // the support blocks of f.
        std::int64_t l = 0;
        S best{};
        for (const auto& [j, v] : h.entries()) {
            S a = scalar_traits<S>::abs(v);
            if (l == 0 || best < a) {
                l = j;
                best = a;
            }
        }
        if (l == 0 || !le_tol(one, best, rel_tol))
            throw InternalError("refute: norming peak below 1");
        return detail::peak_certificate(X, f, h, eps, l, fam == 1 ? "case2_B" : "case3_C",
                                        fam == 1, rel_tol);
    }

    // The averaging family norms h: some subset of one sign class sums to
    // N. Keep its largest positions outside the support of f; the claim
    // bounds what dropping the support positions can cost, and dropping
    // down to capacity kN - N/2 costs at most a 1/(2k-1) fraction.
    std::vector<std::pair<std::int64_t, S>> pos;
    std::vector<std::pair<std::int64_t, S>> neg;
    for (const auto& [j, v] : h.entries()) {
        if (zero < v) pos.push_back({j, v});
        else if (v < zero) neg.push_back({j, -v});
    }
    auto class_sum = [&](std::vector<std::pair<std::int64_t, S>>& cls) {
        std::sort(cls.begin(), cls.end(), [](const auto& a, const auto& b) {
            if (!(a.second == b.second)) return b.second < a.second;
            return a.first < b.first;
        });
        if (static_cast<std::int64_t>(cls.size()) > X.k * X.N)
            cls.resize(static_cast<std::size_t>(X.k * X.N));
        S s{};
        for (const auto& [j, v] : cls) s += v;
        return s;
    };
    S pos_sum = class_sum(pos);
    S neg_sum = class_sum(neg);
    RefutationCertificate<S> cert;
    cert.case_tag = "case1_A";
    cert.family = 0;
    cert.sign = neg_sum < pos_sum || pos_sum == neg_sum ? +1 : -1;
    const auto& cls = cert.sign > 0 ? pos : neg;

    S c = scalar_traits<S>::from_ratio(1, X.N);
    for (const auto& e : f.entries()) cert.phi.coeffs.push_back({e.first, c});
    std::int64_t room = X.k * X.N - X.N / 2;
    std::int64_t used = 0;
    for (const auto& [j, v] : cls) {
        if (used >= room) break;
        if (!(f.get(j) == zero)) continue; // support positions of f are excluded
        cert.phi.coeffs.push_back({j, c});
        ++used;
    }
    std::sort(cert.phi.coeffs.begin(), cert.phi.coeffs.end());
    S kk = scalar_traits<S>::from_ratio(1, 2 * X.k - 1);
    cert.display_bound = scalar_traits<S>::from_int(2) - (eps + eps) - kk;
    return detail::finish_certificate(X, f, h, eps, std::move(cert), rel_tol);
}

} // namespace asqlab
