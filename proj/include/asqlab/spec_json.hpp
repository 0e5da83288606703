#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asqlab/spaces.hpp"

namespace asqlab {

// Wire form of a space configuration: {kind, k, n, N, m, components}.
// `components` lists the widths of a c0-style sum; k and m are shared.
struct SpaceSpec {
    std::string kind; // fkn | xn | c0_sum
    std::int64_t k = 0;
    std::int64_t n = 0;
    std::int64_t N = 0;
    std::int64_t m = 0;
    std::vector<std::int64_t> components;
};

// Parses and validates the JSON text; unknown kinds, missing or extra
// fields, and non-integer values all raise ConfigError.
SpaceSpec parse_space_spec(const std::string& text);

template <class S>
FknSpace<S> build_fkn(const SpaceSpec& spec) {
    if (spec.kind != "fkn") throw ConfigError("space spec: expected kind fkn, got " + spec.kind);
    return make_fkn<S>(spec.k, spec.n, spec.m);
}

template <class S>
XnSpace<S> build_xn(const SpaceSpec& spec) {
    if (spec.kind != "xn") throw ConfigError("space spec: expected kind xn, got " + spec.kind);
    return make_xn<S>(spec.k, spec.N, spec.m);
}

template <class S>
C0Sum<S> build_c0_sum(const SpaceSpec& spec) {
    if (spec.kind != "c0_sum")
        throw ConfigError("space spec: expected kind c0_sum, got " + spec.kind);
    std::vector<XnSpace<S>> comps;
    comps.reserve(spec.components.size());
    for (std::int64_t N : spec.components) comps.push_back(make_xn<S>(spec.k, N, spec.m));
    return make_c0_sum<S>(std::move(comps));
}

} // namespace asqlab
