#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "asqlab/rational.hpp"

namespace asqlab {

// Uniform access to the two value modes. Float mode compares with a relative
// tolerance (default 1e-9); rational mode compares exactly and ignores tol.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double from_ratio(std::int64_t n, std::int64_t d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static double from_int(std::int64_t n) { return static_cast<double>(n); }
    static double abs(double x) { return std::fabs(x); }
    static double to_double(double x) { return x; }
    static std::string str(double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }
    static double parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Rational r = Rational::parse(s);
            return r.to_double();
        }
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw InputError("number: trailing junk in '" + s + "'");
        return v;
    }
    static std::int64_t floor_div(double v, double side) {
        return static_cast<std::int64_t>(std::floor(v / side));
    }
    // Float cells shrink slightly so boundary values cannot round across.
    static double bucket_side(double eps) { return eps * (1.0 - 1e-12); }
    static const char* mode_name() { return "float"; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational from_ratio(std::int64_t n, std::int64_t d) { return Rational(n, d); }
    static Rational from_int(std::int64_t n) { return Rational(n); }
    static Rational abs(const Rational& x) { return x.abs(); }
    static double to_double(const Rational& x) { return x.to_double(); }
    static std::string str(const Rational& x) { return x.str(); }
    static Rational parse(const std::string& s) { return Rational::parse(s); }
    static std::int64_t floor_div(const Rational& v, const Rational& side) {
        return (v / side).floor();
    }
    static Rational bucket_side(const Rational& eps) { return eps; }
    static const char* mode_name() { return "rational"; }
};

constexpr double kDefaultRelTol = 1e-9;

// a <= b up to mode tolerance. Float: absolute slack rel*max(1,|a|,|b|).
template <class S>
bool le_tol(const S& a, const S& b, double rel = kDefaultRelTol) {
    if constexpr (scalar_traits<S>::exact) {
        (void)rel;
        return a <= b;
    } else {
        double slack = rel * std::max({1.0, std::fabs(a), std::fabs(b)});
        return a <= b + slack;
    }
}

template <class S>
bool close_tol(const S& a, const S& b, double rel = kDefaultRelTol) {
    return le_tol(a, b, rel) && le_tol(b, a, rel);
}

} // namespace asqlab
