#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "asqlab/errors.hpp"

namespace asqlab {

// Exact rational scalar on int64 numerator/denominator.
// Invariants: den > 0, gcd(|num|, den) == 1. All arithmetic goes through
// __int128 intermediates and throws Error("rational overflow") instead of
// wrapping, so certification results are either exact or loudly absent.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw InputError("rational: zero denominator");
        __int128 nn = n;
        __int128 dd = d;
        if (dd < 0) {
            nn = -nn;
            dd = -dd;
        }
        assign_reduced(nn, dd);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw InputError("rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    // Cross multiplication fits __int128: |num| < 2^63 and den < 2^63.
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    // Largest integer <= value.
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "p", "p/q", leading sign on p.
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                return Rational(parse_int(s));
            }
            return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("rational: cannot parse '" + s + "'");
        }
    }

  private:
    using i128 = __int128;

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;

    static std::int64_t parse_int(const std::string& s) {
        if (s.empty()) throw InputError("rational: empty number");
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw InputError("rational: trailing junk in '" + s + "'");
        return v;
    }

    static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
        while (b != 0) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void assign_reduced(i128 n, i128 d) {
        unsigned __int128 un = n < 0 ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
        unsigned __int128 ud = static_cast<unsigned __int128>(d);
        unsigned __int128 g = un == 0 ? ud : gcd128(un, ud);
        n /= static_cast<i128>(g);
        d /= static_cast<i128>(g);
        constexpr i128 lo = std::numeric_limits<std::int64_t>::min();
        constexpr i128 hi = std::numeric_limits<std::int64_t>::max();
        if (n < lo || n > hi || d > hi) throw Error("rational overflow");
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }

    static Rational make(i128 n, i128 d) {
        Rational r;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        r.assign_reduced(n, d);
        return r;
    }
};

inline Rational abs(const Rational& r) { return r.abs(); }

} // namespace asqlab
