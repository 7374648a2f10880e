#pragma once

// Double-double arithmetic: an unevaluated pair hi+lo of IEEE doubles giving
// ~106 bits of significand.  Used wherever a plain double phase would lose
// too much: products gamma*y reach ~1e13, so reducing them mod 2*pi in
// doubles alone would leave only ~1e-3 rad of accuracy, far short of the
// 1e-9 guarantee the zero-sum evaluators advertise.
//
// The error-free transforms (two_sum, two_prod) require strict IEEE double
// evaluation; the build disables FP contraction globally to keep them exact.

#include <cmath>
#include <cstdint>
#include <string>

#include "mh/errors.hpp"

namespace mh {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace detail {

struct pair2 {
    double s;
    double e;
};

// Knuth two-sum: s + e == a + b exactly.
inline pair2 two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// Fast two-sum, valid when |a| >= |b|.
inline pair2 quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

// Error-free product via fused multiply-add.
inline pair2 two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace detail

inline dd dd_add(const dd& a, const dd& b) {
    auto [s1, s2] = detail::two_sum(a.hi, b.hi);
    auto [t1, t2] = detail::two_sum(a.lo, b.lo);
    s2 += t1;
    auto [r1, r2] = detail::quick_two_sum(s1, s2);
    r2 += t2;
    auto [z1, z2] = detail::quick_two_sum(r1, r2);
    return {z1, z2};
}

inline dd dd_neg(const dd& a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(const dd& a, const dd& b) { return dd_add(a, dd_neg(b)); }

inline dd dd_add_d(const dd& a, double b) { return dd_add(a, dd(b)); }

inline dd dd_sub_d(const dd& a, double b) { return dd_add(a, dd(-b)); }

inline dd dd_mul(const dd& a, const dd& b) {
    auto [p, e] = detail::two_prod(a.hi, b.hi);
    e += a.hi * b.lo + a.lo * b.hi;
    auto [z1, z2] = detail::quick_two_sum(p, e);
    return {z1, z2};
}

inline dd dd_mul_d(const dd& a, double b) {
    auto [p, e] = detail::two_prod(a.hi, b);
    e += a.lo * b;
    auto [z1, z2] = detail::quick_two_sum(p, e);
    return {z1, z2};
}

inline dd dd_div(const dd& a, const dd& b) {
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul_d(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul_d(b, q2));
    double q3 = r.hi / b.hi;
    auto [s, e] = detail::quick_two_sum(q1, q2);
    dd q{s, e};
    return dd_add_d(q, q3);
}

inline dd dd_div_d(const dd& a, double b) { return dd_div(a, dd(b)); }

inline dd dd_from_ll(long long v) {
    double hi = static_cast<double>(v);
    double lo = static_cast<double>(v - static_cast<long long>(hi));
    return {hi, lo};
}

inline bool dd_less(const dd& a, const dd& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline dd dd_abs(const dd& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? dd_neg(a) : a; }

// 10^k as dd; exact for small k, ~1 ulp (2^-105) otherwise.
inline dd dd_pow10(int k) {
    bool neg = k < 0;
    int n = neg ? -k : k;
    dd base{10.0};
    dd acc{1.0};
    while (n > 0) {
        if (n & 1) acc = dd_mul(acc, base);
        base = dd_mul(base, base);
        n >>= 1;
    }
    return neg ? dd_div(dd(1.0), acc) : acc;
}

// Parses a plain decimal number ("-495.702833137", "2.8e-8") into a dd.
// Exact whenever the literal has at most ~31 significant digits.
// Throws format_error on malformed input.
inline dd parse_decimal_dd(const std::string& text) {
    const char* p = text.c_str();
    bool neg = false;
    if (*p == '+' || *p == '-') {
        neg = (*p == '-');
        ++p;
    }
    dd mant{0.0};
    int frac_digits = 0;
    int digits_seen = 0;
    bool dot = false;
    for (; *p; ++p) {
        if (*p == '.') {
            if (dot) throw format_error("malformed number: '" + text + "'");
            dot = true;
        } else if (*p >= '0' && *p <= '9') {
            mant = dd_add_d(dd_mul_d(mant, 10.0), double(*p - '0'));
            ++digits_seen;
            if (dot) ++frac_digits;
        } else {
            break;
        }
    }
    if (digits_seen == 0) throw format_error("malformed number: '" + text + "'");
    long exp10 = 0;
    if (*p == 'e' || *p == 'E') {
        ++p;
        bool eneg = false;
        if (*p == '+' || *p == '-') {
            eneg = (*p == '-');
            ++p;
        }
        if (*p < '0' || *p > '9') throw format_error("malformed exponent: '" + text + "'");
        for (; *p >= '0' && *p <= '9'; ++p) {
            exp10 = exp10 * 10 + (*p - '0');
            if (exp10 > 100000) throw format_error("exponent out of range: '" + text + "'");
        }
        if (eneg) exp10 = -exp10;
    }
    if (*p != '\0') throw format_error("trailing characters in number: '" + text + "'");
    long e = exp10 - frac_digits;
    dd v = mant;
    if (e > 0)
        v = dd_mul(v, dd_pow10(int(e)));
    else if (e < 0)
        v = dd_div(v, dd_pow10(int(-e)));
    return neg ? dd_neg(v) : v;
}

// Fixed-point decimal rendering with round-half-away from zero; used for
// reproducing published interval endpoints digit-for-digit.  Requires
// |value * 10^frac_digits| < 2^62.
inline std::string dd_to_decimal_string(const dd& value, int frac_digits) {
    dd scaled = dd_mul(value, dd_pow10(frac_digits));
    bool neg = scaled.hi < 0.0 || (scaled.hi == 0.0 && scaled.lo < 0.0);
    dd mag = neg ? dd_neg(scaled) : scaled;
    long long ip = static_cast<long long>(mag.hi);
    dd rem = dd_sub(mag, dd_from_ll(ip));
    while (rem.hi < 0.0) {
        --ip;
        rem = dd_add_d(rem, 1.0);
    }
    while (rem.hi >= 1.0) {
        ++ip;
        rem = dd_sub_d(rem, 1.0);
    }
    if (rem.hi > 0.5 || (rem.hi == 0.5 && rem.lo >= 0.0)) ++ip;
    std::string digits = std::to_string(ip);
    if (frac_digits > 0) {
        if (static_cast<int>(digits.size()) <= frac_digits)
            digits.insert(0, frac_digits + 1 - digits.size(), '0');
        digits.insert(digits.size() - frac_digits, ".");
    }
    return neg ? "-" + digits : digits;
}

// --- reduction mod 2*pi -----------------------------------------------

namespace detail {
// 2*pi split into three doubles; the sum matches 2*pi to ~160 bits.
inline constexpr double TWO_PI_HI = 0x1.921fb54442d18p+2;
inline constexpr double TWO_PI_MID = 0x1.1a62633145c07p-52;
inline constexpr double TWO_PI_LO = -0x1.f1976b7ed8fbcp-108;
inline constexpr double INV_TWO_PI = 0x1.45f306dc9c883p-3; // 1/(2*pi)
} // namespace detail

// Reduces a dd angle into (-pi, pi].  Absolute error ~1e-19 rad for
// |angle| up to 1e16, far inside the 1e-9 phase budget.
inline double reduce_mod_2pi(const dd& angle) {
    using namespace detail;
    double k = std::nearbyint(angle.hi * INV_TWO_PI);
    dd r = angle;
    if (k != 0.0) {
        auto [p1, e1] = two_prod(k, TWO_PI_HI);
        r = dd_sub(r, dd{p1, e1});
        auto [p2, e2] = two_prod(k, TWO_PI_MID);
        r = dd_sub(r, dd{p2, e2});
        r = dd_sub_d(r, k * TWO_PI_LO);
    }
    // One correcting step in case angle.hi sat right on a boundary.
    const double PI_HI = TWO_PI_HI * 0.5;
    if (r.hi > PI_HI || (r.hi == PI_HI && r.lo > 0.5 * TWO_PI_MID)) {
        r = dd_sub_d(r, TWO_PI_HI);
        r = dd_sub_d(r, TWO_PI_MID);
    } else if (r.hi < -PI_HI || (r.hi == -PI_HI && r.lo <= -0.5 * TWO_PI_MID)) {
        r = dd_add_d(r, TWO_PI_HI);
        r = dd_add_d(r, TWO_PI_MID);
    }
    return r.hi + r.lo;
}

// Phase of gamma * y mod 2*pi where y is carried as dd.
inline double phase_mod_2pi(double gamma, const dd& y) {
    return reduce_mod_2pi(dd_mul_d(y, gamma));
}

} // namespace mh
