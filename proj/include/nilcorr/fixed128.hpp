#pragma once

// 128-bit fixed-point fractional arithmetic.
//
// Frac128 holds f = (hi*2^64 + lo)/2^128 in [0,1).  Real128 holds
// ip + fr with ip = floor(value), giving every real a unique split.
// Products with integers are exact; products of two fractions truncate
// at 2^-128.  This is the precision backbone for fractional parts of
// a*n^h at arguments up to ~1e18, where a double retains no fractional
// information at all.  A tagged constant carried this way keeps 128
// fractional bits, so {a*m} for |m| <= 2^63 is still good to ~2^-65.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nilcorr {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

[[noreturn]] inline void overflow_fail(const char* what) {
    throw std::overflow_error(what);
}

inline i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) overflow_fail("128-bit integer overflow (add)");
    return r;
}

inline i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow_fail("128-bit integer overflow (mul)");
    return r;
}

// Division with floor semantics, denominator > 0.
inline i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b) != 0 && a < 0) --q;
    return q;
}

inline i128 floor_mod(i128 a, i128 b) { return a - floor_div(a, b) * b; }

inline double i128_to_double(i128 v) { return static_cast<double>(v); }

std::string i128_to_string(i128 v);

// Fractional value in [0,1) with 128 bits.
struct Frac128 {
    u64 hi = 0;
    u64 lo = 0;

    bool is_zero() const { return hi == 0 && lo == 0; }

    double to_double() const { return static_cast<double>(hi) * 0x1p-64 + static_cast<double>(lo) * 0x1p-128; }

    // Exact for the top 128 bits of d's binary expansion.  Values rounded
    // up to 1.0 (e.g. the fractional part of a tiny negative) clamp to the
    // largest representable fraction.
    static Frac128 from_unit_double(double d) {
        if (d <= 0.0) return {0, 0};
        if (d >= 1.0) return {~u64{0}, ~u64{0}};
        double scaled = d * 0x1p64;  // exact: power-of-two scaling
        u64 h = static_cast<u64>(scaled);
        double rem = scaled - static_cast<double>(h);  // exact
        u64 l = static_cast<u64>(rem * 0x1p64);
        return {h, l};
    }

    // this + o, returns the carry (0 or 1).
    unsigned add_carry(const Frac128& o) {
        u64 nlo = lo + o.lo;
        unsigned c0 = nlo < lo ? 1u : 0u;
        u64 nhi = hi + o.hi;
        unsigned c1 = nhi < hi ? 1u : 0u;
        u64 nhi2 = nhi + c0;
        unsigned c2 = nhi2 < nhi ? 1u : 0u;
        hi = nhi2;
        lo = nlo;
        return c1 + c2;
    }

    // (1 - f) mod 1: two's complement over 128 bits.
    Frac128 negated() const {
        if (is_zero()) return {0, 0};
        u64 nlo = ~lo + 1;
        u64 nhi = ~hi + (nlo == 0 ? 1 : 0);
        return {nhi, nlo};
    }

    // f * m for m >= 0; int_out receives floor(f*m).
    Frac128 mul_uint(u128 m, u128* int_out) const {
        u64 ml = static_cast<u64>(m);
        u64 mh = static_cast<u64>(m >> 64);
        // 2x2 limb product: (hi,lo) * (mh,ml), 4 limbs p0..p3.
        u128 t00 = static_cast<u128>(lo) * ml;
        u128 t01 = static_cast<u128>(lo) * mh;
        u128 t10 = static_cast<u128>(hi) * ml;
        u128 t11 = static_cast<u128>(hi) * mh;
        u64 p0 = static_cast<u64>(t00);
        u128 mid = (t00 >> 64) + static_cast<u64>(t01) + static_cast<u64>(t10);
        u64 p1 = static_cast<u64>(mid);
        u128 hi2 = (mid >> 64) + (t01 >> 64) + (t10 >> 64) + t11;
        if (int_out) *int_out = hi2;  // p2 + p3*2^64
        return {p1, p0};
    }

    // f * g truncated toward zero at 2^-128 (top half of the 256-bit product).
    Frac128 mul_frac(const Frac128& g) const {
        u128 t00 = static_cast<u128>(lo) * g.lo;
        u128 t01 = static_cast<u128>(lo) * g.hi;
        u128 t10 = static_cast<u128>(hi) * g.lo;
        u128 t11 = static_cast<u128>(hi) * g.hi;
        u128 mid = (t00 >> 64) + static_cast<u64>(t01) + static_cast<u64>(t10);
        u128 top = (mid >> 64) + (t01 >> 64) + (t10 >> 64) + t11;
        return {static_cast<u64>(top >> 64), static_cast<u64>(top)};
    }

    bool operator==(const Frac128&) const = default;
    bool operator<(const Frac128& o) const { return hi != o.hi ? hi < o.hi : lo < o.lo; }
};

// value = ip + fr, fr in [0,1); ip is always floor(value).
struct Real128 {
    i128 ip = 0;
    Frac128 fr;

    static Real128 from_int(i128 n) { return {n, {0, 0}}; }

    static Real128 from_double(double v) {
        if (!std::isfinite(v)) throw std::domain_error("non-finite input");
        if (std::abs(v) >= 0x1p120) overflow_fail("value too large for Real128");
        double f = std::floor(v);
        return {static_cast<i128>(f), Frac128::from_unit_double(v - f)};
    }

    // num/den with den > 0, truncated at 2^-128 (exact when den is a power of two).
    static Real128 from_rational(i128 num, i128 den);

    // sqrt(num/den) for num >= 0, den > 0; small operands (see fixed128.cpp).
    static Real128 sqrt_rational(i64 num, i64 den);

    static Real128 pi();

    i128 floor() const { return ip; }
    Frac128 frac() const { return fr; }
    bool is_integer() const { return fr.is_zero(); }

    double to_double() const { return i128_to_double(ip) + fr.to_double(); }
    double frac_double() const { return fr.to_double(); }

    Real128 negated() const {
        if (fr.is_zero()) return {-ip, {0, 0}};
        return {checked_mul(ip, -1) - 1, fr.negated()};
    }

    Real128 add(const Real128& o) const {
        Real128 r{checked_add(ip, o.ip), fr};
        unsigned carry = r.fr.add_carry(o.fr);
        if (carry) r.ip = checked_add(r.ip, carry);
        return r;
    }

    // Exact product with an integer.
    Real128 mul_int(i128 m) const {
        if (m == 0) return {0, {0, 0}};
        if (m < 0) return mul_int(-m).negated();
        u128 carry = 0;
        Frac128 f = fr.mul_uint(static_cast<u128>(m), &carry);
        if (carry > static_cast<u128>(1) << 120) overflow_fail("Real128 product too large");
        i128 p = checked_add(checked_mul(ip, m), static_cast<i128>(carry));
        return {p, f};
    }

    // Product of two values; fraction x fraction truncates at 2^-128.
    Real128 mul(const Real128& o) const {
        // (a + f)(b + g) = ab + a*g + b*f + f*g
        Real128 r = from_int(checked_mul(ip, o.ip));
        r = r.add(Real128{0, o.fr}.mul_int(ip));
        r = r.add(Real128{0, fr}.mul_int(o.ip));
        unsigned carry;
        {
            Frac128 fg = fr.mul_frac(o.fr);
            Real128 t{0, r.fr};
            carry = t.fr.add_carry(fg);
            r.fr = t.fr;
            if (carry) r.ip = checked_add(r.ip, 1);
        }
        return r;
    }

    // Exact division by a positive 64-bit integer (truncated at 2^-128).
    Real128 div_uint(u64 q) const {
        if (q == 0) throw std::domain_error("division by zero");
        if (ip < 0) return negated().div_uint(q).negated();
        i128 d = floor_div(ip, q);
        u128 rem = static_cast<u128>(ip - d * static_cast<i128>(q));
        // long division of (rem . fr) by q, limb by limb
        u128 acc = (rem << 64) | fr.hi;
        u64 h = static_cast<u64>(acc / q);
        acc = ((acc % q) << 64) | fr.lo;
        u64 l = static_cast<u64>(acc / q);
        return {d, {h, l}};
    }

    bool operator==(const Real128&) const = default;
};

}  // namespace nilcorr
