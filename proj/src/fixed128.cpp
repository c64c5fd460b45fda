#include "nilcorr/fixed128.hpp"

#include <algorithm>
#include <array>

namespace nilcorr {

std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 m = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::string s;
    while (m > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
        m /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Real128 Real128::from_rational(i128 num, i128 den) {
    if (den <= 0) throw std::domain_error("denominator must be positive");
    if (den >= (static_cast<i128>(1) << 63)) overflow_fail("denominator too large");
    i128 d = floor_div(num, den);
    u64 q = static_cast<u64>(den);
    u128 rem = static_cast<u128>(num - d * den);  // in [0, den)
    u128 acc = rem << 64;
    u64 h = static_cast<u64>(acc / q);
    acc = ((acc % q) << 64);
    u64 l = static_cast<u64>(acc / q);
    return {d, {h, l}};
}

namespace {

// Tiny fixed-width big integer, enough for isqrt(k * 2^256 / b).
struct BigU {
    static constexpr int kLimbs = 7;  // 448 bits
    std::array<u64, kLimbs> w{};

    static BigU from_u128(u128 v) {
        BigU r;
        r.w[0] = static_cast<u64>(v);
        r.w[1] = static_cast<u64>(v >> 64);
        return r;
    }

    bool is_zero() const {
        for (u64 x : w)
            if (x) return false;
        return true;
    }

    int bit_length() const {
        for (int i = kLimbs - 1; i >= 0; --i)
            if (w[i]) return 64 * i + 64 - __builtin_clzll(w[i]);
        return 0;
    }

    BigU shl(int n) const {
        BigU r;
        int limb = n / 64, off = n % 64;
        for (int i = kLimbs - 1; i >= 0; --i) {
            u64 v = 0;
            if (i - limb >= 0) v = w[i - limb] << off;
            if (off && i - limb - 1 >= 0) v |= w[i - limb - 1] >> (64 - off);
            r.w[i] = v;
        }
        return r;
    }

    BigU shr(int n) const {
        BigU r;
        int limb = n / 64, off = n % 64;
        for (int i = 0; i < kLimbs; ++i) {
            u64 v = 0;
            if (i + limb < kLimbs) v = w[i + limb] >> off;
            if (off && i + limb + 1 < kLimbs) v |= w[i + limb + 1] << (64 - off);
            r.w[i] = v;
        }
        return r;
    }

    bool operator>=(const BigU& o) const {
        for (int i = kLimbs - 1; i >= 0; --i)
            if (w[i] != o.w[i]) return w[i] > o.w[i];
        return true;
    }

    BigU add(const BigU& o) const {
        BigU r;
        unsigned carry = 0;
        for (int i = 0; i < kLimbs; ++i) {
            u64 s = w[i] + o.w[i];
            unsigned c1 = s < w[i] ? 1u : 0u;
            u64 s2 = s + carry;
            unsigned c2 = s2 < s ? 1u : 0u;
            r.w[i] = s2;
            carry = c1 + c2;
        }
        return r;
    }

    BigU sub(const BigU& o) const {
        BigU r;
        unsigned borrow = 0;
        for (int i = 0; i < kLimbs; ++i) {
            u64 d = w[i] - o.w[i];
            unsigned b1 = w[i] < o.w[i] ? 1u : 0u;
            u64 d2 = d - borrow;
            unsigned b2 = d < borrow ? 1u : 0u;
            r.w[i] = d2;
            borrow = b1 + b2;
        }
        return r;
    }

    BigU div_u64(u64 q) const {
        BigU r;
        u128 rem = 0;
        for (int i = kLimbs - 1; i >= 0; --i) {
            u128 acc = (rem << 64) | w[i];
            r.w[i] = static_cast<u64>(acc / q);
            rem = acc % q;
        }
        return r;
    }
};

// Binary restoring square root: returns floor(sqrt(n)).
BigU big_isqrt(const BigU& n) {
    BigU x = n, c{}, d{};
    int bit = n.bit_length();
    if (bit == 0) return c;
    bit = (bit - 1) & ~1;
    d.w[bit / 64] = u64{1} << (bit % 64);
    while (!d.is_zero()) {
        BigU cd = c.add(d);
        if (x >= cd) {
            x = x.sub(cd);
            c = c.shr(1).add(d);
        } else {
            c = c.shr(1);
        }
        d = d.shr(2);
    }
    return c;
}

}  // namespace

Real128 Real128::sqrt_rational(i64 num, i64 den) {
    if (num < 0 || den <= 0) throw std::domain_error("sqrt argument must be nonnegative");
    if (num > (i64{1} << 40) || den > (i64{1} << 40)) overflow_fail("sqrt operand too large");
    if (num == 0) return {0, {0, 0}};
    // floor(sqrt(num/den) * 2^128) = isqrt(floor(num * 2^256 / den))
    BigU scaled = BigU::from_u128(static_cast<u128>(num)).shl(256).div_u64(static_cast<u64>(den));
    BigU root = big_isqrt(scaled);  // <= 2^148
    i128 ipart = (static_cast<i128>(root.w[3]) << 64) | static_cast<i128>(root.w[2]);
    return {ipart, {root.w[1], root.w[0]}};
}

Real128 Real128::pi() {
    // 3.243F6A8885A308D313198A2E03707344... in hex
    return {3, {0x243F6A8885A308D3ull, 0x13198A2E03707344ull}};
}

}  // namespace nilcorr
