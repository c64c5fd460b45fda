#pragma once

// Deterministic blocked map-reduce.
//
// Index ranges are cut into fixed-size blocks independent of the worker
// count; per-block partials are combined by a fixed pairwise tree.  Two
// runs therefore produce bit-identical sums for any NILCORR_THREADS.

#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "nilcorr/fixed128.hpp"

namespace nilcorr {

int thread_count();
void set_thread_count(int n);

inline constexpr i64 kReduceBlock = 1 << 12;

namespace detail {

// Runs fn(block_index) for blocks [0, nblocks) on up to thread_count() workers.
void run_blocks(i64 nblocks, const std::function<void(i64)>& fn);

}  // namespace detail

// Pairwise tree combine, in place, fixed order.
template <class T>
T pairwise_combine(std::vector<T>& parts) {
    if (parts.empty()) return T{};
    std::size_t n = parts.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) parts[i] = parts[i] + parts[i + half];
        n = half;
    }
    return parts[0];
}

// Sum of per_index(i) over [lo, hi), deterministic for any worker count.
// BlockFn: T(i64 block_lo, i64 block_hi) producing the block partial.
template <class T, class BlockFn>
T blocked_sum(i64 lo, i64 hi, BlockFn&& block_fn) {
    if (hi <= lo) return T{};
    i64 nblocks = (hi - lo + kReduceBlock - 1) / kReduceBlock;
    std::vector<T> parts(static_cast<std::size_t>(nblocks));
    detail::run_blocks(nblocks, [&](i64 b) {
        i64 blo = lo + b * kReduceBlock;
        i64 bhi = std::min<i64>(blo + kReduceBlock, hi);
        parts[static_cast<std::size_t>(b)] = block_fn(blo, bhi);
    });
    return pairwise_combine(parts);
}

// Neumaier-compensated sequential sum for use inside a block.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct ComplexSum {
    CompensatedSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace nilcorr
