#pragma once

// Fractional-part hit densities over windows, primes and progressions,
// Weyl sums, and exact verdicts for the rational branch.  Limits are
// realized as finite-scale reports, never extrapolated.

#include "nilcorr/averaging.hpp"
#include "nilcorr/poly.hpp"

namespace nilcorr {

struct DensityReport {
    double delta = 0;
    std::string scheme;  // window or prime-range descriptor
    u64 hits = 0;
    u64 total = 0;
    double density = 0;  // hits/total
    enum class Verdict { ExactZero, Numeric } verdict = Verdict::Numeric;
};

std::string_view verdict_name(DensityReport::Verdict v);

// (1/(N-M)) sum_{n=M}^{N-1} e(q(n)) for a scalar polynomial.
cplx weyl_sum(const VectorPolynomial& q, i64 M, i64 N);

// Counts n in [M,N) with {q(n)} in [1-delta, 1).  Rational-mod-constant
// coordinates whose attained-value superset {q(0)} + {0,1/b,...,(b-1)/b}
// provably avoids the window short-circuit to an exact-zero verdict.
DensityReport hit_density(const VectorPolynomial& q, double delta, i64 M, i64 N);

// Same over {q(rp+s)} for p in P ∩ [1,N], normalized by pi(N).
DensityReport hit_density_primes(const VectorPolynomial& q, double delta, u64 N, i64 r, i64 s,
                                 const PrimeSieve& sieve);

struct DensityScheme {
    enum class Kind { Window, Primes } kind = Kind::Window;
    i64 M = 0, N = 0;
    i64 r = 1, s = 0;
    const PrimeSieve* sieve = nullptr;  // Primes only

    static DensityScheme window(i64 M, i64 N) { return {Kind::Window, M, N, 1, 0, nullptr}; }
    static DensityScheme primes(i64 N, i64 r, i64 s, const PrimeSieve& sieve) { return {Kind::Primes, 0, N, r, s, &sieve}; }
};

// One report per delta (grid must be descending), at the scheme's range.
std::vector<DensityReport> density_limit_scan(const VectorPolynomial& q, std::span<const double> deltas,
                                              const DensityScheme& scheme);

// Shared: {q_j(t)} tested against [1-delta, 1) through the exact channels.
bool fractional_hit(const VectorPolynomial& q, int coordinate, i128 t, double delta);

// Exact-zero decision for the scalar polynomial u -> q(r u + s): true when
// every value of the attained superset stays clear of [1-delta,1) by a
// 2^-40 margin.  Composition keeps rational coefficients exact.
bool attained_values_avoid_window(const VectorPolynomial& q, int coordinate, double delta, i64 r, i64 s);

}  // namespace nilcorr
