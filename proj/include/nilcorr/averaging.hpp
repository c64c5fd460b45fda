#pragma once

// Averaging functionals: Cesaro window averages, the prime sieve with its
// cache file, prime/AP averages, and the |alpha - psi| error functionals.
// All reductions run in fixed pairwise order so results are bit-identical
// for any worker count.

#include <filesystem>
#include <functional>

#include "nilcorr/observables.hpp"

namespace nilcorr {

using Sequence = std::function<cplx(i64)>;
using RealSequence = std::function<double(i64)>;

class PrimeSieve {
  public:
    // Sieve of Eratosthenes up to N inclusive (N >= 2).
    static PrimeSieve build(u64 limit);
    // Reuses cache_path when it covers the requested limit, else builds and
    // saves.  Cache format: magic "NCSV1", little-endian u64 N, raw bitset
    // (bit i set iff i is prime, 64-bit little-endian words).
    static PrimeSieve load_or_build(u64 limit, const std::filesystem::path& cache_path);
    // Resolves the cache path from NILCORR_SIEVE_CACHE (default "./.sieve").
    static std::filesystem::path default_cache_path();

    u64 limit() const { return limit_; }
    bool is_prime(u64 n) const;
    u64 pi(u64 n) const;  // |P ∩ [1,n]|
    void save(const std::filesystem::path& path) const;

    template <class F>
    void for_primes(u64 n, F&& fn) const {
        if (n > limit_) throw std::domain_error("sieve does not cover the requested range");
        for (u64 p = 2; p <= n; ++p)
            if (is_prime(p)) fn(p);
    }

  private:
    u64 limit_ = 0;
    std::vector<u64> bits_;
    std::vector<u64> pi_checkpoints_;  // cumulative counts at multiples of 2^16
    void rebuild_checkpoints();
};

PrimeSieve sieve_primes(u64 limit);

// (1/(N-M)) sum_{n=M}^{N-1} seq(n); fixed-order pairwise summation.
cplx cesaro_average(const Sequence& seq, i64 M, i64 N);
double cesaro_average_real(const RealSequence& seq, i64 M, i64 N);

// (1/pi(N)) sum_{p <= N} seq(r p + s).
cplx prime_average(const Sequence& seq, const PrimeSieve& sieve, u64 N, i64 r = 1, i64 s = 0);
double prime_average_real(const RealSequence& seq, const PrimeSieve& sieve, u64 N, i64 r = 1, i64 s = 0);

struct AveragingScheme {
    enum class Kind { Cesaro, Primes };
    Kind kind = Kind::Cesaro;
    i64 M = 0, N = 0;  // Cesaro window [M,N); Primes uses N
    i64 r = 1, s = 0;  // prime progression r p + s

    static AveragingScheme cesaro(i64 M, i64 N) { return {Kind::Cesaro, M, N, 1, 0}; }
    static AveragingScheme primes(i64 N, i64 r = 1, i64 s = 0) { return {Kind::Primes, 0, N, r, s}; }
    void validate() const;
    std::string describe() const;
};

// The scheme's average of |alpha(n) - psi(n)|.
double approximation_error(const Sequence& alpha, const Sequence& psi, const AveragingScheme& scheme,
                           const PrimeSieve* sieve = nullptr);

}  // namespace nilcorr
