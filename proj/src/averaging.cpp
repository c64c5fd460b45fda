#include "nilcorr/averaging.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace nilcorr {

namespace {

constexpr u64 kSieveBudget = u64{1} << 33;  // max N: one gigabyte of bitset
constexpr char kSieveMagic[5] = {'N', 'C', 'S', 'V', '1'};
constexpr u64 kCheckpointStride = u64{1} << 16;

}  // namespace

PrimeSieve PrimeSieve::build(u64 limit) {
    if (limit < 2) throw std::domain_error("sieve limit must be at least 2");
    if (limit > kSieveBudget) throw std::domain_error("sieve limit exceeds the configured memory budget");
    PrimeSieve s;
    s.limit_ = limit;
    s.bits_.assign(static_cast<std::size_t>(limit / 64 + 1), ~u64{0});
    auto clear = [&](u64 i) { s.bits_[static_cast<std::size_t>(i / 64)] &= ~(u64{1} << (i % 64)); };
    clear(0);
    clear(1);
    for (u64 p = 2; p * p <= limit; ++p)
        if (s.is_prime(p))
            for (u64 q = p * p; q <= limit; q += p) clear(q);
    // mask out bits above limit so popcounts stay honest
    u64 top = limit % 64;
    if (top != 63) s.bits_.back() &= (u64{1} << (top + 1)) - 1;
    s.rebuild_checkpoints();
    return s;
}

void PrimeSieve::rebuild_checkpoints() {
    pi_checkpoints_.assign(limit_ / kCheckpointStride + 2, 0);
    u64 count = 0;
    for (u64 word = 0; word < bits_.size(); ++word) {
        u64 idx = word * 64;
        if (idx % kCheckpointStride == 0) pi_checkpoints_[static_cast<std::size_t>(idx / kCheckpointStride)] = count;
        count += static_cast<u64>(std::popcount(bits_[static_cast<std::size_t>(word)]));
    }
    pi_checkpoints_.back() = count;
}

bool PrimeSieve::is_prime(u64 n) const {
    if (n > limit_) throw std::domain_error("sieve does not cover the requested value");
    return (bits_[static_cast<std::size_t>(n / 64)] >> (n % 64)) & 1;
}

u64 PrimeSieve::pi(u64 n) const {
    if (n > limit_) throw std::domain_error("sieve does not cover the requested value");
    u64 block = n / kCheckpointStride;
    u64 count = pi_checkpoints_[static_cast<std::size_t>(block)];
    for (u64 i = block * kCheckpointStride; i <= n; ++i)
        count += is_prime(i) ? 1 : 0;
    return count;
}

void PrimeSieve::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write sieve cache: " + path.string());
    out.write(kSieveMagic, sizeof(kSieveMagic));
    u64 n = limit_;
    char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((n >> (8 * i)) & 0xff);
    out.write(le, 8);
    for (u64 word : bits_) {
        for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((word >> (8 * i)) & 0xff);
        out.write(le, 8);
    }
    if (!out) throw std::runtime_error("short write to sieve cache: " + path.string());
}

std::filesystem::path PrimeSieve::default_cache_path() {
    if (const char* env = std::getenv("NILCORR_SIEVE_CACHE")) return env;
    return "./.sieve";
}

PrimeSieve PrimeSieve::load_or_build(u64 limit, const std::filesystem::path& cache_path) {
    std::ifstream in(cache_path, std::ios::binary);
    if (in) {
        char magic[5];
        in.read(magic, 5);
        if (!in || std::memcmp(magic, kSieveMagic, 5) != 0) throw std::runtime_error("sieve cache has wrong magic bytes: " + cache_path.string());
        char le[8];
        in.read(le, 8);
        u64 cached = 0;
        for (int i = 0; i < 8; ++i) cached |= static_cast<u64>(static_cast<unsigned char>(le[i])) << (8 * i);
        if (in && cached >= limit && cached <= kSieveBudget) {
            PrimeSieve s;
            s.limit_ = cached;
            s.bits_.assign(static_cast<std::size_t>(cached / 64 + 1), 0);
            for (auto& word : s.bits_) {
                in.read(le, 8);
                if (!in) break;
                word = 0;
                for (int i = 0; i < 8; ++i) word |= static_cast<u64>(static_cast<unsigned char>(le[i])) << (8 * i);
            }
            if (in) {
                s.rebuild_checkpoints();
                return s;
            }
        }
    }
    PrimeSieve s = build(limit);
    s.save(cache_path);
    return s;
}

PrimeSieve sieve_primes(u64 limit) { return PrimeSieve::build(limit); }

cplx cesaro_average(const Sequence& seq, i64 M, i64 N) {
    if (M >= N) throw std::domain_error("empty averaging window");
    cplx total = blocked_sum<cplx>(M, N, [&](i64 lo, i64 hi) {
        ComplexSum acc;
        for (i64 n = lo; n < hi; ++n) acc.add(seq(n));
        return acc.value();
    });
    return total / static_cast<double>(N - M);
}

double cesaro_average_real(const RealSequence& seq, i64 M, i64 N) {
    if (M >= N) throw std::domain_error("empty averaging window");
    double total = blocked_sum<double>(M, N, [&](i64 lo, i64 hi) {
        CompensatedSum acc;
        for (i64 n = lo; n < hi; ++n) acc.add(seq(n));
        return acc.value();
    });
    return total / static_cast<double>(N - M);
}

namespace {

template <class Acc, class Seq>
auto prime_average_impl(const Seq& seq, const PrimeSieve& sieve, u64 N, i64 r, i64 s) {
    if (N < 2) throw std::domain_error("prime average needs N >= 2");
    if (r < 1) throw std::domain_error("progression step r must be at least 1");
    if (N > sieve.limit()) throw std::domain_error("sieve does not cover the requested range");
    i128 top = static_cast<i128>(r) * static_cast<i128>(N) + s;
    if (top >= (i128{1} << 62) || top <= -(i128{1} << 62)) overflow_fail("progression argument r*p + s overflows");
    auto total = blocked_sum<decltype(Acc{}.value())>(2, static_cast<i64>(N) + 1, [&](i64 lo, i64 hi) {
        Acc acc;
        for (i64 p = lo; p < hi; ++p)
            if (sieve.is_prime(static_cast<u64>(p))) acc.add(seq(r * p + s));
        return acc.value();
    });
    return total / static_cast<double>(sieve.pi(N));
}

}  // namespace

cplx prime_average(const Sequence& seq, const PrimeSieve& sieve, u64 N, i64 r, i64 s) {
    return prime_average_impl<ComplexSum>(seq, sieve, N, r, s);
}

double prime_average_real(const RealSequence& seq, const PrimeSieve& sieve, u64 N, i64 r, i64 s) {
    return prime_average_impl<CompensatedSum>(seq, sieve, N, r, s);
}

void AveragingScheme::validate() const {
    if (kind == Kind::Cesaro) {
        if (M >= N) throw std::domain_error("empty averaging window");
    } else {
        if (N < 2) throw std::domain_error("prime average needs N >= 2");
        if (r < 1) throw std::domain_error("progression step r must be at least 1");
    }
}

std::string AveragingScheme::describe() const {
    if (kind == Kind::Cesaro) return "cesaro[" + std::to_string(M) + ":" + std::to_string(N) + ")";
    std::string s_ = "primes[1:" + std::to_string(N) + "]";
    if (r != 1 || s != 0) s_ += " ap " + std::to_string(r) + "p+" + std::to_string(s);
    return s_;
}

double approximation_error(const Sequence& alpha, const Sequence& psi, const AveragingScheme& scheme,
                           const PrimeSieve* sieve) {
    scheme.validate();
    auto diff = [&](i64 n) { return std::abs(alpha(n) - psi(n)); };
    if (scheme.kind == AveragingScheme::Kind::Cesaro) return cesaro_average_real(diff, scheme.M, scheme.N);
    if (!sieve) throw std::domain_error("prime averaging scheme needs a sieve");
    return prime_average_real(diff, *sieve, static_cast<u64>(scheme.N), scheme.r, scheme.s);
}

}  // namespace nilcorr
