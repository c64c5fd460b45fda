#include "nilcorr/equidist.hpp"

#include <cmath>

namespace nilcorr {

std::string_view verdict_name(DensityReport::Verdict v) {
    return v == DensityReport::Verdict::ExactZero ? "exact-zero" : "numeric";
}

cplx weyl_sum(const VectorPolynomial& q, i64 M, i64 N) {
    q.validate();
    if (q.ell != 1) throw std::domain_error("weyl_sum takes a scalar polynomial");
    if (M >= N) throw std::domain_error("empty range");
    cplx total = blocked_sum<cplx>(M, N, [&](i64 lo, i64 hi) {
        ComplexSum acc;
        for (i64 n = lo; n < hi; ++n) acc.add(e2pi(eval_coordinate_at_integer(q, 0, n).frac()));
        return acc.value();
    });
    return total / static_cast<double>(N - M);
}

bool fractional_hit(const VectorPolynomial& q, int coordinate, i128 t, double delta) {
    return eval_coordinate_at_integer(q, coordinate, t).frac() >= 1.0 - delta;
}

namespace {

i64 binomial(int n, int k) {
    i64 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

bool attained_values_avoid_window(const VectorPolynomial& q, int coordinate, double delta, i64 r, i64 s) {
    RationalityVerdict cls = classify_rational(q, coordinate);
    if (cls.kind != RationalityKind::RationalModConstant) return false;

    // Compose u -> q(r u + s) on the nonconstant coefficients (exact):
    // c_h = sum_{j>=h} a_j C(j,h) r^h s^{j-h}; b is their common denominator.
    auto gcd128 = [](i128 a, i128 b2) {
        if (a < 0) a = -a;
        while (b2 != 0) {
            i128 t = a % b2;
            a = b2;
            b2 = t;
        }
        return a;
    };
    i64 b = 1;
    try {
        for (int h = 1; h <= q.degree; ++h) {
            i128 num = 0;
            i128 den = 1;
            for (int j = h; j <= q.degree; ++j) {
                const Coefficient& a = q.at(coordinate, j);
                if (a.num == 0) continue;
                i128 term = checked_mul(binomial(j, h), a.num);
                for (int i = 0; i < h; ++i) term = checked_mul(term, r);
                for (int i = 0; i < j - h; ++i) term = checked_mul(term, s);
                num = checked_add(checked_mul(num, a.den), checked_mul(term, den));
                den = checked_mul(den, a.den);
                i128 g = gcd128(num, den);
                if (g > 1) {
                    num /= g;
                    den /= g;
                }
            }
            if (num != 0) {
                if (den > (i64{1} << 40)) return false;
                i64 d = static_cast<i64>(den);
                b = static_cast<i64>(checked_mul(b / gcd128(b, d), d));
            }
        }
    } catch (const std::overflow_error&) {
        return false;  // fall back to enumeration
    }

    // Constant term {q(s)} through the exact channels, then test the
    // superset {q(s)} + {0, 1/b, ..., (b-1)/b} against [1-delta, 1).
    PolyValue c0 = eval_coordinate_at_integer(q, coordinate, s);
    if (b > (i64{1} << 20)) return false;  // enumeration is cheaper than a huge superset
    double margin = kNearIntegerHazard;
    for (i64 j = 0; j < b; ++j) {
        double f = c0.add_rational(j, b).frac();
        if (f >= 1.0 - delta - margin) return false;  // hit, or too close to call
    }
    return true;
}

namespace {

DensityReport make_report(double delta, std::string scheme, u64 hits, u64 total, DensityReport::Verdict v) {
    DensityReport r;
    r.delta = delta;
    r.scheme = std::move(scheme);
    r.hits = hits;
    r.total = total;
    r.density = total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    r.verdict = v;
    return r;
}

}  // namespace

DensityReport hit_density(const VectorPolynomial& q, double delta, i64 M, i64 N) {
    q.validate();
    if (q.ell != 1) throw std::domain_error("hit_density takes a scalar polynomial");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");
    if (M >= N) throw std::domain_error("empty range");
    std::string scheme = "[" + std::to_string(M) + ":" + std::to_string(N) + ")";
    if (attained_values_avoid_window(q, 0, delta, 1, 0))
        return make_report(delta, scheme, 0, static_cast<u64>(N - M), DensityReport::Verdict::ExactZero);
    u64 hits = blocked_sum<u64>(M, N, [&](i64 lo, i64 hi) {
        u64 h = 0;
        for (i64 n = lo; n < hi; ++n) h += fractional_hit(q, 0, n, delta) ? 1 : 0;
        return h;
    });
    return make_report(delta, scheme, hits, static_cast<u64>(N - M), DensityReport::Verdict::Numeric);
}

DensityReport hit_density_primes(const VectorPolynomial& q, double delta, u64 N, i64 r, i64 s,
                                 const PrimeSieve& sieve) {
    q.validate();
    if (q.ell != 1) throw std::domain_error("hit_density_primes takes a scalar polynomial");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");
    if (N < 2) throw std::domain_error("prime range needs N >= 2");
    if (r < 1) throw std::domain_error("progression step r must be at least 1");
    if (N > sieve.limit()) throw std::domain_error("sieve does not cover the requested range");
    std::string scheme = "primes[1:" + std::to_string(N) + "] ap " + std::to_string(r) + "p+" + std::to_string(s);
    u64 total = sieve.pi(N);
    if (attained_values_avoid_window(q, 0, delta, r, s))
        return make_report(delta, scheme, 0, total, DensityReport::Verdict::ExactZero);
    u64 hits = blocked_sum<u64>(2, static_cast<i64>(N) + 1, [&](i64 lo, i64 hi) {
        u64 h = 0;
        for (i64 p = lo; p < hi; ++p)
            if (sieve.is_prime(static_cast<u64>(p)) && fractional_hit(q, 0, r * p + s, delta)) ++h;
        return h;
    });
    return make_report(delta, scheme, hits, total, DensityReport::Verdict::Numeric);
}

std::vector<DensityReport> density_limit_scan(const VectorPolynomial& q, std::span<const double> deltas,
                                              const DensityScheme& scheme) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1])) throw std::domain_error("delta grid must be descending");
    std::vector<DensityReport> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        if (scheme.kind == DensityScheme::Kind::Window)
            out.push_back(hit_density(q, d, scheme.M, scheme.N));
        else
            out.push_back(hit_density_primes(q, d, static_cast<u64>(scheme.N), scheme.r, scheme.s, *scheme.sieve));
    }
    return out;
}

}  // namespace nilcorr
