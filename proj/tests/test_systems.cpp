#include <cmath>
#include <random>

#include "doctest.h"
#include "nilcorr/systems.hpp"

using namespace nilcorr;

namespace {

// Oracle: n-fold group multiplication (n >= 0), inverse chain for n < 0.
// Long double accumulation keeps the oracle's own rounding below 1e-12.
HeisenbergElement heis_pow_bruteforce(const HeisenbergElement& g, i64 n) {
    long double sx = n >= 0 ? g.x : -g.x;
    long double sy = n >= 0 ? g.y : -g.y;
    long double sz = n >= 0 ? g.z : static_cast<long double>(g.x) * g.y - g.z;
    long double x = 0, y = 0, z = 0;
    for (i64 i = 0; i < std::abs(n); ++i) {
        z = z + sz + x * sy;
        x += sx;
        y += sy;
    }
    return {static_cast<double>(x), static_cast<double>(y), static_cast<double>(z)};
}

double coord_diff(const HeisenbergElement& a, const HeisenbergElement& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

}  // namespace

TEST_CASE("heis_mul basics") {
    HeisenbergElement a{1, 0, 0}, b{0, 1, 0};
    CHECK(heis_mul(a, b) == HeisenbergElement{1, 1, 1});
    CHECK(heis_mul(b, a) == HeisenbergElement{1, 1, 0});  // noncommutativity witness

    HeisenbergElement g{0.3, 0.7, 0.2};
    HeisenbergElement e = heis_mul(g, heis_inverse(g));
    CHECK(coord_diff(e, {0, 0, 0}) < 1e-15);
}

TEST_CASE("heis_mul associativity on random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int it = 0; it < 100; ++it) {
        HeisenbergElement a{dist(rng), dist(rng), dist(rng)};
        HeisenbergElement b{dist(rng), dist(rng), dist(rng)};
        HeisenbergElement c{dist(rng), dist(rng), dist(rng)};
        CHECK(coord_diff(heis_mul(heis_mul(a, b), c), heis_mul(a, heis_mul(b, c))) < 1e-12);
    }
}

TEST_CASE("heis_pow closed form vs repeated multiplication") {
    CHECK(heis_pow({1, 1, 0}, 3) == HeisenbergElement{3, 3, 3});
    CHECK(heis_pow({0.4, -0.9, 0.1}, 0) == HeisenbergElement{0, 0, 0});
    HeisenbergElement g{0.25, 0.5, -0.75};
    CHECK(coord_diff(heis_pow(g, -1), heis_inverse(g)) == 0.0);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int gi = 0; gi < 20; ++gi) {
        HeisenbergElement h{dist(rng), dist(rng), dist(rng)};
        for (i64 n : {-1000, -313, -2, 1, 17, 999, 1000}) {
            HeisenbergElement closed = heis_pow(h, n);
            HeisenbergElement brute = heis_pow_bruteforce(h, n);
            CHECK(coord_diff(closed, brute) < 1e-9);
        }
    }
}

TEST_CASE("nil_reduce canonical representative") {
    NilPoint p = nil_reduce({0.5, 0.5, 0.5});
    CHECK(p.rep == HeisenbergElement{0.5, 0.5, 0.5});

    // reduced rep of (1.5, 0.5, 0.5): right-multiplying by (-1, 0, c)
    NilPoint q = nil_reduce({1.5, 0.5, 0.5});
    CHECK(coord_diff(q.rep, {0.5, 0.5, 0.5}) < 1e-15);

    // brute-force oracle: the in-domain representative over gamma with small entries
    HeisenbergElement g{1.5, 0.5, 0.5};
    bool found = false;
    for (int a = -3; a <= 3 && !found; ++a)
        for (int b = -3; b <= 3 && !found; ++b)
            for (int c = -3; c <= 3 && !found; ++c) {
                HeisenbergElement cand = heis_mul(g, {double(a), double(b), double(c)});
                if (cand.x >= 0 && cand.x < 1 && cand.y >= 0 && cand.y < 1 && cand.z >= 0 && cand.z < 1) {
                    CHECK(coord_diff(cand, q.rep) < 1e-12);
                    found = true;
                }
            }
    CHECK(found);
}

TEST_CASE("nil_reduce coset invariance and idempotence") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    std::uniform_int_distribution<int> gam(-5, 5);
    for (int it = 0; it < 200; ++it) {
        HeisenbergElement g{dist(rng), dist(rng), dist(rng)};
        NilPoint p = nil_reduce(g);
        CHECK(coord_diff(nil_reduce(p.rep).rep, p.rep) == 0.0);  // idempotent
        HeisenbergElement gamma{double(gam(rng)), double(gam(rng)), double(gam(rng))};
        NilPoint p2 = nil_reduce(heis_mul(g, gamma));
        CHECK(coord_diff(p2.rep, p.rep) < 1e-12);
        CHECK(p.rep.x >= 0);
        CHECK(p.rep.x < 1);
        CHECK(p.rep.y >= 0);
        CHECK(p.rep.y < 1);
        CHECK(p.rep.z >= 0);
        CHECK(p.rep.z < 1);
    }
}

TEST_CASE("torus rotation basics") {
    // T(x) = x + 1/sqrt(2) at n=1, x=0
    TorusRotation rot(1, 1, {Coefficient::sqrt_scaled(2, 1, 1, 2)});
    std::vector<i64> one = {1};
    Point p = apply_lattice(rot, one, TorusPoint{{0.0}});
    CHECK(std::get<TorusPoint>(p).coords[0] == doctest::Approx(0.70710678118654752).epsilon(1e-15));

    std::vector<i64> zero = {0};
    Point same = apply_lattice(rot, zero, TorusPoint{{0.37}});
    CHECK(std::get<TorusPoint>(same).coords[0] == 0.37);

    // rational angles hit 0 exactly: D=2, A = ((1/3, 0)), n=3
    TorusRotation r2(2, 1, {Coefficient::rational(1, 3), Coefficient::rational(0, 1)});
    std::vector<i64> three = {3};
    Point p2 = apply_lattice(r2, three, TorusPoint{{0.0, 0.5}});
    CHECK(std::get<TorusPoint>(p2).coords[0] == 0.0);
    CHECK(std::get<TorusPoint>(p2).coords[1] == 0.5);

    std::vector<i64> wrong = {1, 2};
    CHECK_THROWS_AS(apply_lattice(rot, wrong, TorusPoint{{0.0}}), std::domain_error);
}

TEST_CASE("lattice cocycle law on random data") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    TorusRotation rot(2, 2,
                      {Coefficient::sqrt_scaled(2, 1, 1, 1), Coefficient::rational(1, 3), Coefficient::pi_scaled(1, 4),
                       Coefficient::real(0.137)});
    for (int it = 0; it < 100; ++it) {
        std::vector<i64> m = {static_cast<i64>(rng() % 2001) - 1000, static_cast<i64>(rng() % 2001) - 1000};
        std::vector<i64> n = {static_cast<i64>(rng() % 2001) - 1000, static_cast<i64>(rng() % 2001) - 1000};
        std::vector<i64> mn = {m[0] + n[0], m[1] + n[1]};
        TorusPoint x{{dist(rng), dist(rng)}};
        Point lhs = apply_lattice(rot, mn, x);
        Point rhs = apply_lattice(rot, m, apply_lattice(rot, n, x));
        auto& l = std::get<TorusPoint>(lhs).coords;
        auto& r = std::get<TorusPoint>(rhs).coords;
        for (std::size_t c = 0; c < 2; ++c) {
            double d = std::abs(l[c] - r[c]);
            CHECK(std::min(d, 1.0 - d) <= 0x1p-50);
        }
    }
}

TEST_CASE("heisenberg translation cocycle") {
    HeisenbergTranslation T({0.3, 0.41, 0.0});
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        std::vector<i64> m = {static_cast<i64>(rng() % 41) - 20};
        std::vector<i64> n = {static_cast<i64>(rng() % 41) - 20};
        std::vector<i64> mn = {m[0] + n[0]};
        NilPoint x = nil_reduce({dist(rng), dist(rng), dist(rng)});
        Point lhs = apply_lattice(T, mn, x);
        Point rhs = apply_lattice(T, m, apply_lattice(T, n, x));
        CHECK(coord_diff(std::get<NilPoint>(lhs).rep, std::get<NilPoint>(rhs).rep) < 1e-10);
    }
}

TEST_CASE("torus flows: one-parameter law and commutation") {
    // Single flow, angle row (1, 0): t=(0.25, 0), x=0.5 -> 0.75
    TorusFlowFamily F1(1, 2, {{Coefficient::integer(1), Coefficient::integer(0)}});
    std::vector<double> t0 = {0.25, 0.0};
    Point p = apply_flow(F1, 0, t0, TorusPoint{{0.5}});
    CHECK(std::get<TorusPoint>(p).coords[0] == doctest::Approx(0.75).epsilon(1e-15));

    std::vector<double> zero = {0.0, 0.0};
    Point same = apply_flow(F1, 0, zero, TorusPoint{{0.123}});
    CHECK(std::get<TorusPoint>(same).coords[0] == 0.123);

    // S^s(S^t x) = S^{s+t} x with angle sqrt(2): both sides {1.2*sqrt(2)} from x=0
    TorusFlowFamily F2(1, 1, {{Coefficient::sqrt_scaled(2, 1, 1, 1)}});
    std::vector<double> s = {0.3}, t = {0.9}, st = {1.2};
    Point via = apply_flow(F2, 0, s, apply_flow(F2, 0, t, TorusPoint{{0.0}}));
    Point direct = apply_flow(F2, 0, st, TorusPoint{{0.0}});
    CHECK(std::get<TorusPoint>(via).coords[0] == doctest::Approx(0.69705627484771406).epsilon(1e-12));
    CHECK(std::get<TorusPoint>(direct).coords[0] == doctest::Approx(std::get<TorusPoint>(via).coords[0]).epsilon(1e-12));

    // two commuting flows on T^2, random times, pointwise commutation
    TorusFlowFamily F3(2, 1,
                       {{Coefficient::sqrt_scaled(2, 1, 1, 1), Coefficient::rational(1, 3)},
                        {Coefficient::pi_scaled(1, 1), Coefficient::real(0.61)}});
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int it = 0; it < 100; ++it) {
        std::vector<double> u = {dist(rng)}, v = {dist(rng)};
        TorusPoint x{{std::abs(dist(rng)) / 3.0, std::abs(dist(rng)) / 3.0}};
        Point ab = apply_flow(F3, 0, u, apply_flow(F3, 1, v, x));
        Point ba = apply_flow(F3, 1, v, apply_flow(F3, 0, u, x));
        auto& l = std::get<TorusPoint>(ab).coords;
        auto& r = std::get<TorusPoint>(ba).coords;
        for (std::size_t c = 0; c < 2; ++c) {
            double d = std::abs(l[c] - r[c]);
            CHECK(std::min(d, 1.0 - d) < 1e-12);
        }
    }

    std::vector<double> bad = {0.1};
    CHECK_THROWS_AS(apply_flow(F1, 2, t0, TorusPoint{{0.5}}), std::domain_error);
    CHECK_THROWS_AS(apply_flow(F1, 0, bad, TorusPoint{{0.5}}), std::domain_error);
}

TEST_CASE("packed action composes blocks in order") {
    auto a = std::make_shared<TorusRotation>(1, 1, std::vector<Coefficient>{Coefficient::rational(1, 4)});
    auto b = std::make_shared<TorusRotation>(1, 1, std::vector<Coefficient>{Coefficient::rational(1, 3)});
    PackedAction packed({a, b});
    CHECK(packed.rank() == 2);
    std::vector<i64> n = {2, 3};  // 2/4 + 3/3 = 1/2 mod 1
    Point p = apply_lattice(packed, n, TorusPoint{{0.0}});
    CHECK(std::get<TorusPoint>(p).coords[0] == doctest::Approx(0.5).epsilon(1e-15));
    auto shift = packed.translation_shift(std::vector<i128>{2, 3});
    REQUIRE(shift.has_value());
    CHECK((*shift)[0].to_double() == doctest::Approx(0.5).epsilon(1e-15));
}
