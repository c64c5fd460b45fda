#include <cmath>

#include "doctest.h"
#include "nilcorr/observables.hpp"

using namespace nilcorr;

TEST_CASE("eval_obs on characters") {
    Space torus = Space::torus(1);
    Observable e1 = TrigObservable::character(torus, {1}, 1.0);
    cplx at_quarter = eval_obs(e1, TorusPoint{{0.25}});
    CHECK(at_quarter.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(at_quarter.imag() == doctest::Approx(1.0).epsilon(1e-15));

    Observable one = TrigObservable::constant(torus, 1.0);
    CHECK(eval_obs(one, TorusPoint{{0.817}}) == cplx(1.0, 0.0));

    // e(-x) at x = 1/3: exp(-2 pi i / 3) = (-1/2, -sqrt(3)/2)
    Observable em1 = TrigObservable::character(torus, {-1}, 1.0);
    cplx v = eval_obs(em1, TorusPoint{{1.0 / 3.0}});
    CHECK(v.real() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(-0.86602540378443865).epsilon(1e-12));
}

TEST_CASE("exact integration keeps the zero-frequency amplitude") {
    Space torus = Space::torus(1);
    Observable e1 = TrigObservable::character(torus, {1}, 1.0);
    CHECK(std::abs(integrate(e1, torus, IntegrationChoice::exact_path())) == 0.0);

    Observable one = TrigObservable::constant(torus, 1.0);
    CHECK(integrate(one, torus, IntegrationChoice::exact_path()) == cplx(1.0, 0.0));

    Observable em1 = TrigObservable::character(torus, {-1}, 1.0);
    Observable prod = product_obs(e1, em1);
    CHECK(integrate(prod, torus, IntegrationChoice::exact_path()) == cplx(1.0, 0.0));

    SampledObservable sampled{torus, [](const Point&) { return cplx(1.0, 0.0); }, 1.0};
    CHECK_THROWS_AS(integrate(Observable{sampled}, torus, IntegrationChoice::exact_path()), std::domain_error);
}

TEST_CASE("product of characters adds frequencies and multiplies bounds") {
    Space torus = Space::torus(1);
    Observable e1 = TrigObservable::character(torus, {1}, 1.0);
    Observable prod = product_obs(e1, e1);
    const auto& t = std::get<TrigObservable>(prod);
    REQUIRE(t.terms.size() == 1);
    CHECK(t.terms[0].freq == std::vector<i64>{2});

    Observable em1 = TrigObservable::character(torus, {-1}, 1.0);
    Observable one = product_obs(e1, em1);
    CHECK(std::get<TrigObservable>(one).zero_frequency_amplitude() == cplx(1.0, 0.0));

    SampledObservable a{torus, [](const Point&) { return cplx(0.5, 0.0); }, 0.5};
    SampledObservable b{torus, [](const Point&) { return cplx(2.0, 0.0); }, 2.0};
    Observable ab = product_obs(Observable{a}, Observable{b});
    CHECK(observable_sup_bound(ab) == 1.0);
}

TEST_CASE("exact vs quadrature on characters with |freq| <= 8") {
    Space torus = Space::torus(1);
    // Q = 4097 shares no factor with the frequencies, so midpoint sums vanish
    IntegrationChoice quad = IntegrationChoice::quadrature(4097);
    for (i64 k = -8; k <= 8; ++k) {
        Observable f = TrigObservable::character(torus, {k}, cplx(0.7, -0.2));
        cplx exact = integrate(f, torus, IntegrationChoice::exact_path());
        cplx approx = integrate(f, torus, quad);
        CHECK(std::abs(exact - approx) <= 1e-10);
    }
}

TEST_CASE("quadrature integrates smooth sampled data at O(Q^-2)") {
    Space torus = Space::torus(1);
    SampledObservable f{torus,
                        [](const Point& p) {
                            double x = std::get<TorusPoint>(p).coords[0];
                            return cplx(std::sin(2 * 3.14159265358979323846 * x) * std::sin(2 * 3.14159265358979323846 * x), 0.0);
                        },
                        1.0};
    cplx v = integrate(Observable{f}, torus, IntegrationChoice::quadrature(512));
    CHECK(v.real() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("normalization clamps the sup bound at 1") {
    Space torus = Space::torus(1);
    Observable big = TrigObservable::character(torus, {1}, cplx(3.0, 0.0));
    double scale = 0;
    Observable unit = normalize_obs(big, &scale);
    CHECK(scale == doctest::Approx(1.0 / 3.0));
    CHECK(observable_sup_bound(unit) == doctest::Approx(1.0));
    // |integrate| <= sup bound
    CHECK(std::abs(integrate(unit, torus, IntegrationChoice::exact_path())) <= observable_sup_bound(unit) + 1e-15);
}

TEST_CASE("heisenberg quadrature averages over the fundamental domain") {
    Space heis = Space::heisenberg();
    Observable ez = TrigObservable::character(heis, {0, 0, 1}, 1.0);
    cplx v = integrate(ez, heis, IntegrationChoice::quadrature(32));
    CHECK(std::abs(v) < 1e-10);  // midpoint grid kills nonzero characters
    CHECK(std::abs(integrate(ez, heis, IntegrationChoice::exact_path())) == 0.0);
}

TEST_CASE("space mismatch is an error") {
    Space t1 = Space::torus(1), t2 = Space::torus(2);
    Observable f = TrigObservable::character(t1, {1}, 1.0);
    Observable g = TrigObservable::character(t2, {1, 0}, 1.0);
    CHECK_THROWS_AS(product_obs(f, g), std::domain_error);
    CHECK_THROWS_AS(integrate(f, t2, IntegrationChoice::exact_path()), std::domain_error);
    CHECK_THROWS_AS(eval_obs(f, TorusPoint{{0.1, 0.2}}), std::domain_error);
}
