#include <cmath>

#include "doctest.h"
#include "nilcorr/nilseq.hpp"

using namespace nilcorr;

TEST_CASE("torus nilsequence evaluation") {
    // g = 1/sqrt(2), x = 0, F = e(.): psi(1) = e(0.7071...)
    Nilsequence psi;
    psi.data = TorusNilData{{Coefficient::sqrt_scaled(2, 1, 1, 2)}, TorusPoint{{0.0}}};
    psi.F = TrigObservable::character(Space::torus(1), {1}, 1.0);
    psi.step = 1;
    psi.validate();
    cplx v1 = nilsequence_eval(psi, 1);
    CHECK(std::abs(v1 - e2pi(0.70710678118654752)) < 1e-14);
    CHECK(nilsequence_eval(psi, 0) == eval_obs(psi.F, TorusPoint{{0.0}}));
}

TEST_CASE("heisenberg nilsequence with abelian generator is 1-step") {
    // g = (alpha, 0, 0): g^n = (n alpha, 0, 0), so F = e(x-coord) sees e({n alpha})
    double alpha = 0.37;
    Nilsequence psi;
    psi.data = HeisNilData{{alpha, 0.0, 0.0}, nil_reduce({0, 0, 0})};
    psi.F = TrigObservable::character(Space::heisenberg(), {1, 0, 0}, 1.0);
    psi.step = 1;
    for (i64 n = 0; n <= 50; ++n) {
        cplx v = nilsequence_eval(psi, n);
        CHECK(std::abs(v - e2pi(fractional(static_cast<double>(n) * alpha))) < 1e-10);
    }
}

TEST_CASE("heisenberg nilsequence: closed-form powers vs repeated multiplication") {
    // dyadic generator coordinates: n*g stays exactly representable, so the
    // fundamental-domain floors agree between both evaluation routes
    Nilsequence psi;
    psi.data = HeisNilData{{0.296875, 0.4140625, 0.0703125}, nil_reduce({0.2, 0.5, 0.9})};
    psi.F = TrigObservable::character(Space::heisenberg(), {1, -1, 2}, 1.0);
    psi.step = 2;
    const auto& h = std::get<HeisNilData>(psi.data);
    for (i64 n : {1, 13, 100, 999, 1000}) {
        HeisenbergElement acc{0, 0, 0};
        for (i64 i = 0; i < n; ++i) acc = heis_mul(acc, h.g);
        cplx brute = eval_obs(psi.F, nil_reduce(heis_mul(acc, h.x.rep)));
        cplx fast = nilsequence_eval(psi, n);
        CHECK(std::abs(fast - brute) < 1e-9);
    }
}

TEST_CASE("nilsequence stays bounded by the observable bound") {
    Nilsequence psi;
    psi.data = TorusNilData{{Coefficient::sqrt_scaled(3, 1, 1, 1)}, TorusPoint{{0.123}}};
    psi.F = TrigObservable{Space::torus(1), {{{1}, cplx(0.4, 0.0)}, {{-2}, cplx(0.0, 0.3)}}};
    double bound = observable_sup_bound(psi.F);
    for (i64 n = 0; n < 10000; n += 7) CHECK(std::abs(nilsequence_eval(psi, n)) <= bound + 1e-12);
}

TEST_CASE("example_alpha closed form") {
    CHECK(example_alpha(0) == cplx(1.0, 0.0));
    // n=1: e(0.41421356.../1.41421356...) = e(0.29289321881...)
    CHECK(std::abs(example_alpha(1) - e2pi(0.29289321881345248)) < 1e-14);
}

TEST_CASE("example identity: engine alpha equals the closed form") {
    ExampleSpec ex = example_spec();
    for (i64 n = 0; n <= 10000; n += 13) {
        cplx engine = multicorrelation(ex.correlation, n);
        cplx closed = example_alpha(n);
        CHECK(std::abs(engine - closed) <= 1e-12);
        // and alpha(n) = F(T^n x0) through the declared nilsequence
        cplx nil = nilsequence_eval(ex.closed_form, n);
        CHECK(std::abs(nil - closed) <= 1e-12);
    }
}

TEST_CASE("mollify: continuity, agreement off the neighborhoods, bounds") {
    TorusFunction F;
    F.eval = [](double x) { return e2pi(x / std::sqrt(2.0)); };
    F.discontinuities = {0.0};
    F.sup_bound = 1.0;
    double w = 0.05;
    TorusFunction Fw = mollify(F, w);

    // agrees with F on [w, 1-w]
    for (double x : {0.05, 0.1, 0.5, 0.9, 0.95}) CHECK(Fw.eval(x) == F.eval(x));
    // continuous across the seam: values at 1-eps and +eps stay close
    cplx left = Fw.eval(1.0 - 1e-9);
    cplx right = Fw.eval(1e-9);
    CHECK(std::abs(left - right) < 1e-6);
    // sup bound preserved on a dense sample
    for (int i = 0; i < 2000; ++i) {
        double x = (i + 0.5) / 2000.0;
        CHECK(std::abs(Fw.eval(x)) <= 1.0 + 1e-12);
    }

    // continuous F passes through untouched
    TorusFunction smooth;
    smooth.eval = [](double x) { return e2pi(x); };
    smooth.sup_bound = 1.0;
    TorusFunction same = mollify(smooth, 0.1);
    CHECK(same.eval(0.123) == smooth.eval(0.123));

    // width too large for the gap structure
    TorusFunction two;
    two.eval = [](double) { return cplx(1.0, 0.0); };
    two.discontinuities = {0.0, 0.1};
    CHECK_THROWS_AS(mollify(two, 0.06), std::domain_error);
}

TEST_CASE("example_nil_approx error bounds at epsilon = 0.1") {
    Nilsequence psi = example_nil_approx(0.1);
    Sequence psi_fn = nilsequence_fn(psi);
    auto alpha_fn = [](i64 n) { return example_alpha(n); };

    // Cesaro error over a desk window obeys the 2*(2w) + discrepancy bound
    i64 N = 100000;
    double err = approximation_error(alpha_fn, psi_fn, AveragingScheme::cesaro(1, N));
    CHECK(err <= 0.1);

    double w = 0.025;
    CHECK(err <= 2.0 * (2.0 * w) + 200.0 / static_cast<double>(N));

    PrimeSieve sieve = sieve_primes(100000);
    double perr = approximation_error(alpha_fn, psi_fn, AveragingScheme::primes(100000), &sieve);
    CHECK(perr <= 0.12);
}

TEST_CASE("mollification error bound across window sizes") {
    Nilsequence psi = example_nil_approx(0.1);
    Sequence psi_fn = nilsequence_fn(psi);
    auto alpha_fn = [](i64 n) { return example_alpha(n); };
    double w = 0.025;
    for (i64 N : {10000, 30000, 100000}) {
        double err = approximation_error(alpha_fn, psi_fn, AveragingScheme::cesaro(1, N));
        CHECK(err <= 2.0 * (2.0 * w) + 200.0 / static_cast<double>(N));
    }
}

TEST_CASE("nilsequence validation") {
    Nilsequence bad;
    bad.data = TorusNilData{{Coefficient::integer(1)}, TorusPoint{{0.0, 0.5}}};  // dim mismatch
    bad.F = TrigObservable::character(Space::torus(1), {1}, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    CHECK_THROWS_AS(example_nil_approx(0.0), std::domain_error);
    CHECK_THROWS_AS(example_nil_approx(1.0), std::domain_error);
}
