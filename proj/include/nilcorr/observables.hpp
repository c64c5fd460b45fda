#pragma once

// Complex-valued observables with two integration paths: exact character
// sums (the zero-frequency amplitude) and midpoint tensor-grid quadrature
// over the fundamental domain.

#include <complex>
#include <functional>

#include "nilcorr/parallel.hpp"
#include "nilcorr/systems.hpp"

namespace nilcorr {

using cplx = std::complex<double>;

// e(u) = exp(2 pi i u)
cplx e2pi(double u);

struct TrigTerm {
    std::vector<i64> freq;  // one entry per space coordinate
    cplx amp;
    bool operator==(const TrigTerm&) const = default;
};

// Finite character sum sum_k amp_k e(freq_k . coords(x)).
struct TrigObservable {
    Space space;
    std::vector<TrigTerm> terms;

    double sup_bound() const;
    cplx zero_frequency_amplitude() const;
    static TrigObservable character(const Space& s, std::vector<i64> freq, cplx amp);
    static TrigObservable constant(const Space& s, cplx c);
};

struct SampledObservable {
    Space space;
    std::function<cplx(const Point&)> eval;
    double sup_bound = 1.0;
};

using Observable = std::variant<TrigObservable, SampledObservable>;

const Space& observable_space(const Observable& f);
double observable_sup_bound(const Observable& f);

cplx eval_obs(const Observable& f, const Point& x);

struct QuadratureRule {
    int points_per_dim = 4096;  // midpoint tensor grid
};

struct IntegrationChoice {
    bool exact = true;
    QuadratureRule quad;

    static IntegrationChoice exact_path() { return {true, {}}; }
    static IntegrationChoice quadrature(int q) { return {false, {q}}; }
};

// Exact path: zero-frequency amplitude (TrigObservable only, throws for
// sampled data).  Quadrature: midpoint-grid average with a fixed pairwise
// reduction order, O(Q^-2) for twice-differentiable integrands.
cplx integrate(const Observable& f, const Space& s, const IntegrationChoice& how);

// Pointwise product; trig x trig convolves term lists, sup bounds multiply.
Observable product_obs(const Observable& f, const Observable& g);

// Rescales so the sup bound is at most 1 (returns the scale actually used).
Observable normalize_obs(const Observable& f, double* scale = nullptr);

// Grid average of an arbitrary evaluator over a space (quadrature backend,
// also used by correlation engines).
cplx grid_average(const Space& s, int points_per_dim, const std::function<cplx(const Point&)>& fn);

}  // namespace nilcorr
