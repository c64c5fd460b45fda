#include "nilcorr/observables.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace nilcorr {

cplx e2pi(double u) {
    double a = 2.0 * std::numbers::pi * u;
    return {std::cos(a), std::sin(a)};
}

double TrigObservable::sup_bound() const {
    double s = 0;
    for (const auto& t : terms) s += std::abs(t.amp);
    return s;
}

cplx TrigObservable::zero_frequency_amplitude() const {
    cplx z = 0;
    for (const auto& t : terms) {
        bool zero = true;
        for (i64 f : t.freq) zero = zero && f == 0;
        if (zero) z += t.amp;
    }
    return z;
}

TrigObservable TrigObservable::character(const Space& s, std::vector<i64> freq, cplx amp) {
    if (static_cast<int>(freq.size()) != s.dim) throw std::domain_error("frequency dimension does not match space");
    return {s, {{std::move(freq), amp}}};
}

TrigObservable TrigObservable::constant(const Space& s, cplx c) {
    return {s, {{std::vector<i64>(static_cast<std::size_t>(s.dim), 0), c}}};
}

const Space& observable_space(const Observable& f) {
    if (const auto* t = std::get_if<TrigObservable>(&f)) return t->space;
    return std::get<SampledObservable>(f).space;
}

double observable_sup_bound(const Observable& f) {
    if (const auto* t = std::get_if<TrigObservable>(&f)) return t->sup_bound();
    return std::get<SampledObservable>(f).sup_bound;
}

cplx eval_obs(const Observable& f, const Point& x) {
    static thread_local std::vector<double> coords;
    if (const auto* t = std::get_if<TrigObservable>(&f)) {
        point_coords(x, coords);
        if (static_cast<int>(coords.size()) != t->space.dim)
            throw std::domain_error("point does not lie in the observable's space");
        cplx z = 0;
        for (const auto& term : t->terms) {
            double phase = 0;
            for (std::size_t c = 0; c < term.freq.size(); ++c) phase += static_cast<double>(term.freq[c]) * coords[c];
            z += term.amp * e2pi(phase - std::floor(phase));
        }
        return z;
    }
    const auto& s = std::get<SampledObservable>(f);
    return s.eval(x);
}

cplx grid_average(const Space& s, int points_per_dim, const std::function<cplx(const Point&)>& fn) {
    int dim = space_coord_count(s);
    if (points_per_dim < 1) throw std::domain_error("quadrature needs at least one point per dimension");
    double cells_d = std::pow(static_cast<double>(points_per_dim), dim);
    if (cells_d > 1e8) throw std::domain_error("quadrature grid too large");
    i64 cells = 1;
    for (int d = 0; d < dim; ++d) cells *= points_per_dim;

    cplx total = blocked_sum<cplx>(0, cells, [&](i64 lo, i64 hi) {
        ComplexSum acc;
        std::vector<double> coords(static_cast<std::size_t>(dim));
        for (i64 idx = lo; idx < hi; ++idx) {
            i64 rem = idx;
            for (int d = 0; d < dim; ++d) {
                coords[static_cast<std::size_t>(d)] = (static_cast<double>(rem % points_per_dim) + 0.5) / points_per_dim;
                rem /= points_per_dim;
            }
            acc.add(fn(point_from_coords(s, coords)));
        }
        return acc.value();
    });
    return total / static_cast<double>(cells);
}

cplx integrate(const Observable& f, const Space& s, const IntegrationChoice& how) {
    if (observable_space(f) != s) throw std::domain_error("observable does not live on the integration space");
    if (how.exact) {
        const auto* t = std::get_if<TrigObservable>(&f);
        if (!t) throw std::domain_error("exact integration requires character data");
        return t->zero_frequency_amplitude();
    }
    return grid_average(s, how.quad.points_per_dim, [&](const Point& p) { return eval_obs(f, p); });
}

Observable product_obs(const Observable& f, const Observable& g) {
    if (observable_space(f) != observable_space(g)) throw std::domain_error("observables live on different spaces");
    const auto* tf = std::get_if<TrigObservable>(&f);
    const auto* tg = std::get_if<TrigObservable>(&g);
    if (tf && tg) {
        // frequency-wise convolution of the term lists
        std::map<std::vector<i64>, cplx> conv;
        for (const auto& a : tf->terms)
            for (const auto& b : tg->terms) {
                std::vector<i64> freq(a.freq.size());
                for (std::size_t c = 0; c < freq.size(); ++c) freq[c] = a.freq[c] + b.freq[c];
                conv[freq] += a.amp * b.amp;
            }
        TrigObservable out{tf->space, {}};
        out.terms.reserve(conv.size());
        for (auto& [freq, amp] : conv) out.terms.push_back({freq, amp});
        return out;
    }
    SampledObservable out;
    out.space = observable_space(f);
    out.sup_bound = observable_sup_bound(f) * observable_sup_bound(g);
    out.eval = [f, g](const Point& p) { return eval_obs(f, p) * eval_obs(g, p); };
    return out;
}

Observable normalize_obs(const Observable& f, double* scale) {
    double b = observable_sup_bound(f);
    if (b <= 1.0) {
        if (scale) *scale = 1.0;
        return f;
    }
    double s = 1.0 / b;
    if (scale) *scale = s;
    if (const auto* t = std::get_if<TrigObservable>(&f)) {
        TrigObservable out = *t;
        for (auto& term : out.terms) term.amp *= s;
        return out;
    }
    const auto& sf = std::get<SampledObservable>(f);
    SampledObservable out;
    out.space = sf.space;
    out.sup_bound = 1.0;
    out.eval = [sf, s](const Point& p) { return sf.eval(p) * s; };
    return out;
}

}  // namespace nilcorr
