#include "nilcorr/nilseq.hpp"

#include <algorithm>
#include <cmath>

namespace nilcorr {

void Nilsequence::validate() const {
    if (step < 1) throw std::domain_error("nilsequence step must be at least 1");
    if (const auto* t = std::get_if<TorusNilData>(&data)) {
        if (t->g.empty() || t->g.size() != t->x.coords.size()) throw std::domain_error("nilsequence data dimensions disagree");
        if (observable_space(F).kind != Space::Kind::Torus || observable_space(F).dim != static_cast<int>(t->g.size()))
            throw std::domain_error("observable does not live on the nilsequence's space");
    } else {
        if (observable_space(F).kind != Space::Kind::Heisenberg)
            throw std::domain_error("observable does not live on the nilsequence's space");
    }
}

cplx nilsequence_eval(const Nilsequence& psi, i64 n) {
    if (const auto* t = std::get_if<TorusNilData>(&psi.data)) {
        TorusPoint p;
        p.coords.resize(t->g.size());
        for (std::size_t c = 0; c < t->g.size(); ++c) {
            Real128 v = t->g[c].rep.mul_int(n).add(Real128::from_double(t->x.coords[c]));
            double f = v.frac_double();
            if (f >= 1.0) f = std::nextafter(1.0, 0.0);
            p.coords[c] = f;
        }
        return eval_obs(psi.F, p);
    }
    const auto& h = std::get<HeisNilData>(psi.data);
    NilPoint p = nil_reduce(heis_mul(heis_pow(h.g, n), h.x.rep));
    return eval_obs(psi.F, p);
}

Sequence nilsequence_fn(const Nilsequence& psi) {
    psi.validate();
    return [psi](i64 n) { return nilsequence_eval(psi, n); };
}

// ---- the rotation example ----------------------------------------------------

namespace {

const Real128& sqrt2() {
    static const Real128 v = Real128::sqrt_rational(2, 1);
    return v;
}

double inv_sqrt2() { return 1.0 / std::sqrt(2.0); }

}  // namespace

cplx example_alpha(i64 n) {
    double frac = sqrt2().mul_int(n).frac_double();
    return e2pi(frac * inv_sqrt2());
}

ExampleSpec example_spec() {
    Space torus = Space::torus(1);
    ExampleSpec out;

    CorrelationSpec spec;
    spec.action = std::make_shared<TorusRotation>(1, 1, std::vector<Coefficient>{Coefficient::sqrt_scaled(2, 1, 1, 2)});
    spec.functions = {TrigObservable::character(torus, {1}, 1.0), TrigObservable::character(torus, {-1}, 1.0)};
    spec.polys = {parse_polynomial("sqrt(2)*x")};
    spec.brackets = {BracketMap::uniform(BracketKind::Floor, 1)};
    spec.integration = IntegrationChoice::exact_path();
    out.correlation = std::move(spec);

    TorusFunction F;
    F.eval = [](double x) { return e2pi(x * inv_sqrt2()); };
    F.discontinuities = {0.0};
    F.sup_bound = 1.0;

    Nilsequence psi;
    psi.data = TorusNilData{{Coefficient::sqrt_scaled(2, 1, 1, 1)}, TorusPoint{{0.0}}};
    psi.F = wrap_torus_function(F);
    psi.step = 1;
    out.closed_form = std::move(psi);
    return out;
}

// ---- mollification -------------------------------------------------------------

namespace {

double circ_dist(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

}  // namespace

TorusFunction mollify(const TorusFunction& F, double w) {
    if (F.discontinuities.empty()) return F;
    if (!(w > 0.0 && w < 0.5)) throw std::domain_error("mollification width outside (0, 1/2)");
    std::vector<double> ds = F.discontinuities;
    std::sort(ds.begin(), ds.end());
    double min_gap = 1.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double next = i + 1 < ds.size() ? ds[i + 1] : ds[0] + 1.0;
        min_gap = std::min(min_gap, next - ds[i]);
    }
    if (!(w < min_gap / 2)) throw std::domain_error("mollification width too large for the discontinuity gaps");

    auto base = F.eval;
    TorusFunction out;
    out.sup_bound = F.sup_bound;
    out.discontinuities = {};
    out.eval = [base, ds, w](double x) -> cplx {
        for (double d : ds) {
            if (circ_dist(x, d) >= w) continue;
            // linear interpolation between F(d-w) and F(d+w)
            double lo = d - w, hi = d + w;
            double rel = x - lo;
            if (rel < -0.5) rel += 1.0;  // wrapped around the circle
            if (rel > 1.0) rel -= 1.0;
            double lam = rel / (2 * w);
            cplx a = base(fractional(lo));
            cplx b = base(fractional(hi));
            return (1.0 - lam) * a + lam * b;
        }
        return base(x);
    };
    return out;
}

Observable wrap_torus_function(const TorusFunction& F) {
    SampledObservable obs;
    obs.space = Space::torus(1);
    obs.sup_bound = F.sup_bound;
    auto eval = F.eval;
    obs.eval = [eval](const Point& p) { return eval(std::get<TorusPoint>(p).coords[0]); };
    return obs;
}

Nilsequence example_nil_approx(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon outside (0,1)");
    // The sequences differ only when {sqrt(2) n} lies within w of the
    // discontinuity at 0 (limiting density 2w) and by at most 2 there, so
    // w = epsilon/4 makes both error functionals at most epsilon.
    double w = epsilon / 4.0;
    TorusFunction F;
    F.eval = [](double x) { return e2pi(x * (1.0 / std::sqrt(2.0))); };
    F.discontinuities = {0.0};
    F.sup_bound = 1.0;
    TorusFunction Fw = mollify(F, w);

    Nilsequence psi;
    psi.data = TorusNilData{{Coefficient::sqrt_scaled(2, 1, 1, 1)}, TorusPoint{{0.0}}};
    psi.F = wrap_torus_function(Fw);
    psi.step = 1;  // rotation with continuous F
    return psi;
}

}  // namespace nilcorr
