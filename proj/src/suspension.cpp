#include "nilcorr/suspension.hpp"

#include <cmath>

namespace nilcorr {

SuspensionFlows::SuspensionFlows(std::shared_ptr<const LatticeAction> base, int m) : base_(std::move(base)), m_(m) {
    if (!base_) throw std::domain_error("suspension needs a base lattice system");
    if (m < 1) throw std::domain_error("suspension needs m >= 1 fibers");
    space_ = Space::suspension(base_->space(), m * base_->rank());
}

Point SuspensionFlows::apply(int i, std::span<const Real128> t, const Point& x) const {
    const auto* sp = std::get_if<SuspensionPoint>(&x);
    if (!sp || static_cast<int>(sp->fibers.size()) != m_ * rank()) throw std::domain_error("point does not lie in the suspension space");
    int ell = rank();
    SuspensionPoint out = *sp;
    std::vector<i128> kick(static_cast<std::size_t>(ell));
    for (int j = 0; j < ell; ++j) {
        double b = sp->fibers[static_cast<std::size_t>(i * ell + j)];
        Real128 u = Real128::from_double(b).add(t[static_cast<std::size_t>(j)]);
        kick[static_cast<std::size_t>(j)] = u.floor();
        double f = u.frac_double();
        if (f >= 1.0) f = std::nextafter(1.0, 0.0);
        out.fibers[static_cast<std::size_t>(i * ell + j)] = f;
    }
    Point base_pt = std::visit([](const auto& b) -> Point { return b; }, sp->base);
    Point moved = base_->apply(kick, base_pt);
    if (auto* tp = std::get_if<TorusPoint>(&moved))
        out.base = std::move(*tp);
    else
        out.base = std::get<NilPoint>(moved);
    return out;
}

namespace {

// Pointwise commutation spot-check for the built flows.
void spot_check_flows(const SuspensionFlows& S, int samples, double tol) {
    if (S.count() < 2) return;
    u64 state = 0xf10b5;
    for (int it = 0; it < samples; ++it) {
        int i = static_cast<int>(splitmix64(state) % static_cast<u64>(S.count()));
        int j = static_cast<int>(splitmix64(state) % static_cast<u64>(S.count()));
        std::vector<Real128> t, u;
        for (int c = 0; c < S.rank(); ++c) {
            t.push_back(Real128::from_double(static_cast<double>(splitmix64(state) % 4000) / 1000.0 - 2.0));
            u.push_back(Real128::from_double(static_cast<double>(splitmix64(state) % 4000) / 1000.0 - 2.0));
        }
        Point x = random_point(S.space(), state);
        Point ab = S.apply(i, t, S.apply(j, u, x));
        Point ba = S.apply(j, u, S.apply(i, t, x));
        std::vector<double> ca, cb;
        point_coords(ab, ca);
        point_coords(ba, cb);
        for (std::size_t c = 0; c < ca.size(); ++c) {
            double d = std::abs(ca[c] - cb[c]);
            d = std::min(d, 1.0 - d);
            if (d > tol) throw std::runtime_error("suspension flows do not commute");
        }
    }
}

}  // namespace

std::shared_ptr<SuspensionFlows> build_suspension(std::shared_ptr<const LatticeAction> X, int m) {
    auto S = std::make_shared<SuspensionFlows>(std::move(X), m);
    spot_check_flows(*S, 20, 1e-12);
    return S;
}

LiftedObservables lift_observables(std::span<const Observable> functions, double delta, const Space& suspension_space) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");
    if (functions.size() < 2) throw std::domain_error("need f0 and at least one f_i");
    if (suspension_space.kind != Space::Kind::Suspension) throw std::domain_error("lift target must be a suspension space");

    auto base_point = [](const SuspensionPoint& sp) { return std::visit([](const auto& b) -> Point { return b; }, sp.base); };

    LiftedObservables out;
    out.delta = delta;
    Observable f0 = functions[0];
    SampledObservable lifted0;
    lifted0.space = suspension_space;
    lifted0.sup_bound = observable_sup_bound(f0);
    lifted0.eval = [f0, delta, base_point](const Point& p) -> cplx {
        const auto& sp = std::get<SuspensionPoint>(p);
        for (double b : sp.fibers)
            if (b > delta) return 0.0;  // closed box [0, delta]^{m*ell}
        return eval_obs(f0, base_point(sp));
    };
    out.f0_lifted = lifted0;

    for (std::size_t i = 1; i < functions.size(); ++i) {
        Observable fi = functions[i];
        SampledObservable lifted;
        lifted.space = suspension_space;
        lifted.sup_bound = observable_sup_bound(fi);
        lifted.eval = [fi, base_point](const Point& p) -> cplx { return eval_obs(fi, base_point(std::get<SuspensionPoint>(p))); };
        out.fi_lifted.push_back(lifted);
    }
    return out;
}

CorrelationSpec suspension_spec(const CorrelationSpec& lattice_spec, double delta, int quad_points) {
    lattice_spec.validate();
    if (!lattice_spec.is_lattice()) throw std::domain_error("suspension starts from a lattice spec");
    auto flows = build_suspension(lattice_spec.action, lattice_spec.m());
    LiftedObservables lifted = lift_observables(lattice_spec.functions, delta, flows->space());
    CorrelationSpec out;
    out.flows = flows;
    out.functions.push_back(lifted.f0_lifted);
    for (auto& f : lifted.fi_lifted) out.functions.push_back(f);
    out.polys = lattice_spec.polys;
    out.integration = IntegrationChoice::quadrature(quad_points);
    return out;
}

namespace {

struct FiberSegment {
    double length;
    int bump;  // floor(q + b) - floor(q) on the segment
};

// Splits [0, delta] at the break point 1 - {q}; the boundary joins the
// left cell (measure zero either way, fixed for determinism).
std::vector<FiberSegment> split_segments(double frac_q, double delta) {
    double beta = 1.0 - frac_q;
    if (beta <= delta) return {{beta, 0}, {delta - beta, 1}};
    return {{delta, 0}};
}

}  // namespace

cplx alpha_tilde(const CorrelationSpec& lattice_spec, double delta, i64 n) {
    lattice_spec.validate();
    if (!lattice_spec.is_lattice()) throw std::domain_error("alpha_tilde starts from a lattice spec");
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");

    int m = lattice_spec.m();
    int ell = lattice_spec.action->rank();

    bool char_capable = lattice_spec.integration.exact;
    if (char_capable)
        for (const auto& f : lattice_spec.functions) char_capable = char_capable && std::holds_alternative<TrigObservable>(f);

    if (!char_capable) {
        // Fiber box indicator straddles the grid; documented Riemann behavior.
        int qp = lattice_spec.integration.exact ? 32 : lattice_spec.integration.quad.points_per_dim;
        CorrelationSpec lifted = suspension_spec(lattice_spec, delta, qp);
        return multicorrelation_flow(lifted, n);
    }

    // Exact piecewise fiber integration.  The suspension construction is
    // floor-based, so plain floors are used regardless of the spec's
    // bracket maps.
    std::vector<std::vector<i128>> floors(static_cast<std::size_t>(m));
    std::vector<std::vector<std::vector<FiberSegment>>> segments(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        floors[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(ell));
        segments[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(ell));
        for (int j = 0; j < ell; ++j) {
            PolyValue v = eval_coordinate_at_integer(lattice_spec.polys[static_cast<std::size_t>(i)], j, n);
            floors[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.floor();
            segments[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                split_segments(v.frac(), delta);
        }
    }

    // Cartesian product over the l*m fiber coordinates.
    int L = m * ell;
    std::vector<int> pick(static_cast<std::size_t>(L), 0);
    cplx total = 0;
    for (;;) {
        double weight = 1.0;
        std::vector<std::vector<i128>> exps = floors;
        for (int c = 0; c < L; ++c) {
            int i = c / ell, j = c % ell;
            const FiberSegment& seg = segments[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(pick[static_cast<std::size_t>(c)])];
            weight *= seg.length;
            exps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += seg.bump;
        }
        if (weight != 0.0) total += weight * correlation_at_exponents(lattice_spec, exps);
        int c = 0;
        for (; c < L; ++c) {
            int i = c / ell, j = c % ell;
            if (pick[static_cast<std::size_t>(c)] + 1 <
                static_cast<int>(segments[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].size())) {
                ++pick[static_cast<std::size_t>(c)];
                break;
            }
            pick[static_cast<std::size_t>(c)] = 0;
        }
        if (c == L) break;
    }
    return total;
}

bool exceptional(std::span<const VectorPolynomial> qs, double delta, i64 n) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");
    for (const auto& q : qs) {
        bool all = true;
        for (int j = 0; j < q.ell && all; ++j) all = eval_coordinate_at_integer(q, j, n).frac() >= 1.0 - delta;
        if (all) return true;
    }
    return false;
}

bool floor_stable(std::span<const VectorPolynomial> qs, double delta, i64 n) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta outside (0,1)");
    for (const auto& q : qs)
        for (int j = 0; j < q.ell; ++j)
            if (eval_coordinate_at_integer(q, j, n).frac() >= 1.0 - delta) return false;
    return true;
}

std::vector<DeltaScanRow> delta_scan(const CorrelationSpec& lattice_spec, i64 M, i64 N, int kmax) {
    lattice_spec.validate();
    if (M >= N) throw std::domain_error("empty window");
    int lm = lattice_spec.action->rank() * lattice_spec.m();
    std::vector<DeltaScanRow> rows;
    for (int k = 1; k <= kmax; ++k) {
        double delta = std::ldexp(1.0, -k);
        double scale = std::pow(delta, -lm);
        double max_err = 0;
        CompensatedSum errs;
        u64 exc = 0;
        for (i64 n = M; n < N; ++n) {
            cplx a = multicorrelation(lattice_spec, n);
            cplx at = alpha_tilde(lattice_spec, delta, n);
            double err = std::abs(a - scale * at);
            max_err = std::max(max_err, err);
            errs.add(err);
            exc += exceptional(lattice_spec.polys, delta, n) ? 1 : 0;
        }
        rows.push_back({delta, max_err, errs.value() / static_cast<double>(N - M),
                        static_cast<double>(exc) / static_cast<double>(N - M)});
    }
    return rows;
}

// ---- flow -> lattice reduction ------------------------------------------------

LatticeReduction::LatticeReduction(std::shared_ptr<const FlowFamily> S, int flow_index, VectorPolynomial q)
    : S_(std::move(S)), flow_index_(flow_index), q_(std::move(q)) {
    if (!S_) throw std::domain_error("reduction needs a flow family");
    if (flow_index_ < 0 || flow_index_ >= S_->count()) throw std::domain_error("flow index out of range");
    q_.validate();
    if (q_.ell != S_->rank()) throw std::domain_error("polynomial target dimension does not match the flow rank");
}

Point LatticeReduction::apply(std::span<const i128> n, const Point& x) const {
    // T^{(n_0..n_d)} = prod_h T_h^{n_h}, T_h^{n_h} = S_i^{n_h * a_{.,h}}.
    Point cur = x;
    int ell = q_.ell;
    std::vector<Real128> t(static_cast<std::size_t>(ell));
    for (int h = 0; h <= q_.degree; ++h) {
        if (n[static_cast<std::size_t>(h)] == 0) continue;
        for (int j = 0; j < ell; ++j) t[static_cast<std::size_t>(j)] = q_.at(j, h).rep.mul_int(n[static_cast<std::size_t>(h)]);
        cur = S_->apply(flow_index_, t, cur);
    }
    return cur;
}

std::optional<std::vector<Frac128>> LatticeReduction::translation_shift(std::span<const i128> n) const {
    std::vector<Frac128> total(static_cast<std::size_t>(space().dim));
    int ell = q_.ell;
    std::vector<Real128> t(static_cast<std::size_t>(ell));
    for (int h = 0; h <= q_.degree; ++h) {
        if (n[static_cast<std::size_t>(h)] == 0) continue;
        for (int j = 0; j < ell; ++j) t[static_cast<std::size_t>(j)] = q_.at(j, h).rep.mul_int(n[static_cast<std::size_t>(h)]);
        auto part = S_->translation_shift(flow_index_, t);
        if (!part) return std::nullopt;
        for (std::size_t c = 0; c < total.size(); ++c) total[c].add_carry((*part)[c]);
    }
    return total;
}

LatticeReduction flow_to_lattice(std::shared_ptr<const FlowFamily> S, int flow_index, const VectorPolynomial& q) {
    return LatticeReduction(std::move(S), flow_index, q);
}

std::vector<i128> q_vec(i64 n, int degree) {
    std::vector<i128> out(static_cast<std::size_t>(degree) + 1);
    i128 pw = 1;
    for (int h = 0; h <= degree; ++h) {
        out[static_cast<std::size_t>(h)] = pw;
        if (h < degree) pw = checked_mul(pw, n);
    }
    return out;
}

}  // namespace nilcorr
