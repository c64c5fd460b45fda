#include "nilcorr/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace nilcorr {

Space Space::suspension(const Space& base_space, int fibers) {
    Space s;
    s.kind = Kind::Suspension;
    s.base = std::make_shared<Space>(base_space);
    s.fiber_dim = fibers;
    s.dim = base_space.dim + fibers;
    return s;
}

bool Space::operator==(const Space& o) const {
    if (kind != o.kind || dim != o.dim || fiber_dim != o.fiber_dim) return false;
    if (kind == Kind::Suspension) return base && o.base && *base == *o.base;
    return true;
}

int space_coord_count(const Space& s) { return s.dim; }

void point_coords(const Point& p, std::vector<double>& out) {
    out.clear();
    if (const auto* tp = std::get_if<TorusPoint>(&p)) {
        out.assign(tp->coords.begin(), tp->coords.end());
    } else if (const auto* np = std::get_if<NilPoint>(&p)) {
        out = {np->rep.x, np->rep.y, np->rep.z};
    } else {
        const auto& sp = std::get<SuspensionPoint>(p);
        if (const auto* tp = std::get_if<TorusPoint>(&sp.base))
            out.assign(tp->coords.begin(), tp->coords.end());
        else {
            const auto& np = std::get<NilPoint>(sp.base);
            out = {np.rep.x, np.rep.y, np.rep.z};
        }
        out.insert(out.end(), sp.fibers.begin(), sp.fibers.end());
    }
}

Point point_from_coords(const Space& s, std::span<const double> coords) {
    if (static_cast<int>(coords.size()) != s.dim) throw std::domain_error("coordinate count does not match space");
    switch (s.kind) {
        case Space::Kind::Torus: return TorusPoint{{coords.begin(), coords.end()}};
        case Space::Kind::Heisenberg: return NilPoint{{coords[0], coords[1], coords[2]}};
        case Space::Kind::Suspension: {
            SuspensionPoint sp;
            std::span<const double> base_part = coords.first(static_cast<std::size_t>(s.base->dim));
            Point b = point_from_coords(*s.base, base_part);
            if (auto* tp = std::get_if<TorusPoint>(&b))
                sp.base = std::move(*tp);
            else
                sp.base = std::get<NilPoint>(b);
            sp.fibers.assign(coords.begin() + s.base->dim, coords.end());
            return sp;
        }
    }
    throw std::logic_error("unreachable");
}

// ---- Heisenberg group --------------------------------------------------------

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y};
}

HeisenbergElement heis_inverse(const HeisenbergElement& g) { return {-g.x, -g.y, g.x * g.y - g.z}; }

HeisenbergElement heis_pow(const HeisenbergElement& g, i128 n) {
    if (n == 0) return {0, 0, 0};
    // C(n,2) = n(n-1)/2 is exact in i128 for |n| up to ~1e18.
    i128 binom = checked_mul(n, n - 1) / 2;
    double nd = i128_to_double(n);
    double bd = i128_to_double(binom);
    // Compensated x*y so the C(n,2) term keeps its low bits for large n.
    double p = g.x * g.y;
    double e = std::fma(g.x, g.y, -p);
    double z = nd * g.z + bd * p + bd * e;
    return {nd * g.x, nd * g.y, z};
}

NilPoint nil_reduce(const HeisenbergElement& g) {
    // Right-multiply by gamma = (-floor(x), -floor(y), c) with c landing z in [0,1):
    // g*gamma = ({x}, {y}, z - x*floor(y) + c).
    double z = g.z - g.x * std::floor(g.y);
    return {{fractional(g.x), fractional(g.y), fractional(z)}};
}

// ---- lattice actions -----------------------------------------------------------

Point apply_lattice(const LatticeAction& T, std::span<const i128> n, const Point& x) {
    if (static_cast<int>(n.size()) != T.rank()) throw std::domain_error("exponent dimension mismatch");
    return T.apply(n, x);
}

Point apply_lattice(const LatticeAction& T, std::span<const i64> n, const Point& x) {
    std::vector<i128> wide(n.begin(), n.end());
    return apply_lattice(T, std::span<const i128>(wide), x);
}

TorusRotation::TorusRotation(int dim, int rank, std::vector<Coefficient> angles)
    : dim_(dim), rank_(rank), angles_(std::move(angles)), space_(Space::torus(dim)) {
    if (dim < 1 || rank < 1) throw std::domain_error("invalid torus action shape");
    if (angles_.size() != static_cast<std::size_t>(dim) * rank) throw std::domain_error("angle table does not match dim and rank");
}

std::vector<Frac128> TorusRotation::shift(std::span<const i128> n) const {
    std::vector<Frac128> out(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) {
        // Channel accumulation keeps rational-tagged angles exact mod 1
        // (e.g. three steps of 1/3 land on 0, not 1 - 2^-128).
        PolyValue acc;
        for (int k = 0; k < rank_; ++k) acc.accumulate(angle(k, c), n[static_cast<std::size_t>(k)]);
        acc.normalize();
        out[static_cast<std::size_t>(c)] = acc.frac_fixed();
    }
    return out;
}

Point TorusRotation::apply(std::span<const i128> n, const Point& x) const {
    const auto* tp = std::get_if<TorusPoint>(&x);
    if (!tp || static_cast<int>(tp->coords.size()) != dim_) throw std::domain_error("point does not lie in the action's space");
    std::vector<Frac128> v = shift(n);
    TorusPoint out = *tp;
    for (int c = 0; c < dim_; ++c)
        out.coords[static_cast<std::size_t>(c)] = fractional(out.coords[static_cast<std::size_t>(c)] + v[static_cast<std::size_t>(c)].to_double());
    return out;
}

Point HeisenbergTranslation::apply(std::span<const i128> n, const Point& x) const {
    const auto* np = std::get_if<NilPoint>(&x);
    if (!np) throw std::domain_error("point does not lie in the action's space");
    return nil_reduce(heis_mul(heis_pow(g_, n[0]), np->rep));
}

PackedAction::PackedAction(std::vector<std::shared_ptr<const LatticeAction>> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::domain_error("packed action needs at least one part");
    for (const auto& p : parts_) {
        if (p->space() != parts_.front()->space()) throw std::domain_error("packed actions live on different spaces");
        rank_ += p->rank();
    }
}

Point PackedAction::apply(std::span<const i128> n, const Point& x) const {
    Point cur = x;
    std::size_t off = 0;
    for (const auto& p : parts_) {
        auto block = n.subspan(off, static_cast<std::size_t>(p->rank()));
        cur = p->apply(block, cur);
        off += static_cast<std::size_t>(p->rank());
    }
    return cur;
}

std::optional<std::vector<Frac128>> PackedAction::translation_shift(std::span<const i128> n) const {
    std::vector<Frac128> total(static_cast<std::size_t>(space().dim));
    std::size_t off = 0;
    for (const auto& p : parts_) {
        auto block = n.subspan(off, static_cast<std::size_t>(p->rank()));
        auto part = p->translation_shift(block);
        if (!part) return std::nullopt;
        for (std::size_t c = 0; c < total.size(); ++c) total[c].add_carry((*part)[c]);
        off += static_cast<std::size_t>(p->rank());
    }
    return total;
}

// ---- sampling and commutation checks --------------------------------------------

u64 splitmix64(u64& state) {
    u64 z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

double unit_double(u64& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1p-53; }

double max_coord_diff(const Point& a, const Point& b) {
    std::vector<double> ca, cb;
    point_coords(a, ca);
    point_coords(b, cb);
    double m = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        double d = std::abs(ca[i] - cb[i]);
        d = std::min(d, 1.0 - d);  // circular distance: coordinates live mod 1
        m = std::max(m, d);
    }
    return m;
}

}  // namespace

Point random_point(const Space& s, u64& state) {
    std::vector<double> coords(static_cast<std::size_t>(s.dim));
    for (auto& c : coords) c = unit_double(state);
    return point_from_coords(s, coords);
}

void check_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions, int samples, double tol, u64 seed) {
    if (actions.size() < 2) return;
    u64 state = seed;
    for (int it = 0; it < samples; ++it) {
        std::size_t i = splitmix64(state) % actions.size();
        std::size_t j = splitmix64(state) % actions.size();
        if (i == j) continue;
        std::vector<i128> ni(static_cast<std::size_t>(actions[i]->rank()));
        std::vector<i128> nj(static_cast<std::size_t>(actions[j]->rank()));
        for (auto& v : ni) v = static_cast<i128>(splitmix64(state) % 21) - 10;
        for (auto& v : nj) v = static_cast<i128>(splitmix64(state) % 21) - 10;
        Point x = random_point(actions[i]->space(), state);
        Point ab = actions[i]->apply(ni, actions[j]->apply(nj, x));
        Point ba = actions[j]->apply(nj, actions[i]->apply(ni, x));
        if (max_coord_diff(ab, ba) > tol) throw std::runtime_error("actions do not commute");
    }
}

// ---- flows -------------------------------------------------------------------------

Point apply_flow(const FlowFamily& S, int i, std::span<const Real128> t, const Point& x) {
    if (i < 0 || i >= S.count()) throw std::domain_error("flow index out of range");
    if (static_cast<int>(t.size()) != S.rank()) throw std::domain_error("time dimension mismatch");
    return S.apply(i, t, x);
}

Point apply_flow(const FlowFamily& S, int i, std::span<const double> t, const Point& x) {
    std::vector<Real128> wide;
    wide.reserve(t.size());
    for (double v : t) wide.push_back(Real128::from_double(v));
    return apply_flow(S, i, std::span<const Real128>(wide), x);
}

TorusFlowFamily::TorusFlowFamily(int dim, int rank, std::vector<std::vector<Coefficient>> angle_tables)
    : dim_(dim), rank_(rank), tables_(std::move(angle_tables)), space_(Space::torus(dim)) {
    if (dim < 1 || rank < 1 || tables_.empty()) throw std::domain_error("invalid torus flow shape");
    for (const auto& t : tables_)
        if (t.size() != static_cast<std::size_t>(dim) * rank) throw std::domain_error("angle table does not match dim and rank");
}

std::vector<Frac128> TorusFlowFamily::shift(int i, std::span<const Real128> t) const {
    std::vector<Frac128> out(static_cast<std::size_t>(dim_));
    for (int c = 0; c < dim_; ++c) {
        Frac128 acc{};
        for (int j = 0; j < rank_; ++j) {
            Real128 term = t[static_cast<std::size_t>(j)].mul(angle(i, j, c).rep);
            acc.add_carry(term.fr);
        }
        out[static_cast<std::size_t>(c)] = acc;
    }
    return out;
}

Point TorusFlowFamily::apply(int i, std::span<const Real128> t, const Point& x) const {
    const auto* tp = std::get_if<TorusPoint>(&x);
    if (!tp || static_cast<int>(tp->coords.size()) != dim_) throw std::domain_error("point does not lie in the flow's space");
    std::vector<Frac128> v = shift(i, t);
    TorusPoint out = *tp;
    for (int c = 0; c < dim_; ++c)
        out.coords[static_cast<std::size_t>(c)] = fractional(out.coords[static_cast<std::size_t>(c)] + v[static_cast<std::size_t>(c)].to_double());
    return out;
}

}  // namespace nilcorr
