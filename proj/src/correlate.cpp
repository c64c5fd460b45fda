#include "nilcorr/correlate.hpp"

#include <stdexcept>

namespace nilcorr {

void CorrelationSpec::validate() const {
    if (!!action == !!flows) throw std::domain_error("correlation spec needs exactly one of a lattice action or a flow family");
    if (polys.empty()) throw std::domain_error("correlation spec needs m >= 1");
    if (functions.size() != polys.size() + 1) throw std::domain_error("correlation spec needs m+1 observables");
    int ell = action ? action->rank() : flows->rank();
    const Space& sp = action ? action->space() : flows->space();
    for (const auto& q : polys) {
        q.validate();
        if (q.ell != ell) throw std::domain_error("polynomial target dimension does not match the action rank");
    }
    for (const auto& f : functions)
        if (observable_space(f) != sp) throw std::domain_error("observable does not live on the system's space");
    if (action) {
        if (brackets.size() != polys.size()) throw std::domain_error("one bracket map per polynomial is required");
        for (const auto& b : brackets)
            if (static_cast<int>(b.kinds.size()) != ell) throw std::domain_error("bracket map dimension mismatch");
    } else if (flows->count() < m()) {
        throw std::domain_error("flow family has fewer flows than polynomials");
    }
}

std::vector<i128> iterate_exponents(const CorrelationSpec& spec, int i, i64 n) {
    return bracket_at_integer(spec.polys[static_cast<std::size_t>(i)], spec.brackets[static_cast<std::size_t>(i)], n);
}

TrigObservable pullback_by_shift(const TrigObservable& f, std::span<const Frac128> v) {
    TrigObservable out = f;
    for (auto& term : out.terms) {
        Frac128 phase{};
        for (std::size_t c = 0; c < term.freq.size(); ++c) {
            if (term.freq[c] == 0) continue;
            Real128 p = Real128{0, v[c]}.mul_int(term.freq[c]);
            phase.add_carry(p.fr);  // mod 1
        }
        term.amp *= e2pi(phase.to_double());
    }
    return out;
}

namespace {

bool all_trig(std::span<const Observable> fs) {
    for (const auto& f : fs)
        if (!std::holds_alternative<TrigObservable>(f)) return false;
    return true;
}

// Exact path: fold the pulled-back characters and keep the zero-frequency
// amplitude of the product.
cplx character_integral(std::span<const Observable> functions, const std::vector<std::vector<Frac128>>& shifts) {
    TrigObservable acc = std::get<TrigObservable>(functions[0]);
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        TrigObservable shifted = pullback_by_shift(std::get<TrigObservable>(functions[i + 1]), shifts[i]);
        acc = std::get<TrigObservable>(product_obs(acc, shifted));
    }
    return acc.zero_frequency_amplitude();
}

}  // namespace

cplx correlation_at_exponents(const CorrelationSpec& spec, const std::vector<std::vector<i128>>& exponents) {
    int m = spec.m();
    if (spec.integration.exact) {
        if (!all_trig(spec.functions)) throw std::domain_error("exact path requires character data");
        std::vector<std::vector<Frac128>> shifts;
        shifts.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            auto v = spec.action->translation_shift(exponents[static_cast<std::size_t>(i)]);
            if (!v) throw std::domain_error("exact path requires a torus translation action");
            shifts.push_back(std::move(*v));
        }
        return character_integral(spec.functions, shifts);
    }

    return grid_average(spec.action->space(), spec.integration.quad.points_per_dim, [&](const Point& x) {
        cplx prod = eval_obs(spec.functions[0], x);
        for (int i = 0; i < m; ++i)
            prod *= eval_obs(spec.functions[static_cast<std::size_t>(i) + 1],
                             spec.action->apply(exponents[static_cast<std::size_t>(i)], x));
        return prod;
    });
}

cplx multicorrelation(const CorrelationSpec& spec, i64 n) {
    spec.validate();
    if (!spec.is_lattice()) throw std::domain_error("lattice correlation called on a flow spec");
    int m = spec.m();
    std::vector<std::vector<i128>> exponents;
    exponents.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) exponents.push_back(iterate_exponents(spec, i, n));
    return correlation_at_exponents(spec, exponents);
}

cplx multicorrelation_flow(const CorrelationSpec& spec, i64 n) {
    spec.validate();
    if (spec.is_lattice()) throw std::domain_error("flow correlation called on a lattice spec");
    int m = spec.m();
    std::vector<std::vector<Real128>> times;
    times.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::vector<Real128> t;
        for (const PolyValue& v : eval_at_integer(spec.polys[static_cast<std::size_t>(i)], n)) t.push_back(v.to_real128());
        times.push_back(std::move(t));
    }

    if (spec.integration.exact) {
        if (!all_trig(spec.functions)) throw std::domain_error("exact path requires character data");
        std::vector<std::vector<Frac128>> shifts;
        shifts.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            auto v = spec.flows->translation_shift(i, times[static_cast<std::size_t>(i)]);
            if (!v) throw std::domain_error("exact path requires a torus translation flow");
            shifts.push_back(std::move(*v));
        }
        return character_integral(spec.functions, shifts);
    }

    return grid_average(spec.flows->space(), spec.integration.quad.points_per_dim, [&](const Point& x) {
        cplx prod = eval_obs(spec.functions[0], x);
        for (int i = 0; i < m; ++i)
            prod *= eval_obs(spec.functions[static_cast<std::size_t>(i) + 1],
                             spec.flows->apply(i, times[static_cast<std::size_t>(i)], x));
        return prod;
    });
}

CorrelationSpec pack_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions,
                               std::span<const Observable> functions,
                               std::span<const VectorPolynomial> polys,
                               std::span<const BracketMap> brackets,
                               const IntegrationChoice& integration) {
    if (actions.empty() || actions.size() != polys.size() || brackets.size() != polys.size())
        throw std::domain_error("commuting correlation needs one action, polynomial and bracket map per factor");
    int ell = actions.front()->rank();
    for (const auto& a : actions)
        if (a->rank() != ell) throw std::domain_error("commuting actions must share one rank");
    check_commuting(actions);

    int m = static_cast<int>(actions.size());
    int packed_rank = ell * m;
    CorrelationSpec spec;
    spec.action = std::make_shared<PackedAction>(std::vector<std::shared_ptr<const LatticeAction>>(actions.begin(), actions.end()));
    spec.functions.assign(functions.begin(), functions.end());
    spec.integration = integration;
    for (int i = 0; i < m; ++i) {
        const VectorPolynomial& q = polys[static_cast<std::size_t>(i)];
        VectorPolynomial packed = VectorPolynomial::zero(packed_rank, q.degree);
        for (int j = 0; j < ell; ++j)
            for (int h = 0; h <= q.degree; ++h) packed.at(i * ell + j, h) = q.at(j, h);
        spec.polys.push_back(std::move(packed));

        BracketMap bm = BracketMap::uniform(BracketKind::Floor, packed_rank);
        for (int j = 0; j < ell; ++j) bm.kinds[static_cast<std::size_t>(i * ell + j)] = brackets[static_cast<std::size_t>(i)].kinds[static_cast<std::size_t>(j)];
        spec.brackets.push_back(std::move(bm));
    }
    return spec;
}

cplx multicorrelation_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions,
                                std::span<const Observable> functions,
                                std::span<const VectorPolynomial> polys,
                                std::span<const BracketMap> brackets, i64 n,
                                const IntegrationChoice& integration) {
    return multicorrelation(pack_commuting(actions, functions, polys, brackets, integration), n);
}

CorrelationSequence::CorrelationSequence(CorrelationSpec spec, bool memoize) : spec_(std::move(spec)), memoize_(memoize) {
    spec_.validate();
}

cplx CorrelationSequence::operator()(i64 n) const {
    if (memoize_) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
    }
    cplx v = spec_.is_lattice() ? multicorrelation(spec_, n) : multicorrelation_flow(spec_, n);
    if (memoize_) {
        std::lock_guard<std::mutex> lock(mu_);
        memo_[n] = v;  // last write wins; values are deterministic
    }
    return v;
}

}  // namespace nilcorr
