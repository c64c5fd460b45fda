#pragma once

// The correlation engine: alpha(n) for lattice actions with bracketed
// polynomial iterates, the flow analogue without brackets, and the packed
// Z^{ell*m} route for commuting actions.

#include <map>
#include <mutex>
#include <optional>

#include "nilcorr/observables.hpp"

namespace nilcorr {

struct CorrelationSpec {
    std::shared_ptr<const LatticeAction> action;  // lattice case
    std::shared_ptr<const FlowFamily> flows;      // flow case (exactly one of the two)
    std::vector<Observable> functions;            // f0..fm
    std::vector<VectorPolynomial> polys;          // q1..qm
    std::vector<BracketMap> brackets;             // lattice case, one map per i
    IntegrationChoice integration = IntegrationChoice::exact_path();

    int m() const { return static_cast<int>(polys.size()); }
    bool is_lattice() const { return action != nullptr; }
    void validate() const;
};

// Bracketed iterate exponents floor(q_i(n)) etc., 128-bit, overflow-checked.
std::vector<i128> iterate_exponents(const CorrelationSpec& spec, int i, i64 n);

// Lattice-spec integral at explicit iterate exponents (shared with the
// suspension module's piecewise fiber integration).
cplx correlation_at_exponents(const CorrelationSpec& spec, const std::vector<std::vector<i128>>& exponents);

// integral of f0 . prod_i f_i(T^{[q_i(n)]} x); exact character path when the
// action is a torus translation and all observables are trigonometric.
cplx multicorrelation(const CorrelationSpec& spec, i64 n);

// Flow analogue: iterates applied at real times q_i(n), no brackets.
cplx multicorrelation_flow(const CorrelationSpec& spec, i64 n);

// Commuting actions T_1..T_m packed into one Z^{ell*m}-action; the packed
// spec delegates to multicorrelation.  Spot-checks commutation first.
cplx multicorrelation_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions,
                                std::span<const Observable> functions,
                                std::span<const VectorPolynomial> polys,
                                std::span<const BracketMap> brackets, i64 n,
                                const IntegrationChoice& integration);

// Builds the packed spec explicitly (tested against direct evaluation).
CorrelationSpec pack_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions,
                               std::span<const Observable> functions,
                               std::span<const VectorPolynomial> polys,
                               std::span<const BracketMap> brackets,
                               const IntegrationChoice& integration);

// Lazily evaluated alpha with optional window memoization; safe for
// concurrent evaluation (distinct keys insert under a lock, equal keys are
// benign because values are deterministic).
class CorrelationSequence {
  public:
    explicit CorrelationSequence(CorrelationSpec spec, bool memoize = true);
    cplx operator()(i64 n) const;
    const CorrelationSpec& spec() const { return spec_; }

  private:
    CorrelationSpec spec_;
    bool memoize_;
    mutable std::mutex mu_;
    mutable std::map<i64, cplx> memo_;
};

// Pulls a trig observable back along a torus translation by v:
// each term's amplitude picks up e(freq . v).
TrigObservable pullback_by_shift(const TrigObservable& f, std::span<const Frac128> v);

}  // namespace nilcorr
