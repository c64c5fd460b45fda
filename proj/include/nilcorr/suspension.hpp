#pragma once

// The two constructions behind the main approximation argument:
//  (a) the multidimensional suspension flow with constant ceiling 1, its
//      lifted observables, alpha~, and the exceptional-set bookkeeping;
//  (b) the flow -> Z^{d+1}-lattice reduction S^{q(n)} = T^{(1,n,...,n^d)}.

#include "nilcorr/correlate.hpp"

namespace nilcorr {

// m commuting R^ell-flows on X x [0,1)^{m*ell}:
//   S_i^t (x; b) = (T^{floor(b_i+t)} x; ..., {b_i+t}, ...)
class SuspensionFlows : public FlowFamily {
  public:
    SuspensionFlows(std::shared_ptr<const LatticeAction> base, int m);

    int rank() const override { return base_->rank(); }
    int count() const override { return m_; }
    const Space& space() const override { return space_; }
    Point apply(int i, std::span<const Real128> t, const Point& x) const override;

    const LatticeAction& base() const { return *base_; }

  private:
    std::shared_ptr<const LatticeAction> base_;
    int m_;
    Space space_;
};

std::shared_ptr<SuspensionFlows> build_suspension(std::shared_ptr<const LatticeAction> X, int m);

// f0^ = 1_{X x [0,delta]^{m*ell}} . (f0 o pi), fi^ = fi o pi.
struct LiftedObservables {
    double delta = 0;
    Observable f0_lifted;
    std::vector<Observable> fi_lifted;
};

LiftedObservables lift_observables(std::span<const Observable> functions, double delta, const Space& suspension_space);

// The lifted correlation spec on the suspension of the given lattice spec.
CorrelationSpec suspension_spec(const CorrelationSpec& lattice_spec, double delta, int quad_points = 64);

// alpha~(n) = ∫_{[0,delta]^{lm}} ∫_X f0 . prod f_i(T^{floor(q_i(n)+b_i)} x) dmu dlambda.
// On the character path the fiber integral is computed exactly by interval
// splitting at the break points 1-{q_{i,j}(n)}; boundaries go to the left
// cell.  Falls back to the lifted flow spec with quadrature otherwise.
cplx alpha_tilde(const CorrelationSpec& lattice_spec, double delta, i64 n);

// The displayed exceptional set: some i has ALL ell coordinates of {q_i(n)}
// in [1-delta, 1).
bool exceptional(std::span<const VectorPolynomial> qs, double delta, i64 n);

// Sufficient condition for alpha(n) = delta^{-lm} alpha~(n): every
// coordinate of every {q_i(n)} lies in [0, 1-delta).  For ell = 1 its
// negation coincides with the exceptional set above.
bool floor_stable(std::span<const VectorPolynomial> qs, double delta, i64 n);

// delta-selection harness: achieved identity error over a window for a
// geometric grid delta in {2^-1, ..., 2^-kmax}.
struct DeltaScanRow {
    double delta;
    double max_error;        // max over the window of |alpha - delta^{-lm} alpha~|
    double mean_error;       // Cesaro average of the same
    double exceptional_fraction;
};
std::vector<DeltaScanRow> delta_scan(const CorrelationSpec& lattice_spec, i64 M, i64 N, int kmax = 10);

// ---- flow -> lattice reduction ------------------------------------------------

// Z^{d+1}-action with generators T_h = prod_j S_i^{a_{j,h} e_j} and
// T^{(n_0..n_d)} = prod_h T_h^{n_h}; satisfies T^{q_vec(n)} = S_i^{q(n)}.
class LatticeReduction : public LatticeAction {
  public:
    LatticeReduction(std::shared_ptr<const FlowFamily> S, int flow_index, VectorPolynomial q);

    int rank() const override { return q_.degree + 1; }
    const Space& space() const override { return S_->space(); }
    Point apply(std::span<const i128> n, const Point& x) const override;
    std::optional<std::vector<Frac128>> translation_shift(std::span<const i128> n) const override;

    const VectorPolynomial& poly() const { return q_; }

  private:
    std::shared_ptr<const FlowFamily> S_;
    int flow_index_;
    VectorPolynomial q_;
};

LatticeReduction flow_to_lattice(std::shared_ptr<const FlowFamily> S, int flow_index, const VectorPolynomial& q);

// (1, n, n^2, ..., n^d), overflow-checked.
std::vector<i128> q_vec(i64 n, int degree);

}  // namespace nilcorr
