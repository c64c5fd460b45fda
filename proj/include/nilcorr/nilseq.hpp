#pragma once

// Nilsequence evaluation psi(n) = F(g^n x) on torus and Heisenberg
// nilmanifolds, the closed form of the guiding rotation example, and
// constructive mollified approximants for Riemann-integrable F on
// rotations.

#include "nilcorr/averaging.hpp"
#include "nilcorr/correlate.hpp"

namespace nilcorr {

struct TorusNilData {
    std::vector<Coefficient> g;  // translation per coordinate, evaluated in fixed point
    TorusPoint x;
};

struct HeisNilData {
    HeisenbergElement g;
    NilPoint x;
};

struct Nilsequence {
    std::variant<TorusNilData, HeisNilData> data;
    Observable F;
    int step = 1;  // declared nilpotency step (metadata, not derived)

    void validate() const;
};

cplx nilsequence_eval(const Nilsequence& psi, i64 n);
Sequence nilsequence_fn(const Nilsequence& psi);

// ---- the rotation example ------------------------------------------------

// alpha(n) = e((1/sqrt(2)) {sqrt(2) n}) with {sqrt(2) n} in fixed point.
cplx example_alpha(i64 n);

// The example's observable F(x) = e({x}/sqrt(2)) and the correlation spec
// (T x = x + 1/sqrt(2), q(n) = sqrt(2) n, f0 = e(x), f1 = e(-x)) that
// realizes it as F(T^n 0).
struct ExampleSpec {
    CorrelationSpec correlation;
    Nilsequence closed_form;  // 1-step, exact F
};
ExampleSpec example_spec();

// ---- mollification ---------------------------------------------------------

// A 1-d torus function with a declared (finite) discontinuity set.
struct TorusFunction {
    std::function<cplx(double)> eval;  // argument in [0,1)
    std::vector<double> discontinuities;
    double sup_bound = 1.0;
};

// Continuous replacement equal to F off w-neighborhoods of its declared
// discontinuities, linearly interpolated inside.  Requires 0 < w < half
// the minimal circular gap between discontinuities.
TorusFunction mollify(const TorusFunction& F, double w);

Observable wrap_torus_function(const TorusFunction& F);

// Constructive approximant for the example: psi_w(n) = F_w({n sqrt(2)})
// with w = epsilon/4, so the error sets have density ~2w and the error
// functionals stay at most epsilon.
Nilsequence example_nil_approx(double epsilon);

}  // namespace nilcorr
