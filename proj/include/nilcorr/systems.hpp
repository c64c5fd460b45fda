#pragma once

// Concrete point spaces and measure-preserving Z^ell-actions and R^ell-flows:
// torus rotations/flows with tagged angles (exact shifts through Real128) and
// the Heisenberg nilmanifold in Mal'cev coordinates.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "nilcorr/poly.hpp"

namespace nilcorr {

// ---- spaces ---------------------------------------------------------------

struct Space {
    enum class Kind { Torus, Heisenberg, Suspension };
    Kind kind = Kind::Torus;
    int dim = 1;                        // torus: D; Heisenberg: 3; suspension: base dim + fibers
    std::shared_ptr<const Space> base;  // suspension only
    int fiber_dim = 0;                  // suspension only (m * ell)

    static Space torus(int d) { return {Kind::Torus, d, nullptr, 0}; }
    static Space heisenberg() { return {Kind::Heisenberg, 3, nullptr, 0}; }
    static Space suspension(const Space& base_space, int fibers);

    bool operator==(const Space& o) const;
    bool operator!=(const Space& o) const { return !(*this == o); }
};

// ---- points ----------------------------------------------------------------

struct TorusPoint {
    std::vector<double> coords;  // each in [0,1)
    bool operator==(const TorusPoint&) const = default;
};

struct HeisenbergElement {
    double x = 0, y = 0, z = 0;
    bool operator==(const HeisenbergElement&) const = default;
};

struct NilPoint {
    HeisenbergElement rep;  // canonical coset representative, coordinates in [0,1)
    bool operator==(const NilPoint&) const = default;
};

struct SuspensionPoint {
    std::variant<TorusPoint, NilPoint> base;
    std::vector<double> fibers;  // m*ell values in [0,1), fiber i at [i*ell, (i+1)*ell)
    bool operator==(const SuspensionPoint&) const = default;
};

using Point = std::variant<TorusPoint, NilPoint, SuspensionPoint>;

// Flattened coordinates in the fundamental domain (used by observables and
// quadrature): torus coords, Mal'cev (x,y,z), base ++ fibers.
void point_coords(const Point& p, std::vector<double>& out);
Point point_from_coords(const Space& s, std::span<const double> coords);
int space_coord_count(const Space& s);

// ---- Heisenberg group -------------------------------------------------------

// (x1,y1,z1)*(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2)
HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b);
HeisenbergElement heis_inverse(const HeisenbergElement& g);
// g^n = (n x, n y, n z + C(n,2) x y) for every integer n.
HeisenbergElement heis_pow(const HeisenbergElement& g, i128 n);
// Canonical representative of g*Gamma: ({x}, {y}, {z - x*floor(y)}).
NilPoint nil_reduce(const HeisenbergElement& g);

// ---- lattice actions ---------------------------------------------------------

class LatticeAction {
  public:
    virtual ~LatticeAction() = default;
    virtual int rank() const = 0;
    virtual const Space& space() const = 0;
    virtual Point apply(std::span<const i128> n, const Point& x) const = 0;
    // Fractional translation vector when T^n is a torus translation (the
    // exact character path needs it); nullopt otherwise.
    virtual std::optional<std::vector<Frac128>> translation_shift(std::span<const i128> n) const { return std::nullopt; }
};

Point apply_lattice(const LatticeAction& T, std::span<const i64> n, const Point& x);
Point apply_lattice(const LatticeAction& T, std::span<const i128> n, const Point& x);

// x -> {x + n^T A} with an ell x D table of tagged angles; shifts are computed
// in fixed point so huge exponents keep their fractional information.
class TorusRotation : public LatticeAction {
  public:
    TorusRotation(int dim, int rank, std::vector<Coefficient> angles);

    int rank() const override { return rank_; }
    const Space& space() const override { return space_; }
    Point apply(std::span<const i128> n, const Point& x) const override;
    std::optional<std::vector<Frac128>> translation_shift(std::span<const i128> n) const override { return shift(n); }

    const Coefficient& angle(int k, int c) const { return angles_[static_cast<std::size_t>(k) * dim_ + c]; }
    // Fractional shift vector of T^n, one Frac128 per space coordinate.
    std::vector<Frac128> shift(std::span<const i128> n) const;

  private:
    int dim_, rank_;
    std::vector<Coefficient> angles_;
    Space space_;
};

// Rank-1 action x -> reduce(g^n * x) by left translation.
class HeisenbergTranslation : public LatticeAction {
  public:
    explicit HeisenbergTranslation(HeisenbergElement g) : g_(g), space_(Space::heisenberg()) {}

    int rank() const override { return 1; }
    const Space& space() const override { return space_; }
    Point apply(std::span<const i128> n, const Point& x) const override;
    const HeisenbergElement& generator() const { return g_; }

  private:
    HeisenbergElement g_;
    Space space_;
};

// Commuting actions T_1..T_m on one space packed into a single action of
// rank sum(rank_i); exponent blocks are consumed in order.
class PackedAction : public LatticeAction {
  public:
    explicit PackedAction(std::vector<std::shared_ptr<const LatticeAction>> parts);

    int rank() const override { return rank_; }
    const Space& space() const override { return parts_.front()->space(); }
    Point apply(std::span<const i128> n, const Point& x) const override;
    std::optional<std::vector<Frac128>> translation_shift(std::span<const i128> n) const override;
    const std::vector<std::shared_ptr<const LatticeAction>>& parts() const { return parts_; }

  private:
    std::vector<std::shared_ptr<const LatticeAction>> parts_;
    int rank_ = 0;
};

// Pointwise commutation spot-check on `samples` random exponent/point pairs;
// throws std::runtime_error("actions do not commute") on failure.
void check_commuting(std::span<const std::shared_ptr<const LatticeAction>> actions, int samples = 100,
                     double tol = 1e-9, u64 seed = 0x5eed);

// Deterministic sample point for a space (test/check plumbing).
Point random_point(const Space& s, u64& state);
u64 splitmix64(u64& state);

// ---- flows -------------------------------------------------------------------

class FlowFamily {
  public:
    virtual ~FlowFamily() = default;
    virtual int rank() const = 0;   // ell
    virtual int count() const = 0;  // m commuting R^ell-actions
    virtual const Space& space() const = 0;
    virtual Point apply(int i, std::span<const Real128> t, const Point& x) const = 0;
    // As for LatticeAction: the translation vector of S_i^t when it is one.
    virtual std::optional<std::vector<Frac128>> translation_shift(int i, std::span<const Real128> t) const { return std::nullopt; }
};

Point apply_flow(const FlowFamily& S, int i, std::span<const double> t, const Point& x);
Point apply_flow(const FlowFamily& S, int i, std::span<const Real128> t, const Point& x);

// m translation flows on a torus: S_i^t x = {x + t^T A_i}.
class TorusFlowFamily : public FlowFamily {
  public:
    TorusFlowFamily(int dim, int rank, std::vector<std::vector<Coefficient>> angle_tables);

    int rank() const override { return rank_; }
    int count() const override { return static_cast<int>(tables_.size()); }
    const Space& space() const override { return space_; }
    Point apply(int i, std::span<const Real128> t, const Point& x) const override;
    std::optional<std::vector<Frac128>> translation_shift(int i, std::span<const Real128> t) const override { return shift(i, t); }
    const Coefficient& angle(int i, int j, int c) const { return tables_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) * dim_ + c]; }
    // Fractional shift of S_i^t per space coordinate.
    std::vector<Frac128> shift(int i, std::span<const Real128> t) const;

  private:
    int dim_, rank_;
    std::vector<std::vector<Coefficient>> tables_;  // per flow: rank x dim
    Space space_;
};

}  // namespace nilcorr
