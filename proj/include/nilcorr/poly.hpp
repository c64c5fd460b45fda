#pragma once

// Real vector polynomials q: R -> R^ell with per-coefficient rationality
// tags, bracket (integer part) maps, and fractional parts.
//
// Rationality is decided from tags only, never from floating values.  At
// integer arguments each coordinate evaluates through three channels:
// an exact rational channel (tagged p/q coefficients), a 128-bit fixed
// point channel (tagged irrational constants and the dyadic values of
// untagged doubles), and an integer channel.  Floors and fractional
// parts out of this path are exact for tagged data and deterministic
// for untagged data.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilcorr/fixed128.hpp"

namespace nilcorr {

enum class CoeffTag { ExactRational, IrrationalSymbolic, GenericReal };

struct Coefficient {
    CoeffTag tag = CoeffTag::ExactRational;
    double value = 0.0;   // double approximation, all tags
    i64 num = 0;          // ExactRational only, reduced
    i64 den = 1;          // ExactRational only, >= 1
    std::string name;     // IrrationalSymbolic display form, e.g. "1/2*sqrt(2)"
    Real128 rep;          // extended-precision value (all tags)

    static Coefficient integer(i64 n) { return rational(n, 1); }
    static Coefficient rational(i64 num, i64 den);
    static Coefficient irrational(std::string name, Real128 rep);
    // (num/den) * sqrt(radicand_num/radicand_den)
    static Coefficient sqrt_scaled(i64 radicand_num, i64 radicand_den, i64 num, i64 den);
    static Coefficient pi_scaled(i64 num, i64 den);
    static Coefficient real(double v);

    bool is_integer() const { return tag == CoeffTag::ExactRational && den == 1; }
    bool operator==(const Coefficient& o) const;
};

// Parses the coefficient literal syntax: `p/q`, `sqrt(k)`, `pi`, decimals,
// and rational multiples/quotients thereof ("1/2*sqrt(2)", "sqrt(2)/2",
// "3*pi").  Throws std::invalid_argument on malformed input.
Coefficient parse_coefficient(std::string_view text);
std::string format_coefficient(const Coefficient& c);

struct VectorPolynomial {
    int ell = 1;     // target dimension, >= 1
    int degree = 0;  // >= 0
    std::vector<Coefficient> coeffs;  // ell rows x (degree+1) columns, row-major

    static VectorPolynomial zero(int ell, int degree);
    static VectorPolynomial scalar(std::vector<Coefficient> by_power);

    const Coefficient& at(int j, int h) const { return coeffs[static_cast<std::size_t>(j) * (degree + 1) + h]; }
    Coefficient& at(int j, int h) { return coeffs[static_cast<std::size_t>(j) * (degree + 1) + h]; }

    void validate() const;
    bool operator==(const VectorPolynomial&) const = default;
};

// Term list syntax per coordinate, coordinates separated by ';':
//   "sqrt(2)*x"  "x^2 + 1/3*x + 1/7"  "0.25*x^3 - pi"
VectorPolynomial parse_polynomial(std::string_view text);
std::string format_polynomial(const VectorPolynomial& q);

enum class BracketKind { Floor, Ceil, Nearest };

struct BracketMap {
    std::vector<BracketKind> kinds;  // one per coordinate

    static BracketMap uniform(BracketKind k, int ell) { return {std::vector<BracketKind>(static_cast<std::size_t>(ell), k)}; }
    bool operator==(const BracketMap&) const = default;
};

BracketKind parse_bracket_kind(std::string_view name);
std::string_view bracket_kind_name(BracketKind k);

// ---- double-path operations -------------------------------------------

inline constexpr double kNearIntegerHazard = 0x1p-40;

// Horner per coordinate on the double values.  If hazard is non-null it is
// set when some coordinate lands within 2^-40 of an integer.
std::vector<double> eval_poly(const VectorPolynomial& q, double t, bool* hazard = nullptr);

// Coordinate-wise integer part; IEEE-faithful, throws on non-finite input.
std::vector<i64> bracket(std::span<const double> x, const BracketMap& b);

// Coordinate-wise x - floor(x), always in [0,1).
std::vector<double> fractional(std::span<const double> x);
double fractional(double x);

// ---- rationality classification ---------------------------------------

enum class RationalityKind { RationalModConstant, HasIrrationalNonconstant, Indeterminate };

struct RationalityVerdict {
    RationalityKind kind = RationalityKind::Indeterminate;
    i64 denominator = 0;  // least common denominator b, RationalModConstant only
};

RationalityVerdict classify_rational(const VectorPolynomial& q, int coordinate);

// ---- exact evaluation at integer arguments ------------------------------

// Value of one coordinate of q at an integer, split into channels.
struct PolyValue {
    i128 int_part = 0;      // exact integer contribution
    i128 rat_num = 0;       // rational fractional channel: rat_num/rat_den in [0,1)
    i64 rat_den = 1;
    Frac128 fix;            // fixed-point fractional channel
    bool pure_rational = true;   // no fixed-point contributions
    bool from_generic = false;   // untagged coefficients participated

    // Combined fractional part as fixed point (rational channel truncated
    // at 2^-128 when mixed; exact when pure_rational).
    Frac128 frac_fixed() const;
    double frac() const { return frac_fixed().to_double(); }
    i128 floor() const { return int_part; }  // channels are kept normalized
    double to_double() const { return i128_to_double(int_part) + frac(); }

    bool near_integer(double tol = kNearIntegerHazard) const;
    bool hazard() const { return from_generic && near_integer(); }

    PolyValue negated() const;
    PolyValue add_rational(i64 num, i64 den) const;
    Real128 to_real128() const;

    // Accumulator surface (also used for torus shifts): adds c * multiplier
    // through the channel matching c's tag.  Call normalize() when done.
    void accumulate(const Coefficient& c, i128 multiplier);
    void normalize();
};

PolyValue eval_coordinate_at_integer(const VectorPolynomial& q, int coordinate, i128 n);
std::vector<PolyValue> eval_at_integer(const VectorPolynomial& q, i128 n);

// Bracketed integer iterate: applies the bracket kind through the exact
// channels (nearest adds 1/2 then floors; ceil negates, floors, negates).
i128 bracket_value(const PolyValue& v, BracketKind k);
std::vector<i128> bracket_at_integer(const VectorPolynomial& q, const BracketMap& b, i128 n);

}  // namespace nilcorr
