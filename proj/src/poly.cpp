#include "nilcorr/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace nilcorr {

namespace {

i64 checked_mul64(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow_fail("64-bit integer overflow");
    return r;
}

i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::string format_rational(i64 num, i64 den) {
    std::string s = std::to_string(num);
    if (den != 1) s += "/" + std::to_string(den);
    return s;
}

std::string format_double_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Coefficient Coefficient::rational(i64 num, i64 den) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i64 g = gcd64(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Coefficient c;
    c.tag = CoeffTag::ExactRational;
    c.num = num;
    c.den = den;
    c.value = static_cast<double>(num) / static_cast<double>(den);
    c.rep = Real128::from_rational(num, den);
    return c;
}

Coefficient Coefficient::irrational(std::string name, Real128 rep) {
    Coefficient c;
    c.tag = CoeffTag::IrrationalSymbolic;
    c.name = std::move(name);
    c.rep = rep;
    c.value = rep.to_double();
    return c;
}

Coefficient Coefficient::sqrt_scaled(i64 rad_num, i64 rad_den, i64 num, i64 den) {
    if (rad_num < 0 || rad_den <= 0) throw std::domain_error("sqrt of a negative rational");
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i64 g = gcd64(rad_num, rad_den);
    rad_num /= g;
    rad_den /= g;
    // (num/den) sqrt(a/b) = (num/(den*b)) sqrt(a*b): integer radicand
    i64 k = checked_mul64(rad_num, rad_den);
    den = checked_mul64(den, rad_den);
    g = gcd64(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    u64 root = isqrt_u64(static_cast<u64>(k));
    if (static_cast<i64>(root * root) == k)  // perfect square folds to a rational
        return rational(checked_mul64(num, static_cast<i64>(root)), den);
    if (num == 0) return rational(0, 1);
    Real128 rep = Real128::sqrt_rational(k, 1).mul_int(num).div_uint(static_cast<u64>(den));
    std::string name;
    if (!(num == 1 && den == 1)) name = format_rational(num, den) + "*";
    name += "sqrt(" + std::to_string(k) + ")";
    return irrational(std::move(name), rep);
}

Coefficient Coefficient::pi_scaled(i64 num, i64 den) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i64 g = gcd64(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) return rational(0, 1);
    Real128 rep = Real128::pi().mul_int(num).div_uint(static_cast<u64>(den));
    std::string name;
    if (!(num == 1 && den == 1)) name = format_rational(num, den) + "*";
    name += "pi";
    return irrational(std::move(name), rep);
}

Coefficient Coefficient::real(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite input");
    Coefficient c;
    c.tag = CoeffTag::GenericReal;
    c.value = v;
    c.rep = Real128::from_double(v);
    return c;
}

bool Coefficient::operator==(const Coefficient& o) const {
    if (tag != o.tag) return false;
    switch (tag) {
        case CoeffTag::ExactRational: return num == o.num && den == o.den;
        case CoeffTag::IrrationalSymbolic: return name == o.name && rep == o.rep;
        case CoeffTag::GenericReal: return value == o.value;
    }
    return false;
}

std::string format_coefficient(const Coefficient& c) {
    switch (c.tag) {
        case CoeffTag::ExactRational: return format_rational(c.num, c.den);
        case CoeffTag::IrrationalSymbolic: return c.name;
        case CoeffTag::GenericReal: return format_double_exact(c.value);
    }
    return {};
}

// ---- literal parsing -----------------------------------------------------

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument(msg + " at position " + std::to_string(pos) + " in '" + std::string(text) + "'");
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool at_end() { return peek() == '\0'; }

    // number: returns true if decimal (has . or exponent)
    bool lex_number(i64* ival, double* dval) {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        bool dec = false;
        if (pos < text.size() && text[pos] == '.') {
            dec = true;
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            dec = true;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        std::string_view tok = text.substr(start, pos - start);
        if (tok.empty()) fail("expected a number");
        if (dec) {
            *dval = std::strtod(std::string(tok).c_str(), nullptr);
        } else {
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *ival);
            if (ec != std::errc{}) fail("integer literal out of range");
        }
        return dec;
    }

    std::string lex_ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

// One multiplicative factor chain: rational part, optional irrational base,
// optional decimal contamination, and the power of x.
struct TermAcc {
    i64 rnum = 1, rden = 1;
    enum class Irr { None, Sqrt, Pi } irr = Irr::None;
    i64 sq = 1;  // integer radicand when irr == Sqrt
    bool generic = false;
    double gvalue = 1.0;
    int xpow = 0;

    void mul_rational(i64 p, i64 q) {
        if (q == 0) throw std::domain_error("division by zero");
        rnum = checked_mul64(rnum, p);
        rden = checked_mul64(rden, q);
        i64 g = gcd64(rnum < 0 ? -rnum : rnum, rden < 0 ? -rden : rden);
        if (g > 1) {
            rnum /= g;
            rden /= g;
        }
    }

    Coefficient finish() const {
        if (generic) {
            double v = gvalue * static_cast<double>(rnum) / static_cast<double>(rden);
            if (irr == Irr::Sqrt) v *= std::sqrt(static_cast<double>(sq));
            if (irr == Irr::Pi) v *= 4.0 * std::atan(1.0);
            return Coefficient::real(v);
        }
        switch (irr) {
            case Irr::None: return Coefficient::rational(rnum, rden);
            case Irr::Sqrt: return Coefficient::sqrt_scaled(sq, 1, rnum, rden);
            case Irr::Pi: return Coefficient::pi_scaled(rnum, rden);
        }
        return Coefficient::rational(0, 1);
    }
};

// factor := INT | DECIMAL | 'sqrt' '(' INT ['/' INT] ')' | 'pi' | 'x' ['^' INT]
void parse_factor(Lexer& lx, TermAcc& acc, bool dividing) {
    char c = lx.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
        i64 iv = 0;
        double dv = 0;
        if (lx.lex_number(&iv, &dv)) {
            if (dividing && dv == 0.0) lx.fail("division by zero");
            acc.generic = true;
            acc.gvalue = dividing ? acc.gvalue / dv : acc.gvalue * dv;
        } else {
            if (dividing)
                acc.mul_rational(1, iv);
            else
                acc.mul_rational(iv, 1);
        }
        return;
    }
    std::string ident = lx.lex_ident();
    if (ident.empty()) lx.fail("expected a factor");
    if (dividing && ident != "") {
        if (ident == "sqrt" || ident == "pi" || ident == "x") lx.fail("division by '" + ident + "' is not supported");
    }
    if (ident == "sqrt") {
        if (!lx.eat('(')) lx.fail("expected '(' after sqrt");
        i64 a = 0, b = 1;
        double dummy = 0;
        if (lx.lex_number(&a, &dummy)) lx.fail("sqrt radicand must be an integer or rational");
        if (lx.eat('/')) {
            if (lx.lex_number(&b, &dummy)) lx.fail("sqrt radicand must be an integer or rational");
        }
        if (!lx.eat(')')) lx.fail("expected ')'");
        if (a < 0 || b <= 0) lx.fail("sqrt of a negative rational");
        i64 g = gcd64(a, b);
        a /= g;
        b /= g;
        i64 k = checked_mul64(a, b);  // sqrt(a/b) = sqrt(ab)/b
        acc.mul_rational(1, b);
        if (acc.irr == TermAcc::Irr::Sqrt) {
            // sqrt(j)*sqrt(k) folds when jk is a perfect square
            i64 jk = checked_mul64(acc.sq, k);
            u64 root = isqrt_u64(static_cast<u64>(jk));
            if (static_cast<i64>(root * root) == jk) {
                acc.irr = TermAcc::Irr::None;
                acc.sq = 1;
                acc.mul_rational(static_cast<i64>(root), 1);
            } else {
                acc.sq = jk;
            }
        } else if (acc.irr == TermAcc::Irr::Pi) {
            lx.fail("unsupported product of irrational factors");
        } else {
            u64 root = isqrt_u64(static_cast<u64>(k));
            if (static_cast<i64>(root * root) == k) {
                acc.mul_rational(static_cast<i64>(root), 1);
            } else {
                acc.irr = TermAcc::Irr::Sqrt;
                acc.sq = k;
            }
        }
    } else if (ident == "pi") {
        if (acc.irr != TermAcc::Irr::None) lx.fail("unsupported product of irrational factors");
        acc.irr = TermAcc::Irr::Pi;
    } else if (ident == "x") {
        int h = 1;
        if (lx.eat('^')) {
            i64 e = 0;
            double dummy = 0;
            if (lx.lex_number(&e, &dummy)) lx.fail("exponent must be an integer");
            if (e < 0 || e > 64) lx.fail("exponent out of range");
            h = static_cast<int>(e);
        }
        acc.xpow += h;
    } else {
        lx.fail("unknown symbol '" + ident + "'");
    }
}

// term := factor (('*'|'/') factor)*
TermAcc parse_term(Lexer& lx, int sign) {
    TermAcc acc;
    acc.rnum = sign;
    parse_factor(lx, acc, false);
    for (;;) {
        if (lx.eat('*')) {
            parse_factor(lx, acc, false);
        } else if (lx.eat('/')) {
            parse_factor(lx, acc, true);
        } else {
            break;
        }
    }
    return acc;
}

Coefficient add_coefficients(const Coefficient& a, const Coefficient& b, Lexer& lx) {
    if (a.tag == CoeffTag::ExactRational && a.num == 0) return b;
    if (b.tag == CoeffTag::ExactRational && b.num == 0) return a;
    if (a.tag == CoeffTag::GenericReal || b.tag == CoeffTag::GenericReal)
        return Coefficient::real(a.value + b.value);
    if (a.tag == CoeffTag::ExactRational && b.tag == CoeffTag::ExactRational) {
        i64 den = checked_mul64(a.den, b.den);
        i64 num = checked_mul64(a.num, b.den) + checked_mul64(b.num, a.den);
        return Coefficient::rational(num, den);
    }
    lx.fail("cannot combine rational and irrational parts in one coefficient");
}

}  // namespace

Coefficient parse_coefficient(std::string_view text) {
    Lexer lx{text};
    int sign = 1;
    if (lx.eat('-'))
        sign = -1;
    else
        lx.eat('+');
    TermAcc acc = parse_term(lx, sign);
    if (!lx.at_end()) lx.fail("trailing input in coefficient literal");
    if (acc.xpow != 0) lx.fail("variable not allowed in a coefficient literal");
    return acc.finish();
}

VectorPolynomial parse_polynomial(std::string_view text) {
    std::vector<std::vector<std::pair<int, Coefficient>>> coords;
    std::size_t start = 0;
    std::vector<std::string_view> parts;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ';') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    int degree = 0;
    for (std::string_view part : parts) {
        Lexer lx{part};
        std::vector<std::pair<int, Coefficient>> terms;
        int sign = 1;
        if (lx.eat('-'))
            sign = -1;
        else
            lx.eat('+');
        for (;;) {
            TermAcc acc = parse_term(lx, sign);
            bool merged = false;
            for (auto& [h, c] : terms) {
                if (h == acc.xpow) {
                    c = add_coefficients(c, acc.finish(), lx);
                    merged = true;
                    break;
                }
            }
            if (!merged) terms.emplace_back(acc.xpow, acc.finish());
            degree = std::max(degree, acc.xpow);
            if (lx.eat('+')) {
                sign = 1;
            } else if (lx.eat('-')) {
                sign = -1;
            } else if (lx.at_end()) {
                break;
            } else {
                lx.fail("expected '+', '-' or end of coordinate");
            }
        }
        coords.push_back(std::move(terms));
    }
    VectorPolynomial q = VectorPolynomial::zero(static_cast<int>(coords.size()), degree);
    for (std::size_t j = 0; j < coords.size(); ++j)
        for (auto& [h, c] : coords[j]) q.at(static_cast<int>(j), h) = c;
    return q;
}

namespace {

bool coefficient_is_negative(const Coefficient& c) { return c.value < 0 || (c.value == 0 && std::signbit(c.value)); }

Coefficient coefficient_abs(const Coefficient& c) {
    if (!coefficient_is_negative(c)) return c;
    switch (c.tag) {
        case CoeffTag::ExactRational: return Coefficient::rational(-c.num, c.den);
        case CoeffTag::GenericReal: return Coefficient::real(-c.value);
        case CoeffTag::IrrationalSymbolic: {
            std::string name = c.name;
            if (!name.empty() && name[0] == '-') name.erase(0, 1);
            return Coefficient::irrational(std::move(name), c.rep.negated());
        }
    }
    return c;
}

bool coefficient_is_zero(const Coefficient& c) {
    return c.tag == CoeffTag::ExactRational ? c.num == 0 : c.value == 0.0;
}

bool coefficient_is_one(const Coefficient& c) { return c.tag == CoeffTag::ExactRational && c.num == 1 && c.den == 1; }

}  // namespace

std::string format_polynomial(const VectorPolynomial& q) {
    std::string out;
    for (int j = 0; j < q.ell; ++j) {
        if (j) out += "; ";
        bool first = true;
        for (int h = q.degree; h >= 0; --h) {
            const Coefficient& c = q.at(j, h);
            if (coefficient_is_zero(c)) continue;
            bool neg = coefficient_is_negative(c);
            if (first) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            first = false;
            Coefficient a = coefficient_abs(c);
            if (h == 0) {
                out += format_coefficient(a);
            } else {
                if (!coefficient_is_one(a)) {
                    out += format_coefficient(a);
                    out += "*";
                }
                out += h == 1 ? "x" : "x^" + std::to_string(h);
            }
        }
        if (first) out += "0";
    }
    return out;
}

// ---- VectorPolynomial ----------------------------------------------------

VectorPolynomial VectorPolynomial::zero(int ell, int degree) {
    if (ell < 1 || degree < 0) throw std::domain_error("invalid polynomial shape");
    VectorPolynomial q;
    q.ell = ell;
    q.degree = degree;
    q.coeffs.assign(static_cast<std::size_t>(ell) * (degree + 1), Coefficient::rational(0, 1));
    return q;
}

VectorPolynomial VectorPolynomial::scalar(std::vector<Coefficient> by_power) {
    if (by_power.empty()) throw std::domain_error("empty coefficient list");
    VectorPolynomial q;
    q.ell = 1;
    q.degree = static_cast<int>(by_power.size()) - 1;
    q.coeffs = std::move(by_power);
    return q;
}

void VectorPolynomial::validate() const {
    if (ell < 1 || degree < 0) throw std::domain_error("invalid polynomial shape");
    if (coeffs.size() != static_cast<std::size_t>(ell) * (degree + 1))
        throw std::domain_error("coefficient table does not match ell and degree");
}

// ---- double-path operations ----------------------------------------------

std::vector<double> eval_poly(const VectorPolynomial& q, double t, bool* hazard) {
    q.validate();
    std::vector<double> out(static_cast<std::size_t>(q.ell));
    bool hz = false;
    for (int j = 0; j < q.ell; ++j) {
        double acc = q.at(j, q.degree).value;
        for (int h = q.degree - 1; h >= 0; --h) acc = acc * t + q.at(j, h).value;
        out[static_cast<std::size_t>(j)] = acc;
        if (std::abs(acc - std::round(acc)) < kNearIntegerHazard) hz = true;
    }
    if (hazard) *hazard = hz;
    return out;
}

std::vector<i64> bracket(std::span<const double> x, const BracketMap& b) {
    if (b.kinds.size() != x.size()) throw std::domain_error("bracket map dimension mismatch");
    std::vector<i64> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = x[i];
        if (!std::isfinite(v)) throw std::domain_error("non-finite input");
        double f = 0;
        switch (b.kinds[i]) {
            case BracketKind::Floor: f = std::floor(v); break;
            case BracketKind::Ceil: f = -std::floor(-v); break;
            case BracketKind::Nearest: f = std::floor(v + 0.5); break;
        }
        if (std::abs(f) >= 0x1p62) overflow_fail("bracket value out of 64-bit range");
        out[i] = static_cast<i64>(f);
    }
    return out;
}

double fractional(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite input");
    double r = x - std::floor(x);
    if (r >= 1.0) r = std::nextafter(1.0, 0.0);  // {−eps} rounds up to 1
    if (r < 0.0) r = 0.0;
    return r;
}

std::vector<double> fractional(std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = fractional(x[i]);
    return out;
}

BracketKind parse_bracket_kind(std::string_view name) {
    if (name == "floor") return BracketKind::Floor;
    if (name == "ceil") return BracketKind::Ceil;
    if (name == "nearest") return BracketKind::Nearest;
    throw std::invalid_argument("unknown bracket kind '" + std::string(name) + "'");
}

std::string_view bracket_kind_name(BracketKind k) {
    switch (k) {
        case BracketKind::Floor: return "floor";
        case BracketKind::Ceil: return "ceil";
        case BracketKind::Nearest: return "nearest";
    }
    return "?";
}

// ---- rationality classification -------------------------------------------

RationalityVerdict classify_rational(const VectorPolynomial& q, int coordinate) {
    q.validate();
    if (coordinate < 0 || coordinate >= q.ell) throw std::domain_error("coordinate out of range");
    bool any_irrational = false, any_generic = false;
    i64 lcm = 1;
    for (int h = 1; h <= q.degree; ++h) {
        const Coefficient& c = q.at(coordinate, h);
        switch (c.tag) {
            case CoeffTag::ExactRational:
                lcm = checked_mul64(lcm / gcd64(lcm, c.den), c.den);
                break;
            case CoeffTag::IrrationalSymbolic: any_irrational = true; break;
            case CoeffTag::GenericReal: any_generic = true; break;
        }
    }
    if (any_irrational) return {RationalityKind::HasIrrationalNonconstant, 0};
    if (any_generic) return {RationalityKind::Indeterminate, 0};
    return {RationalityKind::RationalModConstant, lcm};
}

// ---- exact evaluation at integer arguments ---------------------------------

namespace {

void add_rational_channel(PolyValue& v, i128 num, i64 den) {
    i64 g = gcd64(v.rat_den, den);
    i64 lcm = checked_mul64(v.rat_den / g, den);
    i128 n1 = checked_mul(v.rat_num, lcm / v.rat_den);
    i128 n2 = checked_mul(num, lcm / den);
    i128 total = checked_add(n1, n2);
    i128 carry = floor_div(total, lcm);
    v.int_part = checked_add(v.int_part, carry);
    total -= carry * lcm;
    i128 g2 = gcd128(total, lcm);
    if (g2 > 1) {
        total /= g2;
        lcm = static_cast<i64>(lcm / g2);
    }
    v.rat_num = total;
    v.rat_den = lcm;
}

void add_fixed_channel(PolyValue& v, const Real128& term) {
    v.int_part = checked_add(v.int_part, term.ip);
    unsigned carry = v.fix.add_carry(term.fr);
    if (carry) v.int_part = checked_add(v.int_part, carry);
    v.pure_rational = false;
}

// Folds the rational channel into the fixed channel (one 2^-128 truncation);
// afterwards exactly one fractional channel is active.
void finalize_channels(PolyValue& v) {
    if (v.pure_rational || v.rat_num == 0) return;
    Real128 r = Real128::from_rational(v.rat_num, v.rat_den);
    v.rat_num = 0;
    v.rat_den = 1;
    add_fixed_channel(v, r);
}

}  // namespace

Frac128 PolyValue::frac_fixed() const {
    if (pure_rational) return Real128::from_rational(rat_num, rat_den).fr;
    return fix;
}

bool PolyValue::near_integer(double tol) const {
    double f = frac();
    return f < tol || 1.0 - f < tol;
}

PolyValue PolyValue::negated() const {
    PolyValue r;
    r.pure_rational = pure_rational;
    r.from_generic = from_generic;
    r.int_part = checked_mul(int_part, -1);
    if (pure_rational) {
        if (rat_num != 0) {
            r.int_part = checked_add(r.int_part, -1);
            r.rat_num = rat_den - rat_num;
            r.rat_den = rat_den;
        }
    } else if (!fix.is_zero()) {
        r.int_part = checked_add(r.int_part, -1);
        r.fix = fix.negated();
    }
    return r;
}

PolyValue PolyValue::add_rational(i64 num, i64 den) const {
    PolyValue r = *this;
    if (pure_rational) {
        add_rational_channel(r, num, den);
    } else {
        Real128 t = Real128::from_rational(num, den);
        add_fixed_channel(r, t);
    }
    return r;
}

Real128 PolyValue::to_real128() const { return {int_part, frac_fixed()}; }

void PolyValue::accumulate(const Coefficient& c, i128 multiplier) {
    if (multiplier == 0) return;
    switch (c.tag) {
        case CoeffTag::ExactRational:
            if (c.num != 0) add_rational_channel(*this, checked_mul(c.num, multiplier), c.den);
            break;
        case CoeffTag::IrrationalSymbolic: add_fixed_channel(*this, c.rep.mul_int(multiplier)); break;
        case CoeffTag::GenericReal:
            if (c.value != 0.0) {
                add_fixed_channel(*this, c.rep.mul_int(multiplier));
                from_generic = true;
            }
            break;
    }
}

void PolyValue::normalize() { finalize_channels(*this); }

PolyValue eval_coordinate_at_integer(const VectorPolynomial& q, int coordinate, i128 n) {
    q.validate();
    if (coordinate < 0 || coordinate >= q.ell) throw std::domain_error("coordinate out of range");
    PolyValue v;
    i128 pw = 1;
    for (int h = 0; h <= q.degree; ++h) {
        v.accumulate(q.at(coordinate, h), pw);
        if (h < q.degree) pw = checked_mul(pw, n);
    }
    v.normalize();
    return v;
}

std::vector<PolyValue> eval_at_integer(const VectorPolynomial& q, i128 n) {
    std::vector<PolyValue> out;
    out.reserve(static_cast<std::size_t>(q.ell));
    for (int j = 0; j < q.ell; ++j) out.push_back(eval_coordinate_at_integer(q, j, n));
    return out;
}

i128 bracket_value(const PolyValue& v, BracketKind k) {
    switch (k) {
        case BracketKind::Floor: return v.floor();
        case BracketKind::Nearest: return v.add_rational(1, 2).floor();
        case BracketKind::Ceil: return checked_mul(v.negated().floor(), -1);
    }
    return 0;
}

std::vector<i128> bracket_at_integer(const VectorPolynomial& q, const BracketMap& b, i128 n) {
    if (static_cast<int>(b.kinds.size()) != q.ell) throw std::domain_error("bracket map dimension mismatch");
    std::vector<i128> out(static_cast<std::size_t>(q.ell));
    for (int j = 0; j < q.ell; ++j)
        out[static_cast<std::size_t>(j)] = bracket_value(eval_coordinate_at_integer(q, j, n), b.kinds[static_cast<std::size_t>(j)]);
    return out;
}

}  // namespace nilcorr
