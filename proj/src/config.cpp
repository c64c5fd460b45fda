#include "nilcorr/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "nilcorr/poly.hpp"

namespace nilcorr {

bool ConfigValue::operator==(const ConfigValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Int: return i == o.i;
        case Kind::Real: return d == o.d;
        case Kind::String: return s == o.s;
        case Kind::Complex: return z == o.z;
        case Kind::Tuple:
        case Kind::List: return items == o.items;
        case Kind::Range: return lo == o.lo && hi == o.hi;
    }
    return false;
}

const ConfigValue* ConfigBlock::find(std::string_view key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e.value;
    return nullptr;
}

const ConfigBlock* ExperimentConfig::block(std::string_view name) const {
    for (const auto& b : blocks)
        if (b.name == name) return &b;
    return nullptr;
}

const ConfigBlock* ExperimentConfig::experiment() const {
    for (const auto& b : blocks)
        if (b.kind == "experiment") return &b;
    return nullptr;
}

namespace {

struct ConfigLexer {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    std::vector<ParseError>* errors;

    void skip() {
        for (;;) {
            while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n' || text[pos] == ',')) {
                if (text[pos] == '\n') ++line;
                ++pos;
            }
            if (pos < text.size() && text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
    }

    char peek() {
        skip();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void error(int ln, std::string msg) { errors->push_back({ln, std::move(msg)}); }

    std::string ident() {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' || text[pos] == '.' || text[pos] == '-'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

// number := ['-'] digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
bool lex_number(ConfigLexer& lx, i64* iv, double* dv, bool* is_real) {
    lx.skip();
    std::size_t start = lx.pos;
    if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '-' || lx.text[lx.pos] == '+')) ++lx.pos;
    std::size_t digits = lx.pos;
    while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) ++lx.pos;
    if (lx.pos == digits) {
        lx.pos = start;
        return false;
    }
    bool real = false;
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == '.') {
        real = true;
        ++lx.pos;
        while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) ++lx.pos;
    }
    if (lx.pos < lx.text.size() && (lx.text[lx.pos] == 'e' || lx.text[lx.pos] == 'E')) {
        real = true;
        ++lx.pos;
        if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '+' || lx.text[lx.pos] == '-')) ++lx.pos;
        while (lx.pos < lx.text.size() && std::isdigit(static_cast<unsigned char>(lx.text[lx.pos]))) ++lx.pos;
    }
    std::string tok(lx.text.substr(start, lx.pos - start));
    if (!tok.empty() && tok[0] == '+') tok.erase(0, 1);  // from_chars rejects a leading '+'
    *is_real = real;
    if (real)
        *dv = std::strtod(tok.c_str(), nullptr);
    else {
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *iv);
        if (ec != std::errc{}) {
            lx.error(lx.line, "integer literal out of range");
            *iv = 0;
        }
    }
    return true;
}

std::optional<ConfigValue> parse_value(ConfigLexer& lx);

std::optional<ConfigValue> parse_sequence(ConfigLexer& lx, char close, ConfigValue::Kind kind) {
    ConfigValue v;
    v.kind = kind;
    v.line = lx.line;
    while (lx.peek() != close) {
        if (lx.peek() == '\0') {
            lx.error(lx.line, std::string("missing '") + close + "'");
            return std::nullopt;
        }
        auto item = parse_value(lx);
        if (!item) return std::nullopt;
        v.items.push_back(std::move(*item));
    }
    lx.eat(close);
    return v;
}

std::optional<ConfigValue> parse_value(ConfigLexer& lx) {
    int ln = lx.line;
    char c = lx.peek();
    ln = lx.line;
    if (c == '"') {
        ++lx.pos;
        std::size_t start = lx.pos;
        while (lx.pos < lx.text.size() && lx.text[lx.pos] != '"' && lx.text[lx.pos] != '\n') ++lx.pos;
        if (lx.pos >= lx.text.size() || lx.text[lx.pos] != '"') {
            lx.error(ln, "unterminated string");
            return std::nullopt;
        }
        ConfigValue v = ConfigValue::string(std::string(lx.text.substr(start, lx.pos - start)));
        ++lx.pos;
        v.line = ln;
        return v;
    }
    if (c == '(') {
        ++lx.pos;
        return parse_sequence(lx, ')', ConfigValue::Kind::Tuple);
    }
    if (c == '[') {
        ++lx.pos;
        return parse_sequence(lx, ']', ConfigValue::Kind::List);
    }
    i64 iv = 0;
    double dv = 0;
    bool real = false;
    if (!lex_number(lx, &iv, &dv, &real)) {
        lx.error(ln, "expected a value");
        return std::nullopt;
    }
    // range M:N
    if (!real && lx.pos < lx.text.size() && lx.text[lx.pos] == ':') {
        ++lx.pos;
        i64 hi = 0;
        double dummy = 0;
        bool r2 = false;
        if (!lex_number(lx, &hi, &dummy, &r2) || r2) {
            lx.error(ln, "expected an integer after ':'");
            return std::nullopt;
        }
        ConfigValue v;
        v.kind = ConfigValue::Kind::Range;
        v.lo = iv;
        v.hi = hi;
        v.line = ln;
        return v;
    }
    // complex re+im i / re-im i (no spaces inside handled by lexer anyway)
    std::size_t save = lx.pos;
    if (lx.pos < lx.text.size() && (lx.text[lx.pos] == '+' || lx.text[lx.pos] == '-')) {
        i64 iv2 = 0;
        double dv2 = 0;
        bool real2 = false;
        if (lex_number(lx, &iv2, &dv2, &real2) && lx.pos < lx.text.size() && lx.text[lx.pos] == 'i') {
            ++lx.pos;
            ConfigValue v;
            v.kind = ConfigValue::Kind::Complex;
            v.z = {real ? dv : static_cast<double>(iv), real2 ? dv2 : static_cast<double>(iv2)};
            v.line = ln;
            return v;
        }
        lx.pos = save;
    }
    // pure imaginary: 2i
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == 'i') {
        ++lx.pos;
        ConfigValue v;
        v.kind = ConfigValue::Kind::Complex;
        v.z = {0.0, real ? dv : static_cast<double>(iv)};
        v.line = ln;
        return v;
    }
    ConfigValue v = real ? ConfigValue::real(dv) : ConfigValue::integer(iv);
    v.line = ln;
    return v;
}

// ---- schema ---------------------------------------------------------------

struct KeySpec {
    const char* key;
    bool required;
};

const std::map<std::string, std::vector<KeySpec>>& block_schemas() {
    static const std::map<std::string, std::vector<KeySpec>> schemas = {
        {"system.torus", {{"dim", true}, {"rank", true}, {"angles", true}}},
        {"system.heisenberg", {{"g", true}, {"base", true}}},
        {"obs.char", {{"freq", true}, {"amp", true}}},
        {"obs.const", {{"c", true}}},
        {"poly", {{"coords", true}}},
        {"correlation",
         {{"system", true}, {"functions", true}, {"polys", true}, {"brackets", false}, {"integration", false}, {"quad_points", false}}},
        {"nilseq", {{"space", true}, {"g", true}, {"x", true}, {"F", true}, {"step", false}}},
        {"experiment",
         {{"kind", true},
          {"target", false},
          {"alpha", false},
          {"psi", false},
          {"poly", false},
          {"range", false},
          {"cesaro", false},
          {"primes", false},
          {"ap", false},
          {"delta", false},
          {"deltas", false},
          {"epsilon", false},
          {"scan", false},
          {"sweep", false},
          {"out", true}}},
    };
    return schemas;
}

void validate_block_schema(const ConfigBlock& b, std::vector<ParseError>& errors) {
    auto it = block_schemas().find(b.kind);
    if (it == block_schemas().end()) {
        errors.push_back({b.line, "unknown block kind '" + b.kind + "'"});
        return;
    }
    std::set<std::string> seen;
    for (const auto& e : b.entries) {
        bool known = false;
        for (const auto& k : it->second) known = known || e.key == k.key;
        if (!known) errors.push_back({e.line, "unknown key '" + e.key + "' in " + b.kind + " block"});
        if (!seen.insert(e.key).second) errors.push_back({e.line, "duplicate key '" + e.key + "'"});
    }
    for (const auto& k : it->second)
        if (k.required && !b.find(k.key)) errors.push_back({b.line, std::string("missing key '") + k.key + "' in " + b.kind + " block"});
}

void validate_semantics(const ExperimentConfig& cfg, std::vector<ParseError>& errors);

}  // namespace

ParseResult parse_config(std::string_view text) {
    ParseResult result;
    ConfigLexer lx{text, 0, 1, &result.errors};
    ExperimentConfig cfg;
    while (lx.peek() != '\0') {
        ConfigBlock b;
        b.line = lx.line;
        b.kind = lx.ident();
        if (b.kind.empty()) {
            result.errors.push_back({lx.line, "expected a block kind"});
            break;
        }
        b.name = lx.ident();
        if (b.name.empty()) {
            result.errors.push_back({lx.line, "expected a block name after '" + b.kind + "'"});
            break;
        }
        if (!lx.eat('{')) {
            result.errors.push_back({lx.line, "expected '{' after block header"});
            break;
        }
        bool bad = false;
        while (!lx.eat('}')) {
            if (lx.peek() == '\0') {
                result.errors.push_back({b.line, "missing '}' for block '" + b.name + "'"});
                bad = true;
                break;
            }
            ConfigEntry e;
            e.line = lx.line;
            e.key = lx.ident();
            if (e.key.empty() || !lx.eat('=')) {
                result.errors.push_back({lx.line, "expected 'key = value'"});
                bad = true;
                break;
            }
            auto v = parse_value(lx);
            if (!v) {
                bad = true;
                break;
            }
            e.value = std::move(*v);
            b.entries.push_back(std::move(e));
        }
        if (bad) break;
        validate_block_schema(b, result.errors);
        for (const auto& other : cfg.blocks)
            if (other.name == b.name) result.errors.push_back({b.line, "duplicate definition of '" + b.name + "'"});
        cfg.blocks.push_back(std::move(b));
    }
    if (result.errors.empty()) validate_semantics(cfg, result.errors);
    if (result.errors.empty()) result.config = std::move(cfg);
    return result;
}

namespace {

// ---- semantic validation ----------------------------------------------------

void expect_kind(const ConfigBlock& b, const char* key, ConfigValue::Kind kind, const char* what,
                 std::vector<ParseError>& errors) {
    const ConfigValue* v = b.find(key);
    if (v && v->kind != kind) errors.push_back({v->line, std::string("key '") + key + "' must be " + what});
}

bool is_number(const ConfigValue& v) { return v.kind == ConfigValue::Kind::Int || v.kind == ConfigValue::Kind::Real; }

void validate_reference(const ExperimentConfig& cfg, const ConfigBlock& b, const char* key,
                        std::initializer_list<const char*> kinds, std::vector<ParseError>& errors) {
    const ConfigValue* v = b.find(key);
    if (!v) return;
    if (v->kind != ConfigValue::Kind::String) {
        errors.push_back({v->line, std::string("key '") + key + "' must name a block (quoted string)"});
        return;
    }
    const ConfigBlock* target = cfg.block(v->s);
    if (!target) {
        errors.push_back({v->line, "unresolved reference '" + v->s + "'"});
        return;
    }
    bool ok = false;
    for (const char* k : kinds) {
        if (target->kind == k) ok = true;
        // "obs" matches every observable kind
        if (std::string_view(k) == "obs" && target->kind.starts_with("obs.")) ok = true;
    }
    if (!ok) errors.push_back({v->line, "reference '" + v->s + "' has the wrong block kind (" + target->kind + ")"});
}

void validate_coefficient_string(const ConfigValue& v, std::vector<ParseError>& errors) {
    if (v.kind != ConfigValue::Kind::String) {
        errors.push_back({v.line, "expected a coefficient literal string"});
        return;
    }
    try {
        parse_coefficient(v.s);
    } catch (const std::exception& ex) {
        errors.push_back({v.line, ex.what()});
    }
}

void validate_semantics(const ExperimentConfig& cfg, std::vector<ParseError>& errors) {
    int experiments = 0;
    for (const auto& b : cfg.blocks) {
        if (b.kind == "system.torus") {
            expect_kind(b, "dim", ConfigValue::Kind::Int, "an integer", errors);
            expect_kind(b, "rank", ConfigValue::Kind::Int, "an integer", errors);
            const ConfigValue* dim = b.find("dim");
            const ConfigValue* rank = b.find("rank");
            if (dim && dim->kind == ConfigValue::Kind::Int && dim->i < 1) errors.push_back({dim->line, "dim must be at least 1"});
            if (rank && rank->kind == ConfigValue::Kind::Int && rank->i < 1) errors.push_back({rank->line, "rank must be at least 1"});
            const ConfigValue* angles = b.find("angles");
            if (angles) {
                if (angles->kind != ConfigValue::Kind::List) {
                    errors.push_back({angles->line, "angles must be a list of rows"});
                } else {
                    if (rank && rank->kind == ConfigValue::Kind::Int && static_cast<i64>(angles->items.size()) != rank->i)
                        errors.push_back({angles->line, "angles must have one row per generator (rank rows)"});
                    for (const auto& row : angles->items) {
                        if (row.kind != ConfigValue::Kind::List) {
                            errors.push_back({row.line, "each angles row must be a list"});
                            continue;
                        }
                        if (dim && dim->kind == ConfigValue::Kind::Int && static_cast<i64>(row.items.size()) != dim->i)
                            errors.push_back({row.line, "each angles row must have dim entries"});
                        for (const auto& cell : row.items) validate_coefficient_string(cell, errors);
                    }
                }
            }
        } else if (b.kind == "system.heisenberg") {
            for (const char* key : {"g", "base"}) {
                const ConfigValue* v = b.find(key);
                if (!v) continue;
                if (v->kind != ConfigValue::Kind::Tuple || v->items.size() != 3) {
                    errors.push_back({v->line, std::string("key '") + key + "' must be a tuple (x, y, z)"});
                    continue;
                }
                for (const auto& c : v->items)
                    if (!is_number(c)) errors.push_back({c.line, "coordinates must be numbers"});
            }
        } else if (b.kind == "obs.char") {
            const ConfigValue* freq = b.find("freq");
            if (freq) {
                if (freq->kind != ConfigValue::Kind::List) {
                    errors.push_back({freq->line, "freq must be a list of integers"});
                } else {
                    for (const auto& f : freq->items)
                        if (f.kind != ConfigValue::Kind::Int) errors.push_back({f.line, "freq entries must be integers"});
                }
            }
            const ConfigValue* amp = b.find("amp");
            if (amp && amp->kind != ConfigValue::Kind::Complex && !is_number(*amp))
                errors.push_back({amp->line, "amp must be a complex number (re+imi)"});
        } else if (b.kind == "obs.const") {
            const ConfigValue* c = b.find("c");
            if (c && c->kind != ConfigValue::Kind::Complex && !is_number(*c))
                errors.push_back({c->line, "c must be a complex number (re+imi)"});
        } else if (b.kind == "poly") {
            const ConfigValue* coords = b.find("coords");
            if (coords) {
                if (coords->kind != ConfigValue::Kind::List || coords->items.empty()) {
                    errors.push_back({coords->line, "coords must be a nonempty list of strings"});
                } else {
                    for (const auto& c : coords->items) {
                        if (c.kind != ConfigValue::Kind::String) {
                            errors.push_back({c.line, "coords entries must be polynomial literal strings"});
                            continue;
                        }
                        try {
                            parse_polynomial(c.s);
                        } catch (const std::exception& ex) {
                            errors.push_back({c.line, ex.what()});
                        }
                    }
                }
            }
        } else if (b.kind == "correlation") {
            validate_reference(cfg, b, "system", {"system.torus", "system.heisenberg"}, errors);
            const ConfigValue* fns = b.find("functions");
            if (fns) {
                if (fns->kind != ConfigValue::Kind::List || fns->items.size() < 2) {
                    errors.push_back({fns->line, "functions must list f0 and at least one f_i"});
                } else {
                    for (const auto& f : fns->items) {
                        if (f.kind != ConfigValue::Kind::String || !cfg.block(f.s) || !cfg.block(f.s)->kind.starts_with("obs."))
                            errors.push_back({f.line, "functions entries must name observable blocks"});
                    }
                }
            }
            const ConfigValue* polys = b.find("polys");
            if (polys) {
                if (polys->kind != ConfigValue::Kind::List || polys->items.empty()) {
                    errors.push_back({polys->line, "polys must be a nonempty list"});
                } else {
                    if (fns && fns->kind == ConfigValue::Kind::List && fns->items.size() == polys->items.size() + 1) {
                        // consistent lengths
                    } else if (fns && fns->kind == ConfigValue::Kind::List) {
                        errors.push_back({polys->line, "need one polynomial per f_i (functions lists f0 too)"});
                    }
                    for (const auto& p : polys->items)
                        if (p.kind != ConfigValue::Kind::String || !cfg.block(p.s) || cfg.block(p.s)->kind != "poly")
                            errors.push_back({p.line, "polys entries must name poly blocks"});
                }
            }
            const ConfigValue* brackets = b.find("brackets");
            if (brackets) {
                if (brackets->kind != ConfigValue::Kind::List) {
                    errors.push_back({brackets->line, "brackets must be a list of bracket kinds"});
                } else {
                    if (polys && polys->kind == ConfigValue::Kind::List && brackets->items.size() != polys->items.size())
                        errors.push_back({brackets->line, "need one bracket map per polynomial"});
                    for (const auto& bk : brackets->items) {
                        if (bk.kind != ConfigValue::Kind::String) {
                            errors.push_back({bk.line, "bracket entries must be strings"});
                            continue;
                        }
                        std::size_t start = 0;
                        std::string_view sv = bk.s;
                        while (start <= sv.size()) {
                            std::size_t comma = sv.find(',', start);
                            std::string_view part = sv.substr(start, comma == std::string_view::npos ? sv.size() - start : comma - start);
                            try {
                                parse_bracket_kind(part);
                            } catch (const std::exception& ex) {
                                errors.push_back({bk.line, ex.what()});
                            }
                            if (comma == std::string_view::npos) break;
                            start = comma + 1;
                        }
                    }
                }
            }
            const ConfigValue* integ = b.find("integration");
            if (integ) {
                if (integ->kind != ConfigValue::Kind::String || (integ->s != "exact" && integ->s != "quadrature"))
                    errors.push_back({integ->line, "integration must be \"exact\" or \"quadrature\""});
            }
            const ConfigValue* qp = b.find("quad_points");
            if (qp && (qp->kind != ConfigValue::Kind::Int || qp->i < 1)) errors.push_back({qp->line, "quad_points must be a positive integer"});
        } else if (b.kind == "nilseq") {
            const ConfigValue* space = b.find("space");
            bool torus = true;
            if (space) {
                if (space->kind != ConfigValue::Kind::String || (space->s != "torus" && space->s != "heisenberg")) {
                    errors.push_back({space->line, "space must be \"torus\" or \"heisenberg\""});
                } else {
                    torus = space->s == "torus";
                }
            }
            const ConfigValue* g = b.find("g");
            const ConfigValue* x = b.find("x");
            if (torus) {
                if (g) {
                    if (g->kind != ConfigValue::Kind::List || g->items.empty()) {
                        errors.push_back({g->line, "g must be a list of coefficient literals"});
                    } else {
                        for (const auto& c : g->items) validate_coefficient_string(c, errors);
                    }
                }
                if (x) {
                    if (x->kind != ConfigValue::Kind::List || (g && g->kind == ConfigValue::Kind::List && x->items.size() != g->items.size()))
                        errors.push_back({x->line, "x must be a list matching g's dimension"});
                    else
                        for (const auto& c : x->items)
                            if (!is_number(c)) errors.push_back({c.line, "x entries must be numbers"});
                }
            } else {
                for (const ConfigValue* v : {g, x}) {
                    if (v && (v->kind != ConfigValue::Kind::Tuple || v->items.size() != 3))
                        errors.push_back({v->line, "Heisenberg data must be tuples (x, y, z)"});
                }
            }
            validate_reference(cfg, b, "F", {"obs"}, errors);
            const ConfigValue* step = b.find("step");
            if (step && (step->kind != ConfigValue::Kind::Int || step->i < 1)) errors.push_back({step->line, "step must be a positive integer"});
        } else if (b.kind == "experiment") {
            ++experiments;
            const ConfigValue* kind = b.find("kind");
            std::string k;
            if (kind) {
                if (kind->kind != ConfigValue::Kind::String) {
                    errors.push_back({kind->line, "kind must be a string"});
                } else {
                    k = kind->s;
                    static const std::set<std::string> kinds = {"correlate", "average", "equidist", "suspend", "approx-error", "example"};
                    if (!kinds.count(k)) errors.push_back({kind->line, "unknown experiment kind '" + k + "'"});
                }
            }
            expect_kind(b, "out", ConfigValue::Kind::String, "a string", errors);
            const ConfigValue* range = b.find("range");
            if (range && range->kind != ConfigValue::Kind::Range) errors.push_back({range->line, "range must be M:N"});
            if (range && range->kind == ConfigValue::Kind::Range && range->lo >= range->hi)
                errors.push_back({range->line, "range must satisfy M < N"});
            const ConfigValue* delta = b.find("delta");
            if (delta) {
                if (!is_number(*delta) || !(delta->as_real() > 0.0 && delta->as_real() < 1.0))
                    errors.push_back({delta->line, "delta outside (0,1)"});
            }
            const ConfigValue* deltas = b.find("deltas");
            if (deltas) {
                if (deltas->kind != ConfigValue::Kind::List || deltas->items.empty()) {
                    errors.push_back({deltas->line, "deltas must be a nonempty descending list"});
                } else {
                    double prev = 2.0;
                    for (const auto& dv : deltas->items) {
                        if (!is_number(dv) || !(dv.as_real() > 0.0 && dv.as_real() < 1.0)) {
                            errors.push_back({dv.line, "delta outside (0,1)"});
                        } else {
                            if (dv.as_real() >= prev) errors.push_back({dv.line, "deltas must be strictly descending"});
                            prev = dv.as_real();
                        }
                    }
                }
            }
            const ConfigValue* eps = b.find("epsilon");
            if (eps && (!is_number(*eps) || !(eps->as_real() > 0.0 && eps->as_real() < 1.0)))
                errors.push_back({eps->line, "epsilon outside (0,1)"});
            const ConfigValue* primes = b.find("primes");
            if (primes && (primes->kind != ConfigValue::Kind::Int || primes->i < 2))
                errors.push_back({primes->line, "primes must be an integer N >= 2"});
            const ConfigValue* ap = b.find("ap");
            if (ap) {
                if (ap->kind != ConfigValue::Kind::Range)
                    errors.push_back({ap->line, "ap must be r:s"});
                else if (ap->lo < 1)
                    errors.push_back({ap->line, "progression step r must be at least 1"});
            }
            const ConfigValue* cesaro = b.find("cesaro");
            if (cesaro && (cesaro->kind != ConfigValue::Kind::Range || cesaro->lo >= cesaro->hi))
                errors.push_back({cesaro ? cesaro->line : b.line, "cesaro must be M:N with M < N"});
            const ConfigValue* scan = b.find("scan");
            if (scan && (scan->kind != ConfigValue::Kind::Int || scan->i < 0 || scan->i > 1))
                errors.push_back({scan->line, "scan must be 0 or 1"});
            const ConfigValue* sweep = b.find("sweep");
            if (sweep && (sweep->kind != ConfigValue::Kind::Int || sweep->i < 1))
                errors.push_back({sweep->line, "sweep must be a positive window count"});

            // per-kind required keys and references
            if (k == "correlate" || k == "suspend") {
                if (!b.find("target")) errors.push_back({b.line, "missing key 'target'"});
                validate_reference(cfg, b, "target", {"correlation"}, errors);
                if (!range) errors.push_back({b.line, "missing key 'range'"});
                if (k == "suspend" && !delta) errors.push_back({b.line, "missing key 'delta'"});
            } else if (k == "average") {
                if (!b.find("target")) errors.push_back({b.line, "missing key 'target'"});
                validate_reference(cfg, b, "target", {"correlation", "nilseq"}, errors);
                if (!cesaro && !primes) errors.push_back({b.line, "average needs a 'cesaro' window or a 'primes' limit"});
            } else if (k == "equidist") {
                if (!b.find("poly")) errors.push_back({b.line, "missing key 'poly'"});
                validate_reference(cfg, b, "poly", {"poly"}, errors);
                if (!delta && !deltas) errors.push_back({b.line, "equidist needs 'delta' or 'deltas'"});
                if (!range && !primes) errors.push_back({b.line, "equidist needs a 'range' window or a 'primes' limit"});
            } else if (k == "approx-error") {
                if (!b.find("alpha")) errors.push_back({b.line, "missing key 'alpha'"});
                if (!b.find("psi")) errors.push_back({b.line, "missing key 'psi'"});
                validate_reference(cfg, b, "alpha", {"correlation"}, errors);
                validate_reference(cfg, b, "psi", {"nilseq"}, errors);
                if (!cesaro && !primes) errors.push_back({b.line, "approx-error needs a 'cesaro' window or a 'primes' limit"});
            } else if (k == "example") {
                if (!range) errors.push_back({b.line, "missing key 'range'"});
            }
        }
    }
    if (experiments != 1 && !cfg.blocks.empty())
        errors.push_back({cfg.blocks.front().line, "config must contain exactly one experiment block"});
}

std::string format_value(const ConfigValue& v) {
    char buf[64];
    switch (v.kind) {
        case ConfigValue::Kind::Int: return std::to_string(v.i);
        case ConfigValue::Kind::Real: {
            std::snprintf(buf, sizeof(buf), "%.17g", v.d);
            std::string s = buf;
            if (s.find('.') == std::string::npos && s.find('e') == std::string::npos && s.find("inf") == std::string::npos &&
                s.find("nan") == std::string::npos)
                s += ".0";
            return s;
        }
        case ConfigValue::Kind::String: return "\"" + v.s + "\"";
        case ConfigValue::Kind::Complex: {
            std::string re, im;
            std::snprintf(buf, sizeof(buf), "%.17g", v.z.real());
            re = buf;
            std::snprintf(buf, sizeof(buf), "%.17g", std::abs(v.z.imag()));
            im = buf;
            return re + (std::signbit(v.z.imag()) ? "-" : "+") + im + "i";
        }
        case ConfigValue::Kind::Tuple:
        case ConfigValue::Kind::List: {
            std::string out(v.kind == ConfigValue::Kind::Tuple ? "(" : "[");
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                if (i) out += ", ";
                out += format_value(v.items[i]);
            }
            out += v.kind == ConfigValue::Kind::Tuple ? ")" : "]";
            return out;
        }
        case ConfigValue::Kind::Range: return std::to_string(v.lo) + ":" + std::to_string(v.hi);
    }
    return {};
}

}  // namespace

std::string print_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& b : config.blocks) {
        out += b.kind + " " + b.name + " {\n";
        for (const auto& e : b.entries) out += "  " + e.key + " = " + format_value(e.value) + "\n";
        out += "}\n";
    }
    return out;
}

std::string ParseResult::render_errors() const {
    std::string out;
    for (const auto& e : errors) out += "line " + std::to_string(e.line) + ": " + e.message + "\n";
    return out;
}

}  // namespace nilcorr
