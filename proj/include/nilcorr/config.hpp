#pragma once

// Experiment config files: a strict block syntax with line-numbered
// diagnostics.  Unknown keys are errors; references resolve by quoted
// block name; parse(print(config)) round-trips exactly.
//
//   system.torus rot { dim = 1  rank = 1  angles = [["1/2*sqrt(2)"]] }
//   obs.char f0 { freq = [1]  amp = 1+0i }
//   poly q { coords = ["sqrt(2)*x"] }
//   correlation alpha { system = "rot"  functions = ["f0","f1"]
//                       polys = ["q"]  brackets = ["floor"]  integration = "exact" }
//   experiment run { kind = "correlate"  target = "alpha"  range = 0:100  out = "alpha.csv" }

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nilcorr/fixed128.hpp"

namespace nilcorr {

struct ConfigValue {
    enum class Kind { Int, Real, String, Complex, Tuple, List, Range };
    Kind kind = Kind::Int;
    i64 i = 0;
    double d = 0;
    std::string s;
    std::complex<double> z;
    std::vector<ConfigValue> items;
    i64 lo = 0, hi = 0;  // Range
    int line = 0;

    bool operator==(const ConfigValue& o) const;

    static ConfigValue integer(i64 v) { ConfigValue c; c.kind = Kind::Int; c.i = v; return c; }
    static ConfigValue real(double v) { ConfigValue c; c.kind = Kind::Real; c.d = v; return c; }
    static ConfigValue string(std::string v) { ConfigValue c; c.kind = Kind::String; c.s = std::move(v); return c; }

    // Numeric coercions used by the schema layer.
    double as_real() const { return kind == Kind::Int ? static_cast<double>(i) : d; }
};

struct ConfigEntry {
    std::string key;
    ConfigValue value;
    int line = 0;
    bool operator==(const ConfigEntry& o) const { return key == o.key && value == o.value; }
};

struct ConfigBlock {
    std::string kind;  // system.torus | system.heisenberg | obs.char | obs.const | poly | correlation | nilseq | experiment
    std::string name;
    std::vector<ConfigEntry> entries;
    int line = 0;

    const ConfigValue* find(std::string_view key) const;
    bool operator==(const ConfigBlock& o) const { return kind == o.kind && name == o.name && entries == o.entries; }
};

struct ExperimentConfig {
    std::vector<ConfigBlock> blocks;

    const ConfigBlock* block(std::string_view name) const;
    const ConfigBlock* experiment() const;  // the unique experiment block
    bool operator==(const ExperimentConfig& o) const { return blocks == o.blocks; }
};

struct ParseError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ParseError> errors;
    bool ok() const { return config.has_value() && errors.empty(); }
    std::string render_errors() const;
};

// Parses and schema-validates; either a config or a list of errors with
// line numbers.
ParseResult parse_config(std::string_view text);

// Canonical form; parse(print(c)) == c for every valid config.
std::string print_config(const ExperimentConfig& config);

}  // namespace nilcorr
