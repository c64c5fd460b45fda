#include "nilcorr/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nilcorr/equidist.hpp"
#include "nilcorr/suspension.hpp"

namespace nilcorr {

std::string csv_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

namespace {

struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void invalid(const std::string& msg) { throw ValidationFailure(msg); }

const ConfigBlock& need_block(const ExperimentConfig& cfg, const std::string& name, std::string_view kind_prefix) {
    const ConfigBlock* b = cfg.block(name);
    if (!b) invalid("unresolved reference '" + name + "'");
    if (!b->kind.starts_with(kind_prefix)) invalid("block '" + name + "' has kind " + b->kind);
    return *b;
}

Coefficient coefficient_from(const ConfigValue& v) { return parse_coefficient(v.s); }

}  // namespace

std::shared_ptr<const LatticeAction> build_system(const ExperimentConfig& cfg, const std::string& name) {
    const ConfigBlock& b = need_block(cfg, name, "system.");
    if (b.kind == "system.torus") {
        int dim = static_cast<int>(b.find("dim")->i);
        int rank = static_cast<int>(b.find("rank")->i);
        const ConfigValue& rows = *b.find("angles");
        std::vector<Coefficient> angles;
        for (const auto& row : rows.items)
            for (const auto& cell : row.items) angles.push_back(coefficient_from(cell));
        return std::make_shared<TorusRotation>(dim, rank, std::move(angles));
    }
    const ConfigValue& g = *b.find("g");
    const ConfigValue& base = *b.find("base");
    HeisenbergElement gen{g.items[0].as_real(), g.items[1].as_real(), g.items[2].as_real()};
    (void)base;  // base point is consumed by nilseq blocks; the action itself is base-free
    return std::make_shared<HeisenbergTranslation>(gen);
}

Observable build_observable(const ExperimentConfig& cfg, const std::string& name, const Space& space) {
    const ConfigBlock& b = need_block(cfg, name, "obs.");
    if (b.kind == "obs.char") {
        const ConfigValue& freq = *b.find("freq");
        std::vector<i64> f;
        for (const auto& v : freq.items) f.push_back(v.i);
        if (static_cast<int>(f.size()) != space.dim) invalid("freq length of '" + name + "' does not match the space dimension");
        const ConfigValue& amp = *b.find("amp");
        cplx a = amp.kind == ConfigValue::Kind::Complex ? amp.z : cplx(amp.as_real(), 0.0);
        return TrigObservable::character(space, std::move(f), a);
    }
    const ConfigValue& c = *b.find("c");
    cplx a = c.kind == ConfigValue::Kind::Complex ? c.z : cplx(c.as_real(), 0.0);
    return TrigObservable::constant(space, a);
}

VectorPolynomial build_poly(const ExperimentConfig& cfg, const std::string& name) {
    const ConfigBlock& b = need_block(cfg, name, "poly");
    const ConfigValue& coords = *b.find("coords");
    std::string joined;
    for (std::size_t i = 0; i < coords.items.size(); ++i) {
        if (i) joined += ";";
        joined += coords.items[i].s;
    }
    return parse_polynomial(joined);
}

CorrelationSpec build_correlation(const ExperimentConfig& cfg, const std::string& name) {
    const ConfigBlock& b = need_block(cfg, name, "correlation");
    CorrelationSpec spec;
    spec.action = build_system(cfg, b.find("system")->s);
    const Space& space = spec.action->space();
    for (const auto& f : b.find("functions")->items) spec.functions.push_back(build_observable(cfg, f.s, space));
    for (const auto& p : b.find("polys")->items) spec.polys.push_back(build_poly(cfg, p.s));

    int ell = spec.action->rank();
    const ConfigValue* brackets = b.find("brackets");
    for (std::size_t i = 0; i < spec.polys.size(); ++i) {
        if (!brackets) {
            spec.brackets.push_back(BracketMap::uniform(BracketKind::Floor, ell));
            continue;
        }
        std::string_view sv = brackets->items[i].s;
        std::vector<BracketKind> kinds;
        std::size_t start = 0;
        while (start <= sv.size()) {
            std::size_t comma = sv.find(',', start);
            std::string_view part = sv.substr(start, comma == std::string_view::npos ? sv.size() - start : comma - start);
            kinds.push_back(parse_bracket_kind(part));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (kinds.size() == 1)
            spec.brackets.push_back(BracketMap::uniform(kinds[0], ell));
        else if (static_cast<int>(kinds.size()) == ell)
            spec.brackets.push_back(BracketMap{std::move(kinds)});
        else
            invalid("bracket map of '" + name + "' needs 1 or rank entries");
    }

    const ConfigValue* integ = b.find("integration");
    const ConfigValue* qp = b.find("quad_points");
    if (integ && integ->s == "quadrature")
        spec.integration = IntegrationChoice::quadrature(qp ? static_cast<int>(qp->i) : 4096);
    else
        spec.integration = IntegrationChoice::exact_path();
    spec.validate();
    return spec;
}

Nilsequence build_nilsequence(const ExperimentConfig& cfg, const std::string& name) {
    const ConfigBlock& b = need_block(cfg, name, "nilseq");
    Nilsequence psi;
    bool torus = b.find("space")->s == "torus";
    if (torus) {
        TorusNilData data;
        for (const auto& c : b.find("g")->items) data.g.push_back(coefficient_from(c));
        for (const auto& c : b.find("x")->items) data.x.coords.push_back(fractional(c.as_real()));
        psi.data = std::move(data);
        psi.F = build_observable(cfg, b.find("F")->s, Space::torus(static_cast<int>(std::get<TorusNilData>(psi.data).g.size())));
    } else {
        const ConfigValue& g = *b.find("g");
        const ConfigValue& x = *b.find("x");
        HeisNilData data;
        data.g = {g.items[0].as_real(), g.items[1].as_real(), g.items[2].as_real()};
        data.x = nil_reduce({x.items[0].as_real(), x.items[1].as_real(), x.items[2].as_real()});
        psi.data = std::move(data);
        psi.F = build_observable(cfg, b.find("F")->s, Space::heisenberg());
    }
    if (const ConfigValue* step = b.find("step")) psi.step = static_cast<int>(step->i);
    psi.validate();
    return psi;
}

namespace {

// ---- experiment execution ---------------------------------------------------

struct Outputs {
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
    std::ostringstream csv;
    std::ostringstream summary;
};

std::vector<AveragingScheme> schemes_from(const ConfigBlock& exp) {
    std::vector<AveragingScheme> out;
    if (const ConfigValue* c = exp.find("cesaro")) {
        // a uniform limit cannot be certified by one window: `sweep = k`
        // reports k windows of the same length at shifted starts
        i64 windows = 1;
        if (const ConfigValue* sweep = exp.find("sweep")) windows = sweep->i;
        i64 len = c->hi - c->lo;
        for (i64 j = 0; j < windows; ++j) out.push_back(AveragingScheme::cesaro(c->lo + j * len, c->hi + j * len));
    }
    if (const ConfigValue* p = exp.find("primes")) {
        i64 r = 1, s = 0;
        if (const ConfigValue* ap = exp.find("ap")) {
            r = ap->lo;
            s = ap->hi;
        }
        out.push_back(AveragingScheme::primes(p->i, r, s));
    }
    return out;
}

Sequence sequence_for_target(const ExperimentConfig& cfg, const std::string& name) {
    const ConfigBlock* b = cfg.block(name);
    if (!b) invalid("unresolved reference '" + name + "'");
    if (b->kind == "correlation") {
        auto seq = std::make_shared<CorrelationSequence>(build_correlation(cfg, name));
        return [seq](i64 n) { return (*seq)(n); };
    }
    if (b->kind == "nilseq") return nilsequence_fn(build_nilsequence(cfg, name));
    invalid("block '" + name + "' is not a sequence (correlation or nilseq)");
}

void run_correlate(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    CorrelationSpec spec = build_correlation(cfg, exp.find("target")->s);
    const ConfigValue& range = *exp.find("range");
    out.csv << "n,re(alpha),im(alpha)\n";
    double max_abs = 0;
    for (i64 n = range.lo; n < range.hi; ++n) {
        cplx a = multicorrelation(spec, n);
        max_abs = std::max(max_abs, std::abs(a));
        out.csv << n << "," << csv_real(a.real()) << "," << csv_real(a.imag()) << "\n";
    }
    out.summary << "experiment: correlate\n"
                << "target: " << exp.find("target")->s << "\n"
                << "range: [" << range.lo << ":" << range.hi << ")\n"
                << "rows: " << (range.hi - range.lo) << "\n"
                << "max |alpha|: " << csv_real(max_abs) << "\n";
}

void run_average(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    Sequence seq = sequence_for_target(cfg, exp.find("target")->s);
    auto schemes = schemes_from(exp);
    out.csv << "scheme,value_re,value_im\n";
    out.summary << "experiment: average\ntarget: " << exp.find("target")->s << "\n";
    for (const auto& scheme : schemes) {
        cplx v;
        if (scheme.kind == AveragingScheme::Kind::Cesaro) {
            v = cesaro_average(seq, scheme.M, scheme.N);
        } else {
            PrimeSieve sieve = PrimeSieve::load_or_build(static_cast<u64>(scheme.N), PrimeSieve::default_cache_path());
            v = prime_average(seq, sieve, static_cast<u64>(scheme.N), scheme.r, scheme.s);
        }
        out.csv << scheme.describe() << "," << csv_real(v.real()) << "," << csv_real(v.imag()) << "\n";
        out.summary << scheme.describe() << " = " << csv_real(v.real()) << " + " << csv_real(v.imag()) << "i\n";
    }
}

void run_equidist(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    VectorPolynomial q = build_poly(cfg, exp.find("poly")->s);
    std::vector<double> deltas;
    if (const ConfigValue* d = exp.find("delta")) deltas.push_back(d->as_real());
    if (const ConfigValue* ds = exp.find("deltas"))
        for (const auto& d : ds->items) deltas.push_back(d.as_real());

    std::optional<PrimeSieve> sieve;
    DensityScheme scheme = DensityScheme::window(0, 0);
    if (const ConfigValue* range = exp.find("range")) {
        scheme = DensityScheme::window(range->lo, range->hi);
    } else {
        const ConfigValue& p = *exp.find("primes");
        i64 r = 1, s = 0;
        if (const ConfigValue* ap = exp.find("ap")) {
            r = ap->lo;
            s = ap->hi;
        }
        sieve = PrimeSieve::load_or_build(static_cast<u64>(p.i), PrimeSieve::default_cache_path());
        scheme = DensityScheme::primes(p.i, r, s, *sieve);
    }

    std::vector<DensityReport> reports = density_limit_scan(q, deltas, scheme);
    out.csv << "delta,hits,total,density,verdict\n";
    for (const auto& r : reports)
        out.csv << csv_real(r.delta) << "," << r.hits << "," << r.total << "," << csv_real(r.density) << ","
                << verdict_name(r.verdict) << "\n";
    out.summary << "experiment: equidist\n"
                << "poly: " << format_polynomial(q) << "\n"
                << "scheme: " << (reports.empty() ? std::string("-") : reports.front().scheme) << "\n"
                << "note: finite-scale report; the statement being probed is a double limit (delta -> 0 after range -> infinity)\n";
    for (const auto& r : reports)
        out.summary << "delta " << csv_real(r.delta) << ": density " << csv_real(r.density) << " (" << verdict_name(r.verdict)
                    << ")\n";
}

void run_suspend(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    CorrelationSpec spec = build_correlation(cfg, exp.find("target")->s);
    double delta = exp.find("delta")->as_real();
    const ConfigValue& range = *exp.find("range");
    int lm = spec.action->rank() * spec.m();
    double scale = std::pow(delta, -lm);

    out.csv << "n,exceptional,re(alpha),re(alpha_tilde_scaled),abs_diff\n";
    double max_diff_all = 0, max_diff_stable = 0;
    u64 exc_count = 0;
    for (i64 n = range.lo; n < range.hi; ++n) {
        cplx a = multicorrelation(spec, n);
        cplx at = alpha_tilde(spec, delta, n) * scale;
        bool exc = exceptional(spec.polys, delta, n);
        double diff = std::abs(a - at);
        max_diff_all = std::max(max_diff_all, diff);
        if (floor_stable(spec.polys, delta, n))
            max_diff_stable = std::max(max_diff_stable, diff);
        exc_count += exc ? 1 : 0;
        out.csv << n << "," << (exc ? 1 : 0) << "," << csv_real(a.real()) << "," << csv_real(at.real()) << ","
                << csv_real(diff) << "\n";
    }
    out.summary << "experiment: suspend\n"
                << "target: " << exp.find("target")->s << "\n"
                << "delta: " << csv_real(delta) << "\n"
                << "range: [" << range.lo << ":" << range.hi << ")\n"
                << "exceptional fraction: " << csv_real(static_cast<double>(exc_count) / static_cast<double>(range.hi - range.lo)) << "\n"
                << "max |alpha - scaled alpha~| (floor-stable n): " << csv_real(max_diff_stable) << "\n"
                << "max |alpha - scaled alpha~| (all n): " << csv_real(max_diff_all) << "\n";
    if (const ConfigValue* scan = exp.find("scan"); scan && scan->i == 1) {
        i64 lo = range.lo, hi = std::min<i64>(range.hi, lo + 128);
        out.summary << "delta scan over [" << lo << ":" << hi << "):\n";
        for (const auto& row : delta_scan(spec, lo, hi))
            out.summary << "  delta " << csv_real(row.delta) << ": max_err " << csv_real(row.max_error) << ", mean_err "
                        << csv_real(row.mean_error) << ", exceptional " << csv_real(row.exceptional_fraction) << "\n";
    }
}

void run_approx_error(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    Sequence alpha = sequence_for_target(cfg, exp.find("alpha")->s);
    Sequence psi = sequence_for_target(cfg, exp.find("psi")->s);
    auto schemes = schemes_from(exp);
    out.csv << "scheme,error\n";
    out.summary << "experiment: approx-error\n"
                << "alpha: " << exp.find("alpha")->s << "\npsi: " << exp.find("psi")->s << "\n";
    for (const auto& scheme : schemes) {
        double err;
        if (scheme.kind == AveragingScheme::Kind::Cesaro) {
            err = approximation_error(alpha, psi, scheme);
        } else {
            PrimeSieve sieve = PrimeSieve::load_or_build(static_cast<u64>(scheme.N), PrimeSieve::default_cache_path());
            err = approximation_error(alpha, psi, scheme, &sieve);
        }
        out.csv << scheme.describe() << "," << csv_real(err) << "\n";
        out.summary << scheme.describe() << " error = " << csv_real(err) << "\n";
    }
}

void run_example(const ExperimentConfig& cfg, const ConfigBlock& exp, Outputs& out) {
    (void)cfg;
    const ConfigValue& range = *exp.find("range");
    ExampleSpec ex = example_spec();
    out.csv << "n,re(alpha),im(alpha),re(engine),im(engine),abs_diff\n";
    double max_diff = 0;
    for (i64 n = range.lo; n < range.hi; ++n) {
        cplx closed = example_alpha(n);
        cplx engine = multicorrelation(ex.correlation, n);
        double diff = std::abs(closed - engine);
        max_diff = std::max(max_diff, diff);
        out.csv << n << "," << csv_real(closed.real()) << "," << csv_real(closed.imag()) << "," << csv_real(engine.real())
                << "," << csv_real(engine.imag()) << "," << csv_real(diff) << "\n";
    }
    out.summary << "experiment: example\n"
                << "range: [" << range.lo << ":" << range.hi << ")\n"
                << "max |closed form - engine|: " << csv_real(max_diff) << "\n";
    if (const ConfigValue* eps = exp.find("epsilon")) {
        Nilsequence psi = example_nil_approx(eps->as_real());
        Sequence psi_fn = nilsequence_fn(psi);
        Sequence alpha_fn = [](i64 n) { return example_alpha(n); };
        double cerr = approximation_error(alpha_fn, psi_fn, AveragingScheme::cesaro(std::max<i64>(range.lo, 1), range.hi));
        out.summary << "epsilon: " << csv_real(eps->as_real()) << "\n"
                    << "mollified candidate cesaro error over [" << std::max<i64>(range.lo, 1) << ":" << range.hi
                    << "): " << csv_real(cerr) << "\n";
        if (const ConfigValue* primes = exp.find("primes")) {
            PrimeSieve sieve = PrimeSieve::load_or_build(static_cast<u64>(primes->i), PrimeSieve::default_cache_path());
            double perr = approximation_error(alpha_fn, psi_fn, AveragingScheme::primes(primes->i), &sieve);
            out.summary << "mollified candidate prime error over p <= " << primes->i << ": " << csv_real(perr) << "\n";
        }
    }
}

}  // namespace

int run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    std::ostream& log = options.log ? *options.log : std::cout;
    const ConfigBlock* exp = config.experiment();
    if (!exp) {
        log << "error: config has no experiment block\n";
        return kExitValidation;
    }
    Outputs out;
    try {
        std::string kind = exp->find("kind")->s;
        if (kind == "correlate")
            run_correlate(config, *exp, out);
        else if (kind == "average")
            run_average(config, *exp, out);
        else if (kind == "equidist")
            run_equidist(config, *exp, out);
        else if (kind == "suspend")
            run_suspend(config, *exp, out);
        else if (kind == "approx-error")
            run_approx_error(config, *exp, out);
        else if (kind == "example")
            run_example(config, *exp, out);
        else {
            log << "error: unknown experiment kind '" << kind << "'\n";
            return kExitValidation;
        }
    } catch (const ValidationFailure& ex) {
        log << "error: " << ex.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return kExitRuntime;
    }

    try {
        std::filesystem::create_directories(options.out_dir);
        std::filesystem::path csv_path = options.out_dir / exp->find("out")->s;
        std::filesystem::path summary_path = csv_path;
        summary_path.replace_extension(".summary.txt");
        std::ofstream csv(csv_path, std::ios::trunc);
        csv << out.csv.str();
        if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
        std::ofstream summary(summary_path, std::ios::trunc);
        summary << out.summary.str();
        if (!summary) throw std::runtime_error("cannot write " + summary_path.string());
        log << out.summary.str();
        log << "wrote " << csv_path.string() << "\n";
    } catch (const std::exception& ex) {
        log << "error: " << ex.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int run_config_text(std::string_view text, const RunOptions& options) {
    std::ostream& log = options.log ? *options.log : std::cout;
    ParseResult parsed = parse_config(text);
    if (!parsed.ok()) {
        log << parsed.render_errors();
        return kExitValidation;
    }
    return run_experiment(*parsed.config, options);
}

}  // namespace nilcorr
