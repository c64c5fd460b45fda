// nilcorr: config-driven experiments on multicorrelation sequences,
// equidistribution densities, suspension identities and nilsequence
// approximation errors.  CSV out, deterministic for a fixed thread count.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nilcorr/equidist.hpp"
#include "nilcorr/runner.hpp"
#include "nilcorr/suspension.hpp"

namespace {

using namespace nilcorr;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_from_config(const std::string& config_path, const std::string& out_dir, const std::string& expected_kind) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitRuntime;
    }
    ParseResult parsed = parse_config(text);
    if (!parsed.ok()) {
        std::cerr << parsed.render_errors();
        return kExitValidation;
    }
    const ConfigBlock* exp = parsed.config->experiment();
    if (exp && exp->find("kind") && exp->find("kind")->s != expected_kind) {
        std::cerr << "error: config runs a '" << exp->find("kind")->s << "' experiment; invoke the matching subcommand\n";
        return kExitValidation;
    }
    RunOptions opts;
    opts.out_dir = out_dir;
    return run_experiment(*parsed.config, opts);
}

// range flag "M:N"
bool parse_range(const std::string& s, i64* lo, i64* hi) {
    std::size_t colon = s.find(':');
    if (colon == std::string::npos) return false;
    try {
        *lo = std::stoll(s.substr(0, colon));
        *hi = std::stoll(s.substr(colon + 1));
    } catch (...) {
        return false;
    }
    return true;
}

void write_density_csv(const std::string& out_dir, const std::string& name, const std::vector<DensityReport>& reports) {
    std::filesystem::create_directories(out_dir);
    std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream csv(path, std::ios::trunc);
    csv << "delta,hits,total,density,verdict\n";
    for (const auto& r : reports)
        csv << csv_real(r.delta) << "," << r.hits << "," << r.total << "," << csv_real(r.density) << ","
            << verdict_name(r.verdict) << "\n";
    std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for multicorrelation sequences with integer-part polynomial iterates"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int threads = 0;
    app.add_option("--threads", threads, "worker count (default: NILCORR_THREADS or all cores)");

    auto add_common = [&](CLI::App* sub, bool config_required) {
        sub->add_option("--config", config_path, "experiment config file")->required(config_required);
        sub->add_option("--out", out_dir, "output directory (default: .)");
    };

    CLI::App* correlate = app.add_subcommand("correlate", "emit alpha(n) over a range");
    add_common(correlate, true);
    CLI::App* average = app.add_subcommand("average", "Cesaro / prime averages of a configured sequence");
    add_common(average, true);
    std::string avg_cesaro, avg_primes, avg_ap;
    average->add_option("--cesaro", avg_cesaro, "window M:N (overrides the config scheme)");
    average->add_option("--primes", avg_primes, "prime limit N (overrides the config scheme)");
    average->add_option("--ap", avg_ap, "progression r:s for --primes");

    CLI::App* equidist_cmd = app.add_subcommand("equidist", "fractional-part hit densities");
    add_common(equidist_cmd, false);
    std::string eq_poly, eq_range, eq_ap;
    std::vector<double> eq_deltas;
    i64 eq_primes = 0;
    std::string eq_out_name = "equidist.csv";
    equidist_cmd->add_option("--poly", eq_poly, "scalar polynomial literal, e.g. 'sqrt(2)*x'");
    equidist_cmd->add_option("--delta", eq_deltas, "delta (repeatable, descending)");
    equidist_cmd->add_option("--range", eq_range, "window M:N");
    equidist_cmd->add_option("--primes", eq_primes, "prime limit N");
    equidist_cmd->add_option("--ap", eq_ap, "progression r:s for --primes");
    equidist_cmd->add_option("--out-name", eq_out_name, "CSV file name for the flag-driven form");

    CLI::App* suspend = app.add_subcommand("suspend", "suspension identity per-n report");
    add_common(suspend, true);
    CLI::App* approx = app.add_subcommand("approx-error", "averages of |alpha - psi| under a scheme");
    add_common(approx, true);
    CLI::App* example = app.add_subcommand("example", "closed form vs engine for the guiding rotation example");
    add_common(example, true);

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) set_thread_count(threads);

    try {
        if (equidist_cmd->parsed() && config_path.empty()) {
            // flag-driven form
            if (eq_poly.empty() || eq_deltas.empty() || (eq_range.empty() && eq_primes == 0)) {
                std::cerr << "error: equidist needs --poly, --delta and one of --range/--primes (or --config)\n";
                return kExitValidation;
            }
            VectorPolynomial q;
            try {
                q = parse_polynomial(eq_poly);
            } catch (const std::exception& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return kExitValidation;
            }
            std::optional<PrimeSieve> sieve;
            DensityScheme scheme = DensityScheme::window(0, 0);
            if (!eq_range.empty()) {
                i64 lo = 0, hi = 0;
                if (!parse_range(eq_range, &lo, &hi) || lo >= hi) {
                    std::cerr << "error: bad --range (want M:N with M < N)\n";
                    return kExitValidation;
                }
                scheme = DensityScheme::window(lo, hi);
            } else {
                i64 r = 1, s = 0;
                if (!eq_ap.empty() && !parse_range(eq_ap, &r, &s)) {
                    std::cerr << "error: bad --ap (want r:s)\n";
                    return kExitValidation;
                }
                sieve = PrimeSieve::load_or_build(static_cast<u64>(eq_primes), PrimeSieve::default_cache_path());
                scheme = DensityScheme::primes(eq_primes, r, s, *sieve);
            }
            std::vector<DensityReport> reports = density_limit_scan(q, eq_deltas, scheme);
            write_density_csv(out_dir, eq_out_name, reports);
            std::cout << "note: finite-scale report; the probed statement is a double limit\n";
            return kExitOk;
        }

        if (average->parsed() && (!avg_cesaro.empty() || !avg_primes.empty())) {
            // flag scheme overrides: rewrite the config's experiment block keys
            std::string text = slurp(config_path);
            ParseResult parsed = parse_config(text);
            if (!parsed.ok()) {
                std::cerr << parsed.render_errors();
                return kExitValidation;
            }
            ExperimentConfig cfg = *parsed.config;
            if (cfg.experiment() && cfg.experiment()->find("kind")->s != "average") {
                std::cerr << "error: config runs a '" << cfg.experiment()->find("kind")->s
                          << "' experiment; invoke the matching subcommand\n";
                return kExitValidation;
            }
            for (auto& b : cfg.blocks) {
                if (b.kind != "experiment") continue;
                std::erase_if(b.entries, [](const ConfigEntry& e) { return e.key == "cesaro" || e.key == "primes" || e.key == "ap"; });
                if (!avg_cesaro.empty()) {
                    i64 lo = 0, hi = 0;
                    if (!parse_range(avg_cesaro, &lo, &hi)) {
                        std::cerr << "error: bad --cesaro (want M:N)\n";
                        return kExitValidation;
                    }
                    ConfigValue v;
                    v.kind = ConfigValue::Kind::Range;
                    v.lo = lo;
                    v.hi = hi;
                    b.entries.push_back({"cesaro", v, 0});
                }
                if (!avg_primes.empty()) {
                    b.entries.push_back({"primes", ConfigValue::integer(std::stoll(avg_primes)), 0});
                    if (!avg_ap.empty()) {
                        i64 r = 1, s = 0;
                        if (!parse_range(avg_ap, &r, &s)) {
                            std::cerr << "error: bad --ap (want r:s)\n";
                            return kExitValidation;
                        }
                        ConfigValue v;
                        v.kind = ConfigValue::Kind::Range;
                        v.lo = r;
                        v.hi = s;
                        b.entries.push_back({"ap", v, 0});
                    }
                }
            }
            RunOptions opts;
            opts.out_dir = out_dir;
            return run_experiment(cfg, opts);
        }

        std::string kind;
        for (CLI::App* sub : {correlate, average, equidist_cmd, suspend, approx, example})
            if (sub->parsed()) kind = sub->get_name();
        return run_from_config(config_path, out_dir, kind);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitRuntime;
    }
}
