#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nilcorr/runner.hpp"
#include "nilcorr/suspension.hpp"

using namespace nilcorr;

namespace {

const char* kExampleConfig = R"cfg(
# guiding rotation example
system.torus rot {
  dim = 1
  rank = 1
  angles = [["1/2*sqrt(2)"]]
}
obs.char f0 { freq = [1]  amp = 1+0i }
obs.char f1 { freq = [-1] amp = 1+0i }
poly q1 { coords = ["sqrt(2)*x"] }
correlation alpha {
  system = "rot"
  functions = ["f0", "f1"]
  polys = ["q1"]
  brackets = ["floor"]
  integration = "exact"
}
experiment run {
  kind = "correlate"
  target = "alpha"
  range = 0:16
  out = "alpha.csv"
}
)cfg";

}  // namespace

TEST_CASE("minimal valid config parses with defaults") {
    ParseResult r = parse_config(kExampleConfig);
    REQUIRE_MESSAGE(r.ok(), r.render_errors());
    CHECK(r.config->blocks.size() == 6);
    CorrelationSpec spec = build_correlation(*r.config, "alpha");
    CHECK(spec.integration.exact);
    CHECK(spec.m() == 1);
    // engine value matches the direct construction
    CHECK(std::abs(multicorrelation(spec, 1) - e2pi(1.0 - 1.0 / std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("validation errors carry line numbers") {
    std::string bad = std::string(kExampleConfig) + "\nexperiment dup { kind = \"suspend\" target = \"alpha\" delta = 1.5 range = 0:4 out = \"x.csv\" }\n";
    ParseResult r = parse_config(bad);
    CHECK_FALSE(r.ok());
    bool found_delta = false, found_dup = false;
    for (const auto& e : r.errors) {
        if (e.message.find("delta outside (0,1)") != std::string::npos) {
            found_delta = true;
            CHECK(e.line >= 25);
        }
        if (e.message.find("exactly one experiment") != std::string::npos) found_dup = true;
    }
    CHECK(found_delta);
    CHECK(found_dup);
}

TEST_CASE("duplicate definitions and unknown keys are rejected") {
    std::string dup = R"(
poly q { coords = ["x"] }
poly q { coords = ["x^2"] }
experiment run { kind = "equidist" poly = "q" delta = 0.1 range = 0:10 out = "o.csv" }
)";
    ParseResult r = parse_config(dup);
    CHECK_FALSE(r.ok());
    bool found = false;
    for (const auto& e : r.errors) found = found || e.message.find("duplicate definition") != std::string::npos;
    CHECK(found);

    std::string unknown = R"(
poly q { coords = ["x"] wat = 3 }
experiment run { kind = "equidist" poly = "q" delta = 0.1 range = 0:10 out = "o.csv" }
)";
    ParseResult r2 = parse_config(unknown);
    CHECK_FALSE(r2.ok());
    bool found2 = false;
    for (const auto& e : r2.errors) found2 = found2 || e.message.find("unknown key 'wat'") != std::string::npos;
    CHECK(found2);

    std::string unresolved = R"(
experiment run { kind = "correlate" target = "nope" range = 0:4 out = "o.csv" }
)";
    ParseResult r3 = parse_config(unresolved);
    CHECK_FALSE(r3.ok());
    bool found3 = false;
    for (const auto& e : r3.errors) found3 = found3 || e.message.find("unresolved reference") != std::string::npos;
    CHECK(found3);
}

TEST_CASE("round trip: parse(print(config)) == config") {
    const char* configs[] = {kExampleConfig,
                             R"cfg(
system.heisenberg heis { g = (0.3, 0.41, 0.0)  base = (0.0, 0.0, 0.0) }
obs.const one { c = 1+0i }
obs.char F { freq = [1, 0, 0] amp = 0.5-0.25i }
nilseq psi { space = "heisenberg" g = (0.3, 0.41, 0.0) x = (0.0, 0.0, 0.0) F = "F" step = 2 }
poly q { coords = ["1/3*x + 1/7"] }
experiment run { kind = "equidist" poly = "q" deltas = [0.25, 0.125, 0.05] range = 0:1000 out = "d.csv" }
)cfg"};
    for (const char* text : configs) {
        ParseResult first = parse_config(text);
        REQUIRE_MESSAGE(first.ok(), first.render_errors());
        std::string printed = print_config(*first.config);
        ParseResult second = parse_config(printed);
        REQUIRE_MESSAGE(second.ok(), second.render_errors());
        CHECK(*second.config == *first.config);
        CHECK(print_config(*second.config) == printed);
    }
}

TEST_CASE("run_experiment writes CSV and summary") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "nilcorr_cfg_test";
    fs::remove_all(dir);
    ParseResult r = parse_config(kExampleConfig);
    REQUIRE(r.ok());
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.log = &log;
    CHECK(run_experiment(*r.config, opts) == kExitOk);
    CHECK(fs::exists(dir / "alpha.csv"));
    CHECK(fs::exists(dir / "alpha.summary.txt"));

    std::ifstream csv(dir / "alpha.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,re(alpha),im(alpha)");
    std::string first_row;
    std::getline(csv, first_row);
    CHECK(first_row.substr(0, 2) == "0,");
    fs::remove_all(dir);
}

TEST_CASE("runner exit codes") {
    std::ostringstream log;
    RunOptions opts;
    opts.log = &log;
    opts.out_dir = std::filesystem::temp_directory_path() / "nilcorr_cfg_test2";
    CHECK(run_config_text("experiment x { kind = \"correlate\" out = \"o.csv\" }", opts) == kExitValidation);
    CHECK(run_config_text("not a config at all {{{", opts) == kExitValidation);
    std::filesystem::remove_all(opts.out_dir);
}

TEST_CASE("nilseq blocks build evaluable sequences") {
    const char* text = R"cfg(
obs.char F { freq = [1] amp = 1+0i }
nilseq psi { space = "torus" g = ["sqrt(2)"] x = [0.0] F = "F" step = 1 }
poly q { coords = ["x"] }
experiment run { kind = "equidist" poly = "q" delta = 0.1 range = 0:10 out = "o.csv" }
)cfg";
    ParseResult r = parse_config(text);
    REQUIRE_MESSAGE(r.ok(), r.render_errors());
    Nilsequence psi = build_nilsequence(*r.config, "psi");
    CHECK(psi.step == 1);
    // psi(n) = e({n sqrt 2})
    Real128 s2 = Real128::sqrt_rational(2, 1);
    for (i64 n : {0, 1, 13}) {
        cplx v = nilsequence_eval(psi, n);
        CHECK(std::abs(v - e2pi(s2.mul_int(n).frac_double())) < 1e-12);
    }
}

TEST_CASE("runtime failures exit 2") {
    // out path collides with an existing file, so create_directories fails
    namespace fs = std::filesystem;
    fs::path blocker = fs::temp_directory_path() / "nilcorr_blocker";
    std::ofstream(blocker).put('x');
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = blocker / "sub";
    opts.log = &log;
    int rc = run_config_text("poly q { coords = [\"x\"] }\n"
                             "experiment e { kind = \"equidist\" poly = \"q\" delta = 0.1 range = 0:10 out = \"o.csv\" }",
                             opts);
    CHECK(rc == kExitRuntime);
    fs::remove(blocker);
}

TEST_CASE("equidist experiment emits the verdict column") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "nilcorr_cfg_test3";
    fs::remove_all(dir);
    const char* text = R"(
poly q { coords = ["1/3*x + 1/7"] }
experiment run { kind = "equidist" poly = "q" delta = 0.05 range = 0:100000 out = "d.csv" }
)";
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.log = &log;
    CHECK(run_config_text(text, opts) == kExitOk);
    std::ifstream csv(dir / "d.csv");
    std::string header, row;
    std::getline(csv, header);
    CHECK(header == "delta,hits,total,density,verdict");
    std::getline(csv, row);
    CHECK(row.find("exact-zero") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("suspend experiment reports tiny diffs off the exceptional set") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "nilcorr_cfg_test4";
    fs::remove_all(dir);
    std::string text = std::string(R"cfg(
system.torus rot { dim = 1 rank = 1 angles = [["1/2*sqrt(2)"]] }
obs.char f0 { freq = [1]  amp = 1+0i }
obs.char f1 { freq = [-1] amp = 1+0i }
poly q1 { coords = ["sqrt(2)*x"] }
correlation alpha { system = "rot" functions = ["f0","f1"] polys = ["q1"] brackets = ["floor"] integration = "exact" }
experiment run { kind = "suspend" target = "alpha" delta = 0.2 range = 0:64 out = "s.csv" }
)cfg");
    std::ostringstream log;
    RunOptions opts;
    opts.out_dir = dir;
    opts.log = &log;
    CHECK(run_config_text(text, opts) == kExitOk);
    std::ifstream csv(dir / "s.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "n,exceptional,re(alpha),re(alpha_tilde_scaled),abs_diff");
    int rows = 0;
    for (std::string row; std::getline(csv, row);) {
        ++rows;
        // column 2 is the exceptional marker; abs_diff is the last column
        std::size_t c1 = row.find(',');
        std::size_t c2 = row.find(',', c1 + 1);
        bool exc = row[c2 - 1] == '1';
        double diff = std::stod(row.substr(row.rfind(',') + 1));
        if (!exc) CHECK(diff <= 1e-12);
        CHECK(diff <= 2.0);
    }
    CHECK(rows == 64);
    fs::remove_all(dir);
}
