// Python bindings for the main operations: polynomial evaluation and
// brackets, Heisenberg group arithmetic, the correlation engine on the
// rotation example, equidistribution densities, averaging functionals,
// and config-driven experiment runs.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nilcorr/equidist.hpp"
#include "nilcorr/nilseq.hpp"
#include "nilcorr/runner.hpp"
#include "nilcorr/suspension.hpp"

namespace py = pybind11;
using namespace nilcorr;

namespace {

BracketMap bracket_map_from(const py::object& kinds, int ell) {
    if (py::isinstance<py::str>(kinds)) return BracketMap::uniform(parse_bracket_kind(kinds.cast<std::string>()), ell);
    std::vector<BracketKind> ks;
    for (const auto& k : kinds.cast<py::sequence>()) ks.push_back(parse_bracket_kind(k.cast<std::string>()));
    return BracketMap{std::move(ks)};
}

py::dict report_to_dict(const DensityReport& r) {
    py::dict d;
    d["delta"] = r.delta;
    d["scheme"] = r.scheme;
    d["hits"] = r.hits;
    d["total"] = r.total;
    d["density"] = r.density;
    d["verdict"] = std::string(verdict_name(r.verdict));
    return d;
}

// Python callables cannot be invoked from detached worker threads; pin the
// averaging loops to one worker for the duration of the call.
struct SingleThreadGuard {
    int saved = thread_count();
    SingleThreadGuard() { set_thread_count(1); }
    ~SingleThreadGuard() { set_thread_count(saved); }
};

HeisenbergElement heis_from(const std::tuple<double, double, double>& t) {
    return {std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

std::tuple<double, double, double> heis_to(const HeisenbergElement& g) { return {g.x, g.y, g.z}; }

}  // namespace

PYBIND11_MODULE(_nilcorr, m) {
    m.doc() = "multicorrelation sequences with integer-part polynomial iterates";
    m.attr("__version__") = "0.1.0";

    py::class_<VectorPolynomial>(m, "Poly")
        .def_static("parse", [](const std::string& text) { return parse_polynomial(text); }, py::arg("text"))
        .def_property_readonly("ell", [](const VectorPolynomial& q) { return q.ell; })
        .def_property_readonly("degree", [](const VectorPolynomial& q) { return q.degree; })
        .def("__str__", [](const VectorPolynomial& q) { return format_polynomial(q); })
        .def("eval", [](const VectorPolynomial& q, double t) { return eval_poly(q, t); }, py::arg("t"))
        .def(
            "floor_at",
            [](const VectorPolynomial& q, i64 n) {
                std::vector<i64> out;
                for (const auto& v : eval_at_integer(q, n)) out.push_back(static_cast<i64>(v.floor()));
                return out;
            },
            py::arg("n"))
        .def(
            "frac_at",
            [](const VectorPolynomial& q, i64 n) {
                std::vector<double> out;
                for (const auto& v : eval_at_integer(q, n)) out.push_back(v.frac());
                return out;
            },
            py::arg("n"))
        .def(
            "classify",
            [](const VectorPolynomial& q, int coordinate) {
                RationalityVerdict v = classify_rational(q, coordinate);
                py::dict d;
                switch (v.kind) {
                    case RationalityKind::RationalModConstant:
                        d["kind"] = "rational-mod-constant";
                        d["denominator"] = v.denominator;
                        break;
                    case RationalityKind::HasIrrationalNonconstant: d["kind"] = "has-irrational-nonconstant"; break;
                    case RationalityKind::Indeterminate: d["kind"] = "indeterminate"; break;
                }
                return d;
            },
            py::arg("coordinate") = 0);

    m.def("parse_poly", [](const std::string& text) { return parse_polynomial(text); }, py::arg("text"));

    m.def(
        "bracket",
        [](const std::vector<double>& x, const py::object& kinds) {
            return bracket(x, bracket_map_from(kinds, static_cast<int>(x.size())));
        },
        py::arg("x"), py::arg("kinds") = "floor");
    m.def("fractional", [](const std::vector<double>& x) { return fractional(std::span<const double>(x)); }, py::arg("x"));

    m.def(
        "heis_mul",
        [](const std::tuple<double, double, double>& a, const std::tuple<double, double, double>& b) {
            return heis_to(heis_mul(heis_from(a), heis_from(b)));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "heis_pow",
        [](const std::tuple<double, double, double>& g, i64 n) { return heis_to(heis_pow(heis_from(g), n)); },
        py::arg("g"), py::arg("n"));
    m.def(
        "nil_reduce",
        [](const std::tuple<double, double, double>& g) { return heis_to(nil_reduce(heis_from(g)).rep); },
        py::arg("g"));

    m.def("example_alpha", &example_alpha, py::arg("n"), "closed form of the guiding rotation example");
    m.def(
        "example_correlation",
        [](i64 n) {
            static const ExampleSpec spec = example_spec();
            return multicorrelation(spec.correlation, n);
        },
        py::arg("n"), "the same value through the correlation engine");
    m.def(
        "example_approx_errors",
        [](double epsilon, i64 N) {
            Nilsequence psi = example_nil_approx(epsilon);
            Sequence psi_fn = nilsequence_fn(psi);
            Sequence alpha_fn = [](i64 n) { return example_alpha(n); };
            PrimeSieve sieve = sieve_primes(static_cast<u64>(N));
            py::dict d;
            d["cesaro"] = approximation_error(alpha_fn, psi_fn, AveragingScheme::cesaro(1, N + 1));
            d["primes"] = approximation_error(alpha_fn, psi_fn, AveragingScheme::primes(N), &sieve);
            return d;
        },
        py::arg("epsilon"), py::arg("N") = 100000);

    m.def(
        "weyl_sum",
        [](const std::string& poly, i64 M, i64 N) { return weyl_sum(parse_polynomial(poly), M, N); },
        py::arg("poly"), py::arg("M"), py::arg("N"));
    m.def(
        "hit_density",
        [](const std::string& poly, double delta, i64 M, i64 N) {
            return report_to_dict(hit_density(parse_polynomial(poly), delta, M, N));
        },
        py::arg("poly"), py::arg("delta"), py::arg("M"), py::arg("N"));
    m.def(
        "hit_density_primes",
        [](const std::string& poly, double delta, i64 N, i64 r, i64 s) {
            PrimeSieve sieve = sieve_primes(static_cast<u64>(N));
            return report_to_dict(hit_density_primes(parse_polynomial(poly), delta, static_cast<u64>(N), r, s, sieve));
        },
        py::arg("poly"), py::arg("delta"), py::arg("N"), py::arg("r") = 1, py::arg("s") = 0);
    m.def(
        "exceptional",
        [](const std::string& poly, double delta, i64 n) {
            std::vector<VectorPolynomial> qs = {parse_polynomial(poly)};
            return exceptional(qs, delta, n);
        },
        py::arg("poly"), py::arg("delta"), py::arg("n"));

    m.def(
        "primes_upto",
        [](i64 N) {
            PrimeSieve sieve = sieve_primes(static_cast<u64>(N));
            std::vector<i64> out;
            sieve.for_primes(static_cast<u64>(N), [&](u64 p) { out.push_back(static_cast<i64>(p)); });
            return out;
        },
        py::arg("N"));
    m.def(
        "prime_pi", [](i64 N) { return sieve_primes(static_cast<u64>(N)).pi(static_cast<u64>(N)); }, py::arg("N"));

    m.def(
        "cesaro_average",
        [](const std::function<cplx(i64)>& seq, i64 M, i64 N) {
            SingleThreadGuard guard;
            return cesaro_average(seq, M, N);
        },
        py::arg("seq"), py::arg("M"), py::arg("N"));
    m.def(
        "prime_average",
        [](const std::function<cplx(i64)>& seq, i64 N, i64 r, i64 s) {
            SingleThreadGuard guard;
            PrimeSieve sieve = sieve_primes(static_cast<u64>(N));
            return prime_average(seq, sieve, static_cast<u64>(N), r, s);
        },
        py::arg("seq"), py::arg("N"), py::arg("r") = 1, py::arg("s") = 0);

    m.def(
        "run_config",
        [](const std::string& text, const std::string& out_dir) {
            std::ostringstream log;
            RunOptions opts;
            opts.out_dir = out_dir;
            opts.log = &log;
            int rc = run_config_text(text, opts);
            return py::make_tuple(rc, log.str());
        },
        py::arg("text"), py::arg("out_dir") = ".", "returns (exit_code, summary_text)");
    m.def(
        "config_errors",
        [](const std::string& text) {
            ParseResult r = parse_config(text);
            std::vector<std::pair<int, std::string>> out;
            for (const auto& e : r.errors) out.emplace_back(e.line, e.message);
            return out;
        },
        py::arg("text"));
    m.def("set_threads", &set_thread_count, py::arg("n"));
}
