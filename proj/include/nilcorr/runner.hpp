#pragma once

// Executes a parsed experiment config: builds the systems, observables and
// polynomials it names, runs the experiment, and writes CSV plus a plain
// text summary.  Output is deterministic for a fixed config and
// NILCORR_THREADS (fixed-order reductions, 17-significant-digit CSV).

#include <filesystem>
#include <iosfwd>

#include "nilcorr/config.hpp"
#include "nilcorr/correlate.hpp"
#include "nilcorr/nilseq.hpp"

namespace nilcorr {

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::ostream* log = nullptr;  // summary echo (defaults to stdout)
};

// Exit codes: 0 success, 1 validation error, 2 runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

int run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// Convenience: parse text, report errors to log, run.
int run_config_text(std::string_view text, const RunOptions& options = {});

// Builders shared with the CLI and the python module.
std::shared_ptr<const LatticeAction> build_system(const ExperimentConfig& cfg, const std::string& name);
Observable build_observable(const ExperimentConfig& cfg, const std::string& name, const Space& space);
VectorPolynomial build_poly(const ExperimentConfig& cfg, const std::string& name);
CorrelationSpec build_correlation(const ExperimentConfig& cfg, const std::string& name);
Nilsequence build_nilsequence(const ExperimentConfig& cfg, const std::string& name);

// CSV cell for a real number: scientific, 17 significant digits.
std::string csv_real(double v);

}  // namespace nilcorr
